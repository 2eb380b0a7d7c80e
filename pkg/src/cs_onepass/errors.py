"""Exception types shared by the reconstruction modules."""


class CsError(ValueError):
    """Base class for every error raised by this package."""


class InvalidSpecError(CsError):
    pass


class RangeError(CsError):
    pass


class DimensionError(CsError):
    pass


class EmptySupportError(CsError):
    pass


class SingularMatrixError(CsError):
    """Raised when a triangular or Gram matrix cannot be inverted.

    ``index`` holds the offending diagonal position when known.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ConfigError(CsError):
    pass


class RankWarning(UserWarning):
    """Fewer measurement rows than unknowns; the factor is rank deficient."""
