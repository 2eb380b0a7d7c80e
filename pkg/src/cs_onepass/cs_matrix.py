"""Partial Fourier (CS) matrix: rows at sample positions, columns at the support."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .detection import SupportSet
from .errors import DimensionError, EmptySupportError, RankWarning
from .signal_model import SamplingPattern, synthesis_kernel


@dataclass(frozen=True)
class CsMatrix:
    """Dense M x K matrix with ``entries[a, i] = exp(+j 2 pi n_a k_i / N)``.

    The synthesis sign makes ``y = entries @ X`` the literal measurement model.
    """

    n_total: int
    positions: np.ndarray
    support: np.ndarray
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("positions", "support", "entries"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.entries.shape != (len(self.positions), len(self.support)):
            raise DimensionError(f"entries shape {self.entries.shape} does not match "
                                 f"({len(self.positions)}, {len(self.support)})")

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def from_array(cls, a) -> "CsMatrix":
        """Wrap an arbitrary complex matrix (used by the factorization tests)."""
        a = np.atleast_2d(np.asarray(a, dtype=complex))
        m, k = a.shape
        return cls(0, np.arange(m), np.arange(k), a)


def build_cs_matrix(pattern: SamplingPattern, support: SupportSet, n_total: int) -> CsMatrix:
    if pattern.n_total != n_total or support.n_total != n_total:
        raise DimensionError(
            f"n_total mismatch: pattern {pattern.n_total}, support {support.n_total}, "
            f"requested {n_total}"
        )
    k = support.indices
    if len(k) == 0:
        raise EmptySupportError("cannot build a CS matrix for an empty support")
    if pattern.m < len(k):
        warnings.warn(f"M={pattern.m} < K={len(k)}: CS matrix is rank deficient",
                      RankWarning, stacklevel=2)
    entries = synthesis_kernel(pattern.positions, k, n_total)
    return CsMatrix(n_total, pattern.positions, k, entries)
