"""Upper-triangular factor R of a complex matrix by row-wise Givens rotations.

Rotations have the form ``[[c, s], [-conj(s), c]]`` with real ``c >= 0``; on
real data the cell rules collapse to the textbook real Givens formulas. The
orthogonal factor is never formed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .cs_matrix import CsMatrix
from .errors import DimensionError, RankWarning
from .systolic import Job, SystolicConfig, SystolicTrace, TriangularArray


@dataclass(frozen=True)
class RotationCoeffs:
    c: float
    s: complex


@dataclass(frozen=True)
class RFactor:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        r = np.array(self.entries, dtype=complex)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise DimensionError(f"R must be square, got shape {r.shape}")
        if np.any(np.tril(r, -1) != 0):
            raise DimensionError("R must be upper triangular")
        r.setflags(write=False)
        object.__setattr__(self, "entries", r)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


def boundary_cell_update(r: complex, x_in: complex) -> tuple[float, RotationCoeffs]:
    """Circle cell: absorb ``x_in`` into the diagonal value ``r``.

    Returns the new (real, non-negative) diagonal and the rotation that maps
    ``(r, x_in)`` to ``(r_new * phase(r), 0)``. Inside the array ``r`` is always
    real and non-negative, so the phase is 1.
    """
    r, x = complex(r), complex(x_in)
    big = max(abs(r), abs(x))
    if big == 0.0:
        return 0.0, RotationCoeffs(1.0, 0j)
    # exact power-of-two rescale keeps subnormal inputs at full precision
    scale = math.ldexp(1.0, math.frexp(big)[1])
    r_s, x_s = r / scale, x / scale
    abs_r = abs(r_s)
    rho = math.hypot(abs_r, abs(x_s))
    phase = complex(r_s.real / abs_r, r_s.imag / abs_r) if abs_r != 0.0 else 1.0
    s = phase * complex(x_s.real / rho, -x_s.imag / rho)
    return rho * scale, RotationCoeffs(abs_r / rho, s)


def internal_cell_update(r: complex, r_in: complex, coeffs: RotationCoeffs) -> tuple[complex, complex]:
    """Rectangular cell: rotate the stored value against the incoming one."""
    c, s = coeffs.c, coeffs.s
    return c * r + s * r_in, -np.conj(s) * r + c * r_in


def absorb_row(r: np.ndarray, row: np.ndarray) -> None:
    """Rotate one new row of A into the triangular ``r`` in place."""
    k = r.shape[0]
    x = np.array(row, dtype=complex)
    for i in range(k):
        r_ii, coeffs = boundary_cell_update(r[i, i], x[i])
        r[i, i] = r_ii
        x[i] = 0
        for j in range(i + 1, k):
            r[i, j], x[j] = internal_cell_update(r[i, j], x[j], coeffs)


def _as_array(a) -> np.ndarray:
    arr = a.entries if isinstance(a, CsMatrix) else np.asarray(a, dtype=complex)
    arr = np.atleast_2d(arr)
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"matrix must be at least 1x1, got {arr.shape}")
    return arr


def givens_r(a) -> RFactor:
    """R with ``R^H R == A^H A``, absorbing rows of ``a`` in index order."""
    arr = _as_array(a)
    m, k = arr.shape
    if m < k:
        warnings.warn(f"M={m} < K={k}: R is rank deficient", RankWarning, stacklevel=2)
    r = np.zeros((k, k), dtype=complex)
    for row in arr:
        absorb_row(r, row)
    return RFactor(r)


def systolic_qr(a, config: SystolicConfig) -> tuple[RFactor, SystolicTrace]:
    """Simulate the triangular Givens array on ``a``.

    Row ``a`` of the input enters column ``j`` at cycle ``a + j``. Boundary
    cells pass rotation coefficients to the right, internal cells pass the
    rotated remainder down one row. Columns with a cleared enable bit hold no
    jobs and never fire.
    """
    arr = _as_array(a)
    m, k = arr.shape
    if config.k_active != k:
        raise DimensionError(f"{config.k_active} enabled columns for a matrix with K={k}")
    if m < k:
        warnings.warn(f"M={m} < K={k}: R is rank deficient", RankWarning, stacklevel=2)

    grid = TriangularArray(config)
    stored = np.zeros((k, k), dtype=complex)

    def boundary_job(i, a_idx):
        def run(inputs):
            (x,) = inputs
            r_new, coeffs = boundary_cell_update(stored[i, i], x)
            stored[i, i] = r_new
            out = {}
            if i + 1 < k:
                out[("cs", i, i + 1, a_idx)] = coeffs
            return out, (x,), (coeffs.c, coeffs.s), stored[i, i]
        return Job((("x", i, i, a_idx),), run)

    def internal_job(i, j, a_idx):
        def run(inputs):
            x, coeffs = inputs
            r_new, w_out = internal_cell_update(stored[i, j], x, coeffs)
            stored[i, j] = r_new
            out = {("x", i + 1, j, a_idx): w_out}
            if j + 1 < k:
                out[("cs", i, j + 1, a_idx)] = coeffs
            return out, (x, coeffs.c, coeffs.s), (w_out,), r_new
        return Job((("x", i, j, a_idx), ("cs", i, j, a_idx)), run)

    for a_idx in range(m):
        for j in range(k):
            grid.inject(("x", 0, j, a_idx), complex(arr[a_idx, j]), cycle=a_idx + j)
    for i in range(k):
        for j in range(i, k):
            for a_idx in range(m):
                job = boundary_job(i, a_idx) if i == j else internal_job(i, j, a_idx)
                grid.add_job((i, j), job)

    trace = grid.run()
    return RFactor(stored), trace
