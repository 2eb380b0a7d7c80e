"""Inverse of an upper-triangular R, directly and on a triangular systolic array.

Both paths compute column j of the inverse bottom-up:

    inv[j, j] = -(-1) / r[j, j]
    u[i, j]   = sum_{k=j..i+1} r[i, k] * inv[k, j]      (accumulated from k = j down)
    inv[i, j] = -u[i, j] / r[i, i]

so diagonal cells always evaluate ``-a / r_ii`` with ``a`` either -1 or the
accumulated ``u``. The two paths use the same operation order and agree bit
for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, SingularMatrixError
from .givens_qr import RFactor
from .systolic import Job, SystolicConfig, SystolicTrace, TriangularArray

SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class InverseFactor:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise DimensionError(f"inverse must be square, got {e.shape}")
        if np.any(np.tril(e, -1) != 0):
            raise DimensionError("inverse must be upper triangular")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


def _entries(r) -> np.ndarray:
    e = r.entries if isinstance(r, (RFactor, InverseFactor)) else np.asarray(r, dtype=complex)
    if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got {e.shape}")
    if np.any(np.tril(e, -1) != 0):
        raise DimensionError("matrix is not upper triangular")
    return e


def check_nonsingular(r: np.ndarray) -> None:
    diag = np.abs(np.diag(r))
    tol = SINGULAR_RTOL * diag.max()
    bad = np.flatnonzero(diag <= tol)
    if bad.size:
        raise SingularMatrixError(
            f"diagonal entry {bad[0]} has magnitude {diag[bad[0]]:.3g} <= {tol:.3g}",
            index=int(bad[0]),
        )


def invert_upper_triangular(r) -> InverseFactor:
    e = _entries(r)
    check_nonsingular(e)
    k = e.shape[0]
    inv = np.zeros((k, k), dtype=complex)
    for j in range(k):
        inv[j, j] = -(-1.0) / e[j, j]
        for i in range(j - 1, -1, -1):
            u = 0j
            for kk in range(j, i, -1):
                u = u + e[i, kk] * inv[kk, j]
            inv[i, j] = -u / e[i, i]
    return InverseFactor(inv)


def systolic_invert(r, config: SystolicConfig) -> tuple[InverseFactor, SystolicTrace]:
    """Simulate the triangular inversion array.

    Diagonal (divider) cells hold ``r_ii`` and emit inverse elements; the
    cells above the diagonal hold ``r_ik`` and add ``r_ik * inv[k, j]`` to the
    partial sum passed along row i. Every diagonal cell starts at cycle 0
    with input -1, so with unit latencies ``inv[i, j]`` appears after
    ``2 (j - i) + 1`` cycles and the whole inverse after ``2K - 1``.
    """
    e = _entries(r)
    k = e.shape[0]
    if config.k_active != k:
        raise DimensionError(f"{config.k_active} enabled columns for an order-{k} factor")
    check_nonsingular(e)

    grid = TriangularArray(config)
    inv = np.zeros((k, k), dtype=complex)

    def divider_job(i, j):
        def run(inputs):
            a = -1.0 if i == j else inputs[0]
            out = -a / e[i, i]
            inv[i, j] = out
            return {("inv", i, j): out}, (a,), (out,), e[i, i]
        needs = () if i == j else (("u", i, i + 1, j),)
        return Job(needs, run)

    def mac_job(i, kk, j):
        def run(inputs):
            if kk == j:
                (x,), u_in = inputs, 0j
            else:
                x, u_in = inputs
            u_out = u_in + e[i, kk] * x
            return {("u", i, kk, j): u_out}, (u_in, x), (u_out,), e[i, kk]
        needs = (("inv", kk, j),) if kk == j else (("inv", kk, j), ("u", i, kk + 1, j))
        return Job(needs, run)

    for i in range(k):
        for j in range(i, k):
            grid.add_job((i, i), divider_job(i, j))
        for kk in range(i + 1, k):
            for j in range(kk, k):
                grid.add_job((i, kk), mac_job(i, kk, j))

    trace = grid.run()
    return InverseFactor(inv), trace
