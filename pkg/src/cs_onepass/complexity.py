"""Closed-form operation and clock-cycle counts for the reconstruction hardware.

All values are exact integer evaluations of the published formulas. The
comparator (O(log M)) and solver (O(KM + K^2)) entries are asymptotic; they are
reported with unit constants and marked as estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RangeError


@dataclass(frozen=True)
class FlopReport:
    additions: int
    multiplications: int
    extra: int = 0


@dataclass(frozen=True)
class CycleReport:
    threshold_block: int
    comparator: int
    r_block: int
    inversion_block: int
    solver_block: int
    estimated: tuple[str, ...] = ("comparator", "solver_block")


def _check_km(k: int, m: int):
    if k < 1 or m < 1:
        raise RangeError(f"need k >= 1 and m >= 1, got k={k}, m={m}")


def flops_qfree(k: int, m: int) -> FlopReport:
    """Cost of the triangular-factor solve ``R^-1 (R^-1)^H A^H y``."""
    _check_km(k, m)
    return FlopReport(2 * k * (k * k + k + 2 * m - 2), 4 * k * (k * k + m + k))


def flops_direct(k: int, m: int) -> FlopReport:
    """Cost of the Gram-matrix solve; ``extra`` is the K^2 inversion surcharge."""
    _check_km(k, m)
    return FlopReport(2 * k * (2 * m * k - k + 2 * m - 1), 4 * m * k * (k + 1), k * k)


def flops_qr(m: int, n: int) -> tuple[int, int]:
    """``(flops for R, flops for Q that are never spent)`` for an m x n matrix.

    The R count is the printed ``3n^2(m - n)/3`` taken literally.
    """
    if not m > n >= 1:
        raise RangeError(f"need m > n >= 1, got m={m}, n={n}")
    r_flops = 3 * n * n * (m - n) // 3
    q_flops = 4 * n * (m * m - n * n) // 3
    return r_flops, q_flops


def cycle_report(k: int, m: int) -> CycleReport:
    _check_km(k, m)
    return CycleReport(
        threshold_block=3 * m + 61,
        comparator=(m - 1).bit_length(),
        r_block=126 * k - 8,
        inversion_block=34 * k - 4,
        solver_block=k * m + k * k,
    )
