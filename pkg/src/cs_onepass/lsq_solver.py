"""Amplitude least squares over the detected support and the one-pass pipeline.

``solve_qfree`` uses only the triangular factor: since ``A^H A = R^H R``,
the normal-equation solution is ``R^-1 (R^-1)^H (A^H y)``. ``solve_direct``
forms the Gram matrix and is kept as the reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cs_matrix import CsMatrix, build_cs_matrix
from .detection import (
    Spectrum,
    SupportSet,
    ThresholdMode,
    ThresholdParams,
    compute_threshold,
    detect_support,
    initial_transform,
    noise_variance,
)
from .errors import DimensionError, SingularMatrixError
from .givens_qr import givens_r
from .signal_model import MeasurementSet, TimeSignal, synthesis_kernel
from .tri_inv import invert_upper_triangular


@dataclass
class OpTally:
    """Real-operation counts of the products a solver actually performed.

    A complex product of a p x n and an n x m matrix costs ``4pmn`` real
    multiplications and ``4pmn - 2pm`` real additions.
    """

    additions: int = 0
    multiplications: int = 0

    def product(self, p: int, n: int, m: int):
        self.multiplications += 4 * p * m * n
        self.additions += 4 * p * m * n - 2 * p * m


def _matmul(a: np.ndarray, b: np.ndarray, tally: OpTally | None) -> np.ndarray:
    if tally is not None:
        bb = b.reshape(b.shape[0], -1)
        tally.product(a.shape[0], a.shape[1], bb.shape[1])
    return a @ b


@dataclass(frozen=True)
class AmplitudeSolution:
    support: SupportSet
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if len(amps) != self.support.k:
            raise DimensionError(f"{len(amps)} amplitudes for {self.support.k} support entries")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


def _support_of(a: CsMatrix) -> SupportSet:
    n = a.n_total if a.n_total > 0 else int(a.support.max()) + 1
    return SupportSet.from_indices(n, a.support)


def _check_shapes(a: CsMatrix, y: MeasurementSet):
    if a.m != y.m:
        raise DimensionError(f"CS matrix has {a.m} rows but there are {y.m} measurements")
    if a.k < 1:
        raise DimensionError("support must be non-empty")


def solve_direct(a: CsMatrix, y: MeasurementSet) -> AmplitudeSolution:
    """Normal equations ``(A^H A)^-1 A^H y`` with an explicit Gram matrix."""
    _check_shapes(a, y)
    ah = a.entries.conj().T
    gram = ah @ a.entries
    if a.m < a.k or np.linalg.matrix_rank(gram) < a.k:
        raise SingularMatrixError(f"Gram matrix of order {a.k} is singular")
    return AmplitudeSolution(_support_of(a), np.linalg.solve(gram, ah @ y.values))


def solve_qfree(
    a: CsMatrix,
    y: MeasurementSet,
    order: str = "right_to_left",
    tally: OpTally | None = None,
) -> AmplitudeSolution:
    """Least squares through R only: ``R^-1 (R^-1)^H (A^H y)``.

    ``order="right_to_left"`` applies three matrix-vector products.
    ``order="gram_first"`` forms the K x K product ``R^-1 (R^-1)^H`` first;
    it is slower but is the evaluation the published operation counts
    assume. Pass an :class:`OpTally` to record the cost of the products.
    """
    _check_shapes(a, y)
    if order not in ("right_to_left", "gram_first"):
        raise ValueError(f"unknown evaluation order {order!r}")
    r = givens_r(a)
    if a.m < a.k:
        raise SingularMatrixError(f"M={a.m} < K={a.k}: R is singular")
    r_inv = invert_upper_triangular(r).entries
    r_inv_h = r_inv.conj().T
    ahy = _matmul(a.entries.conj().T, y.values, tally)
    if order == "right_to_left":
        x = _matmul(r_inv, _matmul(r_inv_h, ahy, tally), tally)
    else:
        x = _matmul(_matmul(r_inv, r_inv_h, tally), ahy, tally)
    return AmplitudeSolution(_support_of(a), x)


def reconstruct_time(sol: AmplitudeSolution, n_total: int) -> TimeSignal:
    k = sol.support.indices
    if k.size and k.max() >= n_total:
        raise DimensionError(f"support index {k.max()} out of range for n_total={n_total}")
    if k.size == 0:
        return TimeSignal(np.zeros(n_total, dtype=complex))
    return TimeSignal(synthesis_kernel(np.arange(n_total), k, n_total) @ sol.amplitudes)


@dataclass(frozen=True)
class ReconstructionReport:
    """Every intermediate of one pass through the pipeline.

    ``detections`` and ``solves`` count how often each stage ran; the
    algorithm has no refinement loop, so both are at most 1.
    """

    n_total: int
    m: int
    detected_support: SupportSet
    amplitudes: np.ndarray = field(repr=False)
    residual_norm: float = 0.0
    threshold_used: float = 0.0
    sigma_sq: float = 0.0
    threshold_mode: ThresholdMode = ThresholdMode.EXACT
    probability: float = 0.99
    empty_support: bool = False
    detections: int = 1
    solves: int = 0
    tally: OpTally | None = None
    spectrum: Spectrum | None = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return self.detected_support.k


def run_pipeline(
    meas: MeasurementSet,
    n_total: int,
    params: ThresholdParams | None = None,
) -> tuple[ReconstructionReport, TimeSignal]:
    """Detect the support once, solve once, synthesize the recovered signal."""
    params = params or ThresholdParams()
    spectrum = initial_transform(meas, n_total)
    sigma_sq = noise_variance(meas, n_total)
    threshold = compute_threshold(sigma_sq, n_total, params)
    support = detect_support(spectrum, threshold)
    common = dict(
        n_total=n_total,
        m=meas.m,
        detected_support=support,
        threshold_used=threshold,
        sigma_sq=sigma_sq,
        threshold_mode=params.mode,
        probability=params.probability,
        spectrum=spectrum,
    )
    if support.k == 0:
        report = ReconstructionReport(
            amplitudes=np.zeros(0, dtype=complex),
            residual_norm=float(np.linalg.norm(meas.values)),
            empty_support=True,
            **common,
        )
        return report, TimeSignal(np.zeros(n_total, dtype=complex))

    a = build_cs_matrix(meas.pattern, support, n_total)
    tally = OpTally()
    sol = solve_qfree(a, meas, tally=tally)
    residual = float(np.linalg.norm(a.entries @ sol.amplitudes - meas.values))
    report = ReconstructionReport(
        amplitudes=sol.amplitudes,
        residual_norm=residual,
        solves=1,
        tally=tally,
        **common,
    )
    return report, reconstruct_time(sol, n_total)
