"""One-pass threshold reconstruction of Fourier-sparse signals.

Detection by a missing-sample noise threshold, amplitudes by least squares
through the Givens R factor only, plus cycle-level models of the QR and
triangular-inversion systolic arrays.
"""

from .complexity import CycleReport, FlopReport, cycle_report, flops_direct, flops_qfree, flops_qr
from .cs_matrix import CsMatrix, build_cs_matrix
from .detection import (
    Spectrum,
    SupportSet,
    ThresholdMode,
    ThresholdParams,
    approx_constant,
    compute_threshold,
    detect_support,
    initial_transform,
    noise_variance,
)
from .errors import (
    ConfigError,
    CsError,
    DimensionError,
    EmptySupportError,
    InvalidSpecError,
    RangeError,
    RankWarning,
    SingularMatrixError,
)
from .givens_qr import (
    RFactor,
    RotationCoeffs,
    boundary_cell_update,
    givens_r,
    internal_cell_update,
    systolic_qr,
)
from .lsq_solver import (
    AmplitudeSolution,
    OpTally,
    ReconstructionReport,
    reconstruct_time,
    run_pipeline,
    solve_direct,
    solve_qfree,
)
from .signal_model import (
    MeasurementSet,
    SamplingPattern,
    SparseSignal,
    TimeSignal,
    draw_pattern,
    sample,
    synthesize,
)
from .systolic import SystolicConfig, SystolicTrace
from .tri_inv import InverseFactor, invert_upper_triangular, systolic_invert

__version__ = "0.1.0"
