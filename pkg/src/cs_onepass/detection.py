"""Initial Fourier transform, missing-sample noise variance, threshold and support.

The spectrum is kept unnormalized (a plain sum over the available samples);
``detect_support`` divides by N before comparing with the threshold, which
carries its own 1/N prefactor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, RangeError
from .signal_model import MeasurementSet

# ln(1 - 0.99**(1/1024)); used when the signal length is unknown at setup.
FALLBACK_APPROX_CONSTANT = -11.53


class ThresholdMode(enum.Enum):
    EXACT = "exact"
    APPROX = "approx"


@dataclass(frozen=True)
class Spectrum:
    n_total: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if len(c) != self.n_total:
            raise DimensionError(f"{len(c)} coefficients for n_total={self.n_total}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class ThresholdParams:
    """Threshold configuration.

    ``approx_constant`` is only read in APPROX mode. When left as ``None`` the
    fixed fallback for P=0.99, N=1024 is used; build with :meth:`for_length`
    to freeze C for a known signal length instead.
    """

    probability: float = 0.99
    mode: ThresholdMode = ThresholdMode.EXACT
    approx_constant: float | None = None

    def __post_init__(self):
        if not 0.0 < self.probability < 1.0:
            raise RangeError(f"probability must be in (0, 1), got {self.probability}")
        if self.approx_constant is not None and not self.approx_constant < 0:
            raise RangeError(f"approx_constant must be negative, got {self.approx_constant}")
        object.__setattr__(self, "mode", ThresholdMode(self.mode))

    @classmethod
    def for_length(cls, probability: float, n_total: int) -> "ThresholdParams":
        return cls(probability, ThresholdMode.APPROX, approx_constant(probability, n_total))

    @property
    def constant(self) -> float:
        if self.approx_constant is None:
            return FALLBACK_APPROX_CONSTANT
        return self.approx_constant


@dataclass(frozen=True)
class SupportSet:
    """Comparator output ``mask`` and the sorted positions where it is set."""

    n_total: int
    mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.mask, dtype=bool).reshape(-1)
        if len(m) != self.n_total:
            raise DimensionError(f"mask length {len(m)} != n_total {self.n_total}")
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @classmethod
    def from_indices(cls, n_total: int, indices) -> "SupportSet":
        mask = np.zeros(n_total, dtype=bool)
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n_total):
            raise DimensionError(f"support index out of [0, {n_total})")
        mask[idx] = True
        return cls(n_total, mask)

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def k(self) -> int:
        return int(self.mask.sum())

    def __len__(self) -> int:
        return self.k


def initial_transform(meas: MeasurementSet, n_total: int) -> Spectrum:
    """Fourier transform of the available samples with missing ones set to zero."""
    if n_total < meas.m:
        raise DimensionError(f"n_total={n_total} smaller than M={meas.m}")
    if meas.pattern.positions[-1] >= n_total:
        raise DimensionError("sample position beyond n_total")
    z = np.zeros(n_total, dtype=complex)
    z[meas.pattern.positions] = meas.values
    return Spectrum(n_total, np.fft.fft(z))


def initial_transform_direct(meas: MeasurementSet, n_total: int) -> Spectrum:
    """Brute-force double sum; O(N*M), kept as a reference for the FFT path."""
    if n_total < meas.m:
        raise DimensionError(f"n_total={n_total} smaller than M={meas.m}")
    k = np.arange(n_total)
    nk = np.remainder(np.outer(k, meas.pattern.positions), n_total)
    return Spectrum(n_total, np.exp(-2j * np.pi * nk / n_total) @ meas.values)


def noise_variance(meas: MeasurementSet, n_total: int) -> float:
    """Variance of the spectral noise caused by the N - M missing samples."""
    if n_total < 2:
        raise RangeError(f"n_total must be >= 2, got {n_total}")
    if n_total < meas.m:
        raise DimensionError(f"n_total={n_total} smaller than M={meas.m}")
    mu = (n_total - meas.m) / (n_total - 1)
    return mu * float(np.sum(np.abs(meas.values) ** 2))


def approx_constant(probability: float, n_total: int) -> float:
    """``ln(1 - P**(1/N))``, evaluated without cancellation for large N."""
    if not 0.0 < probability < 1.0:
        raise RangeError(f"probability must be in (0, 1), got {probability}")
    if n_total < 1:
        raise RangeError(f"n_total must be >= 1, got {n_total}")
    # 1 - P**(1/N) == -expm1(ln(P)/N)
    return math.log(-math.expm1(math.log(probability) / n_total))


def compute_threshold(sigma_sq: float, n_total: int, params: ThresholdParams) -> float:
    if sigma_sq < 0:
        raise RangeError(f"sigma_sq must be non-negative, got {sigma_sq}")
    if params.mode is ThresholdMode.EXACT:
        c = approx_constant(params.probability, n_total)
    else:
        c = params.constant
    return math.sqrt(-sigma_sq * c) / n_total


def detect_support(spectrum: Spectrum, threshold: float) -> SupportSet:
    """Comparator: flag bins whose normalized magnitude is strictly above T."""
    if threshold < 0:
        raise RangeError(f"threshold must be non-negative, got {threshold}")
    return SupportSet(spectrum.n_total, np.abs(spectrum.coeffs) / spectrum.n_total > threshold)
