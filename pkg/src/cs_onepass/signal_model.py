"""Sparse test signals, random sampling patterns and measurement extraction.

Synthesis uses ``x(n) = sum_i A_i exp(+j 2 pi k_i n / N)`` without a 1/N
factor, so least squares over the detected support returns the component
amplitudes directly. All indices are zero-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidSpecError, RangeError


@dataclass(frozen=True)
class SparseSignal:
    """K-sparse spectrum of a length-``n_total`` signal.

    Parameters
    ----------
    n_total : int
        Signal length N.
    components : tuple of (int, complex)
        ``(freq_index, amplitude)`` pairs with distinct indices in [0, N).
    """

    n_total: int
    components: tuple[tuple[int, complex], ...]

    def __post_init__(self):
        comps = tuple((int(k), complex(a)) for k, a in self.components)
        object.__setattr__(self, "components", comps)
        if self.n_total < 1:
            raise InvalidSpecError(f"n_total must be positive, got {self.n_total}")
        if not 1 <= len(comps) <= self.n_total:
            raise InvalidSpecError(
                f"component count must be in [1, {self.n_total}], got {len(comps)}"
            )
        idx = [k for k, _ in comps]
        if len(set(idx)) != len(idx):
            raise InvalidSpecError(f"duplicate freq_index in {idx}")
        if any(not 0 <= k < self.n_total for k in idx):
            raise InvalidSpecError(f"freq_index out of [0, {self.n_total}): {idx}")

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def support(self) -> np.ndarray:
        return np.array([k for k, _ in self.components], dtype=np.int64)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for _, a in self.components], dtype=complex)


@dataclass(frozen=True)
class TimeSignal:
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.samples, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class SamplingPattern:
    """Positions ``n_a`` of the available samples, strictly increasing."""

    n_total: int
    positions: np.ndarray

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.int64).reshape(-1)
        if self.n_total < 1:
            raise RangeError(f"n_total must be positive, got {self.n_total}")
        if not 1 <= len(pos) <= self.n_total:
            raise RangeError(f"M must be in [1, {self.n_total}], got {len(pos)}")
        if np.any(np.diff(pos) <= 0):
            raise RangeError("positions must be strictly increasing")
        if pos[0] < 0 or pos[-1] >= self.n_total:
            raise RangeError(f"positions must lie in [0, {self.n_total})")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def m(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class MeasurementSet:
    pattern: SamplingPattern
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if len(vals) != self.pattern.m:
            raise DimensionError(
                f"{len(vals)} values for {self.pattern.m} positions"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.pattern.m

    @property
    def n_total(self) -> int:
        return self.pattern.n_total


def synthesis_kernel(n: np.ndarray, k: np.ndarray, n_total: int) -> np.ndarray:
    """``exp(+j 2 pi n k / N)`` on the outer grid of ``n`` and ``k``.

    The product ``n*k`` is reduced mod N in integer arithmetic first so large
    indices do not lose phase accuracy.
    """
    nk = np.remainder(np.outer(np.asarray(n, np.int64), np.asarray(k, np.int64)), n_total)
    return np.exp(2j * np.pi * nk / n_total)


def synthesize(spec: SparseSignal) -> TimeSignal:
    n = np.arange(spec.n_total)
    return TimeSignal(synthesis_kernel(n, spec.support, spec.n_total) @ spec.amplitudes)


def random_sparse_signal(
    n_total: int,
    k: int,
    seed: int | np.random.Generator,
    unit_amplitude: bool = True,
) -> SparseSignal:
    """Draw a K-sparse spectrum with a uniformly random support.

    With ``unit_amplitude`` every component has amplitude 1; otherwise
    amplitudes are unit-modulus with uniform random phase.
    """
    if not 1 <= k <= n_total:
        raise RangeError(f"k must be in [1, {n_total}], got {k}")
    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(n_total, size=k, replace=False))
    if unit_amplitude:
        amps = np.ones(k, dtype=complex)
    else:
        amps = np.exp(2j * np.pi * rng.random(k))
    return SparseSignal(n_total, tuple(zip(support.tolist(), amps.tolist())))


def draw_pattern(n_total: int, m: int, seed: int | np.random.Generator) -> SamplingPattern:
    """Choose ``m`` of ``n_total`` positions uniformly without replacement."""
    if n_total < 1 or not 1 <= m <= n_total:
        raise RangeError(f"need 1 <= m <= n_total, got m={m}, n_total={n_total}")
    rng = np.random.default_rng(seed)
    positions = np.sort(rng.choice(n_total, size=m, replace=False))
    return SamplingPattern(n_total, positions)


def full_pattern(n_total: int) -> SamplingPattern:
    return SamplingPattern(n_total, np.arange(n_total))


def sample(x: TimeSignal, pattern: SamplingPattern) -> MeasurementSet:
    if len(x) != pattern.n_total:
        raise DimensionError(
            f"signal length {len(x)} does not match pattern n_total {pattern.n_total}"
        )
    return MeasurementSet(pattern, x.samples[pattern.positions])
