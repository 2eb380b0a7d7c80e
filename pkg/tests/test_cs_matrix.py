import cmath

import numpy as np
import pytest

from cs_onepass.cs_matrix import build_cs_matrix
from cs_onepass.detection import SupportSet
from cs_onepass.errors import DimensionError, EmptySupportError, RankWarning
from cs_onepass.signal_model import (
    SamplingPattern,
    SparseSignal,
    draw_pattern,
    full_pattern,
    random_sparse_signal,
    sample,
    synthesize,
)


def test_one_by_one():
    a = build_cs_matrix(SamplingPattern(1, [0]), SupportSet.from_indices(1, [0]), 1)
    assert a.entries.tolist() == [[1]]


def test_full_kernel_reproduces_synthesis(rng):
    a = build_cs_matrix(full_pattern(4), SupportSet.from_indices(4, range(4)), 4)
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    spec = SparseSignal(4, tuple(enumerate(amps)))
    np.testing.assert_allclose(a.entries @ amps, synthesize(spec).samples, atol=1e-14)


def test_entries_match_kernel():
    pattern = SamplingPattern(8, [0, 2, 5])
    a = build_cs_matrix(pattern, SupportSet.from_indices(8, [1, 3]), 8)
    for r, n in enumerate([0, 2, 5]):
        for c, k in enumerate([1, 3]):
            assert abs(a.entries[r, c] - cmath.exp(2j * cmath.pi * n * k / 8)) < 1e-12
    np.testing.assert_allclose(np.abs(a.entries), 1.0, atol=1e-12)


def test_measurement_model_is_exact(rng):
    for _ in range(20):
        n = int(rng.integers(8, 200))
        k = int(rng.integers(1, min(n, 12)))
        spec = random_sparse_signal(n, k, rng, unit_amplitude=False)
        pattern = draw_pattern(n, int(rng.integers(1, n + 1)), rng)
        y = sample(synthesize(spec), pattern).values
        a = build_cs_matrix(pattern, SupportSet.from_indices(n, spec.support), n)
        assert np.linalg.norm(a.entries @ spec.amplitudes - y) <= 1e-10 * max(np.linalg.norm(y), 1)


def test_selection_from_full_matrix():
    n = 16
    full = np.array([[cmath.exp(2j * cmath.pi * t * f / n) for f in range(n)] for t in range(n)])
    pattern = SamplingPattern(n, [1, 4, 6, 11, 15])
    support = SupportSet.from_indices(n, [0, 5, 9])
    a = build_cs_matrix(pattern, support, n)
    np.testing.assert_allclose(a.entries, full[np.ix_([1, 4, 6, 11, 15], [0, 5, 9])], atol=1e-14)


def test_errors():
    with pytest.raises(EmptySupportError):
        build_cs_matrix(full_pattern(4), SupportSet(4, [False] * 4), 4)
    with pytest.raises(DimensionError):
        build_cs_matrix(full_pattern(4), SupportSet.from_indices(8, [1]), 4)


def test_underdetermined_flagged():
    with pytest.warns(RankWarning):
        build_cs_matrix(SamplingPattern(8, [0]), SupportSet.from_indices(8, [1, 2]), 8)
