import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cs_onepass.errors import DimensionError, InvalidSpecError, RangeError
from cs_onepass.signal_model import (
    SamplingPattern,
    SparseSignal,
    TimeSignal,
    draw_pattern,
    full_pattern,
    sample,
    synthesize,
)


def brute_synth(n_total, comps):
    return [sum(a * cmath.exp(2j * cmath.pi * k * n / n_total) for k, a in comps)
            for n in range(n_total)]


class TestSynthesize:
    def test_dc(self):
        x = synthesize(SparseSignal(4, ((0, 1 + 0j),)))
        np.testing.assert_allclose(x.samples, [1, 1, 1, 1], atol=1e-15)

    def test_unit_exponential(self):
        x = synthesize(SparseSignal(4, ((1, 1 + 0j),)))
        np.testing.assert_allclose(x.samples, [1, 1j, -1, -1j], atol=1e-15)

    def test_two_components_match_direct_sum(self):
        comps = ((1, 1.0), (3, 0.5))
        x = synthesize(SparseSignal(8, comps))
        np.testing.assert_allclose(x.samples, brute_synth(8, comps), atol=1e-14)

    def test_duplicate_index_rejected(self):
        with pytest.raises(InvalidSpecError):
            SparseSignal(8, ((1, 1.0), (1, 2.0)))

    def test_component_count_bounds(self):
        with pytest.raises(InvalidSpecError):
            SparseSignal(4, ())
        with pytest.raises(InvalidSpecError):
            SparseSignal(4, ((4, 1.0),))

    def test_samples_are_read_only(self):
        x = synthesize(SparseSignal(4, ((0, 1.0),)))
        with pytest.raises(ValueError):
            x.samples[0] = 2


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_dft_recovers_amplitudes(data):
    n = data.draw(st.integers(1, 64))
    k = data.draw(st.integers(1, n))
    idx = data.draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True))
    amps = data.draw(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                 allow_infinity=False),
                              min_size=k, max_size=k))
    spec = SparseSignal(n, tuple(zip(idx, amps)))
    spectrum = np.fft.fft(synthesize(spec).samples) / n
    expected = np.zeros(n, dtype=complex)
    expected[idx] = amps
    np.testing.assert_allclose(spectrum, expected, rtol=0, atol=1e-12)


class TestDrawPattern:
    def test_full_sampling(self):
        for seed in range(5):
            assert draw_pattern(4, 4, seed).positions.tolist() == [0, 1, 2, 3]

    def test_deterministic(self):
        a, b = draw_pattern(1024, 256, 7), draw_pattern(1024, 256, 7)
        assert np.array_equal(a.positions, b.positions)

    def test_uniform_inclusion_frequency(self):
        counts = np.zeros(1024)
        for seed in range(1000):
            counts[draw_pattern(1024, 256, seed).positions] += 1
        freq = counts / 1000
        assert np.all(np.abs(freq - 0.25) <= 0.05)

    @pytest.mark.parametrize("m", [0, 5])
    def test_range_error(self, m):
        with pytest.raises(RangeError):
            draw_pattern(4, m, 0)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 300), st.data(), st.integers(0, 2**32 - 1))
    def test_always_valid(self, n, data, seed):
        m = data.draw(st.integers(1, n))
        p = draw_pattern(n, m, seed)
        assert p.m == m
        assert np.all(np.diff(p.positions) > 0)
        assert 0 <= p.positions[0] and p.positions[-1] < n


class TestSample:
    def test_pick(self):
        meas = sample(TimeSignal([1, 2, 3, 4]), SamplingPattern(4, [0, 2]))
        assert meas.values.tolist() == [1, 3]

    def test_full_pattern_identity(self, rng):
        x = TimeSignal(rng.normal(size=16) + 1j * rng.normal(size=16))
        assert np.array_equal(sample(x, full_pattern(16)).values, x.samples)

    def test_random_elementwise(self, rng):
        x = TimeSignal(rng.normal(size=64) + 1j * rng.normal(size=64))
        p = draw_pattern(64, 20, rng)
        meas = sample(x, p)
        for a, n in enumerate(p.positions):
            assert meas.values[a] == x.samples[n]

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            sample(TimeSignal([1, 2, 3]), SamplingPattern(4, [0, 1]))

    def test_round_trip_synthesis(self):
        spec = SparseSignal(32, ((3, 1 - 2j), (17, 0.25j)))
        x = synthesize(spec)
        assert np.array_equal(sample(x, full_pattern(32)).values, x.samples)


def test_pattern_rejects_unsorted():
    with pytest.raises(RangeError):
        SamplingPattern(8, [3, 1])
    with pytest.raises(RangeError):
        SamplingPattern(8, [1, 1])
