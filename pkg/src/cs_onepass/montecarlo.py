"""Seeded Monte Carlo trials for recovery rate and threshold calibration.

Trial ``i`` of a run seeded with ``s`` draws from ``SeedSequence(s).spawn(n)[i]``,
so results do not depend on how trials are scheduled across workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .detection import (
    ThresholdParams,
    compute_threshold,
    initial_transform,
    noise_variance,
)
from .errors import SingularMatrixError
from .lsq_solver import run_pipeline
from .signal_model import draw_pattern, random_sparse_signal, sample, synthesize


@dataclass(frozen=True)
class RecoveryTrial:
    trial: int
    exact_support: bool
    max_amplitude_error: float
    detected: int
    missed: int
    false_alarms: int

    def success(self, amp_tol: float = 1e-8) -> bool:
        return self.exact_support and self.max_amplitude_error <= amp_tol


def recovery_trial(
    trial: int,
    seed_seq: np.random.SeedSequence,
    n_total: int,
    m: int,
    k: int,
    params: ThresholdParams,
    unit_amplitude: bool = True,
) -> RecoveryTrial:
    rng = np.random.default_rng(seed_seq)
    spec = random_sparse_signal(n_total, k, rng, unit_amplitude=unit_amplitude)
    meas = sample(synthesize(spec), draw_pattern(n_total, m, rng))
    try:
        report, _ = run_pipeline(meas, n_total, params)
    except SingularMatrixError:
        return RecoveryTrial(trial, False, float("inf"), 0, k, 0)
    found = set(report.detected_support.indices.tolist())
    truth = set(spec.support.tolist())
    exact = found == truth
    err = float("inf")
    if exact:
        err = float(np.max(np.abs(report.amplitudes - spec.amplitudes)))
    return RecoveryTrial(trial, exact, err, len(found), len(truth - found), len(found - truth))


def calibration_trial(
    trial: int,
    seed_seq: np.random.SeedSequence,
    n_total: int,
    m: int,
    k: int,
    params: ThresholdParams,
) -> bool:
    """True when every non-signal bin of the initial transform stays at or below T."""
    rng = np.random.default_rng(seed_seq)
    spec = random_sparse_signal(n_total, k, rng)
    meas = sample(synthesize(spec), draw_pattern(n_total, m, rng))
    spectrum = initial_transform(meas, n_total)
    threshold = compute_threshold(noise_variance(meas, n_total), n_total, params)
    noise = np.ones(n_total, dtype=bool)
    noise[spec.support] = False
    return bool(np.all(np.abs(spectrum.coeffs[noise]) / n_total <= threshold))


def run_trials(fn, trials: int, seed: int, workers: int = 1, **kwargs) -> list:
    """Run ``fn(i, seed_seq_i, **kwargs)`` for ``i < trials``; results in trial order."""
    seqs = np.random.SeedSequence(seed).spawn(trials)
    job = partial(_call, fn, kwargs)
    args = list(enumerate(seqs))
    if workers <= 1:
        return [job(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, args, chunksize=max(1, trials // (4 * workers))))


def _call(fn, kwargs, arg):
    i, seq = arg
    return fn(i, seq, **kwargs)
