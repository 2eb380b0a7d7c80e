"""Empirical probability that every noise bin stays below the threshold.

Compares the exact threshold with the constant-C version frozen at N=1024.
"""

import argparse

import numpy as np

from cs_onepass.detection import ThresholdMode, ThresholdParams, approx_constant
from cs_onepass.montecarlo import calibration_trial, run_trials


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, nargs="+", default=[256, 512, 1024, 2048, 4096])
    p.add_argument("--m-fraction", type=float, default=0.25)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--probability", type=float, default=0.99)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    exact = ThresholdParams(args.probability)
    frozen = ThresholdParams(args.probability, ThresholdMode.APPROX,
                             approx_constant(args.probability, 1024))
    print(f"{'N':>6} {'M':>6} {'C(N)':>8} {'exact':>7} {'C@1024':>7}")
    for n in args.n:
        m = max(1, int(round(args.m_fraction * n)))
        rates = [
            np.mean(run_trials(calibration_trial, args.trials, args.seed, workers=args.workers,
                               n_total=n, m=m, k=args.k, params=params))
            for params in (exact, frozen)
        ]
        print(f"{n:>6} {m:>6} {approx_constant(args.probability, n):>8.3f} "
              f"{rates[0]:>7.3f} {rates[1]:>7.3f}")


if __name__ == "__main__":
    main()
