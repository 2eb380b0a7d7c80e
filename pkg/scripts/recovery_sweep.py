"""Exact-recovery rate of the one-pass pipeline as a function of M.

    python scripts/recovery_sweep.py --n 256 --k 5 --trials 500 --m 48 64 80 96 128
"""

import argparse

import numpy as np

from cs_onepass.detection import ThresholdParams
from cs_onepass.montecarlo import recovery_trial, run_trials


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--m", type=int, nargs="+", default=[48, 64, 80, 96, 128])
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--probability", type=float, default=0.99)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    params = ThresholdParams(args.probability)
    print(f"{'M':>5} {'success':>8} {'missed':>8} {'false':>8}")
    for m in args.m:
        res = run_trials(recovery_trial, args.trials, args.seed, workers=args.workers,
                         n_total=args.n, m=m, k=args.k, params=params)
        print(f"{m:>5} {np.mean([r.success() for r in res]):>8.3f} "
              f"{np.mean([r.missed > 0 for r in res]):>8.3f} "
              f"{np.mean([r.false_alarms > 0 for r in res]):>8.3f}")


if __name__ == "__main__":
    main()
