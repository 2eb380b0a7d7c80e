"""Operation and cycle counts over a grid of (K, M), plus simulated array cycles."""

import argparse

import numpy as np

from cs_onepass.complexity import cycle_report, flops_direct, flops_qfree
from cs_onepass.givens_qr import systolic_qr
from cs_onepass.systolic import SystolicConfig
from cs_onepass.tri_inv import systolic_invert


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--k", type=int, nargs="+", default=[2, 5, 10, 15])
    p.add_argument("--m", type=int, nargs="+", default=[64, 250])
    args = p.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'K':>3} {'M':>4} {'qfree add':>10} {'qfree mul':>10} {'direct add':>11} "
          f"{'direct mul':>11} {'R cyc':>6} {'inv cyc':>7} {'sim R':>6} {'sim inv':>7}")
    for m in args.m:
        for k in args.k:
            q, d, c = flops_qfree(k, m), flops_direct(k, m), cycle_report(k, m)
            a = rng.normal(size=(m, k)) + 1j * rng.normal(size=(m, k))
            cfg = SystolicConfig.sized(k, record_trace=False)
            r, tq = systolic_qr(a, cfg)
            _, ti = systolic_invert(r, cfg)
            print(f"{k:>3} {m:>4} {q.additions:>10} {q.multiplications:>10} {d.additions:>11} "
                  f"{d.multiplications:>11} {c.r_block:>6} {c.inversion_block:>7} "
                  f"{tq.cycles:>6} {ti.cycles:>7}")


if __name__ == "__main__":
    main()
