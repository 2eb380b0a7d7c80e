"""``cs-onepass`` command-line driver.

Exit codes: 0 success, 2 usage, 3 I/O, 4 empty support, 5 singular solve.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import formats
from .complexity import cycle_report, flops_direct, flops_qfree
from .cs_matrix import build_cs_matrix
from .detection import SupportSet, ThresholdMode, ThresholdParams
from .errors import CsError, SingularMatrixError
from .givens_qr import givens_r, systolic_qr
from .lsq_solver import run_pipeline
from .montecarlo import recovery_trial, run_trials
from .signal_model import (
    SparseSignal,
    draw_pattern,
    random_sparse_signal,
    sample,
    synthesize,
)
from .systolic import SystolicConfig
from .tri_inv import systolic_invert

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_EMPTY, EXIT_SINGULAR = 0, 2, 3, 4, 5
SEED_ENV = "CS_ONEPASS_SEED"


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def _parse_components(text: str) -> tuple[tuple[int, complex], ...]:
    comps = []
    for item in text.split(","):
        idx, sep, amp = item.partition(":")
        if not sep:
            raise UsageError(f"component {item!r} is not of the form index:amplitude")
        try:
            comps.append((int(idx), complex(amp.replace(" ", ""))))
        except ValueError:
            raise UsageError(f"cannot parse component {item!r}") from None
    return tuple(comps)


def _threshold_params(args, n_total: int) -> ThresholdParams:
    mode = ThresholdMode(args.mode)
    if mode is ThresholdMode.APPROX and args.approx_constant is None:
        return ThresholdParams.for_length(args.probability, n_total)
    return ThresholdParams(args.probability, mode, args.approx_constant)


def _print_report(items: dict, path: str | None):
    text = formats.dumps_report(items)
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _complexity_items(k: int, m: int) -> dict:
    q, d, c = flops_qfree(k, m), flops_direct(k, m), cycle_report(k, m)
    return {
        "flops.qfree.add": q.additions,
        "flops.qfree.mul": q.multiplications,
        "flops.direct.add": d.additions,
        "flops.direct.mul": d.multiplications,
        "flops.direct.extra": d.extra,
        "cycles.threshold": c.threshold_block,
        "cycles.comparator": c.comparator,
        "cycles.r_block": c.r_block,
        "cycles.inversion": c.inversion_block,
        "cycles.solver": c.solver_block,
        "cycles.estimated": ",".join(c.estimated),
    }


def cmd_generate(args) -> int:
    if args.components:
        spec = SparseSignal(args.n, _parse_components(args.components))
    else:
        if args.k is None:
            raise UsageError("generate needs --k or --components")
        spec = random_sparse_signal(args.n, args.k, _seed(args), unit_amplitude=not args.random_phase)
    formats.write_signal(args.out, synthesize(spec))
    formats.write_truth(args.truth, spec)
    return EXIT_OK


def cmd_sample(args) -> int:
    x = formats.read_signal(args.signal)
    if not 1 <= args.m <= len(x):
        raise UsageError(f"--m must be in [1, {len(x)}], got {args.m}")
    meas = sample(x, draw_pattern(len(x), args.m, _seed(args)))
    formats.write_meas(args.out, meas)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    meas = formats.read_meas(args.meas)
    n_total = meas.n_total
    params = _threshold_params(args, n_total)
    try:
        report, x_hat = run_pipeline(meas, n_total, params)
    except SingularMatrixError as exc:
        print(f"singular solve: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    formats.write_signal(args.out, x_hat, kind="recon")

    items = {
        "format": "cs-onepass-report-v1",
        "n": n_total,
        "m": meas.m,
        "k": report.k,
        "probability": report.probability,
        "threshold_mode": report.threshold_mode.value,
        "sigma_sq": report.sigma_sq,
        "threshold": report.threshold_used,
        "support": ",".join(str(i) for i in report.detected_support.indices),
        "empty_support": report.empty_support,
        "detections": report.detections,
        "solves": report.solves,
        "residual_norm": report.residual_norm,
    }
    for idx, amp in zip(report.detected_support.indices, report.amplitudes):
        items[f"amp.{idx}.re"] = float(amp.real)
        items[f"amp.{idx}.im"] = float(amp.imag)
    if report.tally is not None:
        items["flops.measured.add"] = report.tally.additions
        items["flops.measured.mul"] = report.tally.multiplications
    if report.k:
        items.update(_complexity_items(report.k, meas.m))
    _print_report(items, args.report)
    return EXIT_EMPTY if report.empty_support else EXIT_OK


def _fmt_val(v) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        return f"{formats.fmt_real(v.real)},{formats.fmt_real(v.imag)}"
    return formats.fmt_real(v)


def cmd_simulate(args) -> int:
    meas = formats.read_meas(args.meas)
    n_total = meas.n_total
    if args.support:
        support = SupportSet.from_indices(n_total, [int(s) for s in args.support.split(",")])
    elif args.truth:
        support = SupportSet.from_indices(n_total, formats.read_truth(args.truth).support)
    else:
        report, _ = run_pipeline(meas, n_total, _threshold_params(args, n_total))
        support = report.detected_support
    if support.k == 0:
        print("empty support: nothing to simulate", file=sys.stderr)
        return EXIT_EMPTY
    a = build_cs_matrix(meas.pattern, support, n_total)
    n_max = args.n_max or a.k
    if n_max < a.k:
        raise UsageError(f"--n-max {n_max} smaller than K={a.k}")
    config = SystolicConfig.sized(
        a.k, n_max,
        latency_table={"boundary": args.latency_boundary, "internal": args.latency_internal},
        record_trace=args.trace is not None,
    )
    items = {"format": "cs-onepass-sim-v1", "k": a.k, "m": a.m, "n_max": n_max}
    traces = []
    r = None
    if args.array in ("qr", "both"):
        r, tr = systolic_qr(a, config)
        traces.append(("qr", tr))
    if args.array in ("inv", "both"):
        r = r if r is not None else givens_r(a)
        try:
            _, tr = systolic_invert(r, config)
        except SingularMatrixError as exc:
            print(f"singular R: {exc}", file=sys.stderr)
            return EXIT_SINGULAR
        traces.append(("inv", tr))
    for name, tr in traces:
        for key, value in tr.summary().items():
            if key != "n_max":
                items[f"{name}.{key}"] = value
    _print_report(items, args.report)

    if args.trace:
        lines = []
        for name, tr in traces:
            for ev in tr.events:
                ins = " ".join(_fmt_val(v) for v in ev.inputs)
                outs = " ".join(_fmt_val(v) for v in ev.outputs)
                lines.append(
                    f"{name} {ev.cycle} {ev.cell[0]},{ev.cell[1]} {ev.kind} "
                    f"in=[{ins}] out=[{outs}] stored={_fmt_val(complex(ev.stored))}"
                )
        Path(args.trace).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return EXIT_OK


def cmd_complexity(args) -> int:
    if args.k < 1 or args.m < 1:
        raise UsageError("--k and --m must be >= 1")
    _print_report({"k": args.k, "m": args.m, **_complexity_items(args.k, args.m)}, None)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not 1 <= args.k <= args.n or not 1 <= args.m <= args.n:
        raise UsageError("need 1 <= k <= n and 1 <= m <= n")
    params = _threshold_params(args, args.n)
    results = run_trials(
        recovery_trial, args.trials, _seed(args), workers=args.workers,
        n_total=args.n, m=args.m, k=args.k, params=params,
    )
    for res in results:
        print(f"trial={res.trial} exact_support={int(res.exact_support)} "
              f"missed={res.missed} false_alarms={res.false_alarms} "
              f"max_amp_err={formats.fmt_real(res.max_amplitude_error)}")
    rate = sum(r.success(args.amp_tol) for r in results) / len(results)
    print(f"success_rate={formats.fmt_real(rate)}")
    return EXIT_OK


def _add_threshold_args(p):
    p.add_argument("--probability", type=float, default=0.99)
    p.add_argument("--mode", choices=[m.value for m in ThresholdMode], default="exact")
    p.add_argument("--approx-constant", type=float, default=None,
                   help="override C; default is ln(1 - P^(1/N)) for the input length")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cs-onepass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a K-sparse signal and its ground truth")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--components", help="explicit spectrum, e.g. 0:1+0j,3:0.5")
    p.add_argument("--random-phase", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out", default="signal.txt")
    p.add_argument("--truth", default="truth.txt")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="draw M random samples from a signal file")
    p.add_argument("--signal", default="signal.txt")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out", default="meas.txt")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("reconstruct", help="run the one-pass reconstruction")
    p.add_argument("--meas", default="meas.txt")
    p.add_argument("-o", "--out", default="recon.txt")
    p.add_argument("--report", help="report path (default: stdout)")
    _add_threshold_args(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("simulate", help="run the systolic QR / inversion arrays")
    p.add_argument("--meas", default="meas.txt")
    p.add_argument("--support", help="comma-separated support; default: detect")
    p.add_argument("--truth", help="take the support from a truth file")
    p.add_argument("--array", choices=["qr", "inv", "both"], default="both")
    p.add_argument("--n-max", type=int)
    p.add_argument("--latency-boundary", type=int, default=1)
    p.add_argument("--latency-internal", type=int, default=1)
    p.add_argument("--trace", help="per-firing event log path")
    p.add_argument("--report", help="summary path (default: stdout)")
    _add_threshold_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("complexity", help="operation and cycle counts for K, M")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("sweep", help="Monte Carlo recovery rate")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--m", type=int, default=64)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--amp-tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int)
    _add_threshold_args(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, formats.FormatError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SingularMatrixError as exc:
        print(f"singular: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except CsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
