"""Line-oriented text formats for signals, measurements, truth and reports.

::

    # cs-onepass v1 <kind>          kind in {signal, meas, truth, recon}
    n <N>
    m <M>                           (meas only)
    <index> <re> <im>               one line per sample / component

Reals are written with 17 significant digits, which round-trips every double.
Reports are flat ``key=value`` lines.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .signal_model import MeasurementSet, SamplingPattern, SparseSignal, TimeSignal

MAGIC = "# cs-onepass v1"
KINDS = ("signal", "meas", "truth", "recon")


class FormatError(ValueError):
    pass


def fmt_real(x: float) -> str:
    return f"{float(x):.17g}"


def _data_lines(index, values) -> list[str]:
    return [f"{int(i)} {fmt_real(v.real)} {fmt_real(v.imag)}" for i, v in zip(index, values)]


def dumps_signal(x: TimeSignal, kind: str = "signal") -> str:
    if kind not in ("signal", "recon"):
        raise ValueError(f"kind must be signal or recon, got {kind}")
    lines = [f"{MAGIC} {kind}", f"n {len(x)}"]
    lines += _data_lines(range(len(x)), x.samples)
    return "\n".join(lines) + "\n"


def dumps_meas(meas: MeasurementSet) -> str:
    lines = [f"{MAGIC} meas", f"n {meas.n_total}", f"m {meas.m}"]
    lines += _data_lines(meas.pattern.positions, meas.values)
    return "\n".join(lines) + "\n"


def dumps_truth(spec: SparseSignal) -> str:
    lines = [f"{MAGIC} truth", f"n {spec.n_total}"]
    lines += _data_lines(spec.support, spec.amplitudes)
    return "\n".join(lines) + "\n"


def write_signal(path, x: TimeSignal, kind: str = "signal") -> None:
    Path(path).write_text(dumps_signal(x, kind), encoding="utf-8", newline="\n")


def write_meas(path, meas: MeasurementSet) -> None:
    Path(path).write_text(dumps_meas(meas), encoding="utf-8", newline="\n")


def write_truth(path, spec: SparseSignal) -> None:
    Path(path).write_text(dumps_truth(spec), encoding="utf-8", newline="\n")


def _parse(text: str) -> tuple[str, dict[str, int], np.ndarray, np.ndarray]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(MAGIC + " "):
        raise FormatError("missing '# cs-onepass v1 <kind>' header")
    kind = lines[0][len(MAGIC) + 1:].strip()
    if kind not in KINDS:
        raise FormatError(f"unknown kind {kind!r}")
    header: dict[str, int] = {}
    n_header = 2 if kind != "meas" else 3
    for line in lines[1:n_header]:
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("n", "m"):
            raise FormatError(f"bad header line {line!r}")
        header[parts[0]] = int(parts[1])
    if "n" not in header or (kind == "meas" and "m" not in header):
        raise FormatError("incomplete header")
    idx, vals = [], []
    for line in lines[n_header:]:
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"bad data line {line!r}")
        idx.append(int(parts[0]))
        vals.append(complex(float(parts[1]), float(parts[2])))
    return kind, header, np.array(idx, dtype=np.int64), np.array(vals, dtype=complex)


def read_any(path) -> tuple[str, dict[str, int], np.ndarray, np.ndarray]:
    return _parse(Path(path).read_text(encoding="utf-8"))


def loads_signal(text: str) -> TimeSignal:
    kind, header, idx, vals = _parse(text)
    if kind not in ("signal", "recon"):
        raise FormatError(f"expected a signal file, got {kind}")
    if len(vals) != header["n"] or not np.array_equal(idx, np.arange(header["n"])):
        raise FormatError("signal file must list indices 0..N-1 exactly once, in order")
    return TimeSignal(vals)


def loads_meas(text: str) -> MeasurementSet:
    kind, header, idx, vals = _parse(text)
    if kind != "meas":
        raise FormatError(f"expected a meas file, got {kind}")
    if len(vals) != header["m"]:
        raise FormatError(f"header says m={header['m']} but {len(vals)} samples follow")
    return MeasurementSet(SamplingPattern(header["n"], idx), vals)


def loads_truth(text: str) -> SparseSignal:
    kind, header, idx, vals = _parse(text)
    if kind != "truth":
        raise FormatError(f"expected a truth file, got {kind}")
    return SparseSignal(header["n"], tuple(zip(idx.tolist(), vals.tolist())))


def read_signal(path) -> TimeSignal:
    return loads_signal(Path(path).read_text(encoding="utf-8"))


def read_meas(path) -> MeasurementSet:
    return loads_meas(Path(path).read_text(encoding="utf-8"))


def read_truth(path) -> SparseSignal:
    return loads_truth(Path(path).read_text(encoding="utf-8"))


def dumps_report(items: dict) -> str:
    out = []
    for key, value in items.items():
        if isinstance(value, bool):
            value = int(value)
        elif isinstance(value, float):
            value = repr(value)
        out.append(f"{key}={value}")
    return "\n".join(out) + "\n"


def loads_report(text: str) -> dict[str, str]:
    items = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep or not key:
            raise FormatError(f"bad report line {line!r}")
        items[key] = value
    return items
