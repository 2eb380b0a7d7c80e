"""Cycle-stepped engine shared by the QR and triangular-inversion arrays.

Each cell owns an ordered list of jobs. A job fires on the first cycle at which
every token it consumes has been latched and the cell is no longer busy; its
output tokens become visible ``latency`` cycles later. Tokens produced in a
cycle are never consumed in the same cycle, so evaluation order inside a
cycle does not matter.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable

from .errors import ConfigError

CellId = tuple[int, int]
DEFAULT_LATENCIES = {"boundary": 1, "internal": 1}


@dataclass(frozen=True)
class SystolicConfig:
    """Array size, column enables E_i and per-kind cycle costs.

    ``enables`` must be a prefix mask: K leading ``True`` followed by
    ``False``. Setting ``record_trace=False`` drops per-firing events but
    keeps the cycle count.
    """

    n_max: int
    enables: tuple[bool, ...]
    latency_table: dict = field(default_factory=lambda: dict(DEFAULT_LATENCIES))
    record_trace: bool = True

    def __post_init__(self):
        en = tuple(bool(e) for e in self.enables)
        object.__setattr__(self, "enables", en)
        if self.n_max < 1:
            raise ConfigError(f"n_max must be positive, got {self.n_max}")
        if len(en) != self.n_max:
            raise ConfigError(f"{len(en)} enable signals for n_max={self.n_max}")
        k = sum(en)
        if en != (True,) * k + (False,) * (self.n_max - k):
            raise ConfigError(f"enables must form a prefix mask, got {en}")
        lat = {**DEFAULT_LATENCIES, **dict(self.latency_table)}
        if set(lat) != set(DEFAULT_LATENCIES):
            raise ConfigError(f"unknown cell kinds in latency_table: {sorted(lat)}")
        if any(int(v) != v or v < 1 for v in lat.values()):
            raise ConfigError(f"latencies must be positive integers, got {lat}")
        object.__setattr__(self, "latency_table", {k_: int(v) for k_, v in lat.items()})

    @classmethod
    def sized(cls, k: int, n_max: int | None = None, **kwargs) -> "SystolicConfig":
        """Config for order ``k`` on an array of ``n_max`` columns (default ``k``)."""
        n_max = k if n_max is None else n_max
        if not 1 <= k <= n_max:
            raise ConfigError(f"need 1 <= k <= n_max, got k={k}, n_max={n_max}")
        return cls(n_max, (True,) * k + (False,) * (n_max - k), **kwargs)

    @property
    def k_active(self) -> int:
        return sum(self.enables)


@dataclass(frozen=True)
class CellEvent:
    cycle: int
    cell: CellId
    kind: str
    inputs: tuple
    outputs: tuple
    stored: complex


@dataclass(frozen=True)
class SystolicTrace:
    cycles: int
    events: tuple[CellEvent, ...]
    n_max: int
    k_active: int
    boundary_cells: int
    internal_cells: int
    fired_cells: frozenset

    def summary(self) -> dict:
        return {
            "cycles": self.cycles,
            "n_max": self.n_max,
            "k_active": self.k_active,
            "boundary_cells": self.boundary_cells,
            "internal_cells": self.internal_cells,
            "firings": len(self.events),
        }


@dataclass
class Job:
    needs: tuple[Hashable, ...]
    run: Callable[[list], tuple[dict, tuple, tuple, Any]]
    """``run(inputs) -> (produced tokens, input record, output record, stored value)``"""


@dataclass
class _Cell:
    cell_id: CellId
    kind: str
    latency: int
    enabled: bool
    jobs: deque = field(default_factory=deque)
    busy_until: int = 0


class TriangularArray:
    """Upper-triangular grid of cells (i, j), 0 <= i <= j < n_max.

    Cells on the diagonal are of kind ``boundary``; the rest are ``internal``.
    Column j is powered only when ``enables[j]`` is set.
    """

    def __init__(self, config: SystolicConfig):
        self.config = config
        self.cells: dict[CellId, _Cell] = {}
        for i in range(config.n_max):
            for j in range(i, config.n_max):
                kind = "boundary" if i == j else "internal"
                self.cells[(i, j)] = _Cell(
                    (i, j), kind, config.latency_table[kind],
                    config.enables[i] and config.enables[j],
                )
        self._tokens: dict[Hashable, tuple[int, Any]] = {}

    def inject(self, key: Hashable, value, cycle: int = 0):
        self._tokens[key] = (cycle, value)

    def add_job(self, cell: CellId, job: Job):
        c = self.cells[cell]
        if not c.enabled:
            raise ConfigError(f"job scheduled on disabled cell {cell}")
        c.jobs.append(job)

    def run(self) -> SystolicTrace:
        record = self.config.record_trace
        events: list[CellEvent] = []
        fired: set[CellId] = set()
        active = [c for c in self.cells.values() if c.enabled]
        pending = sum(len(c.jobs) for c in active)
        cycle = 0
        finish = 0
        idle = 0
        while pending:
            progressed = False
            for cell in active:
                if not cell.jobs or cell.busy_until > cycle:
                    continue
                job = cell.jobs[0]
                ready = [self._tokens.get(k) for k in job.needs]
                if any(t is None or t[0] > cycle for t in ready):
                    continue
                cell.jobs.popleft()
                produced, ins, outs, stored = job.run([t[1] for t in ready])
                done = cycle + cell.latency
                for key, val in produced.items():
                    self._tokens[key] = (done, val)
                cell.busy_until = done
                finish = max(finish, done)
                fired.add(cell.cell_id)
                pending -= 1
                progressed = True
                if record:
                    events.append(CellEvent(cycle, cell.cell_id, cell.kind, ins, outs, stored))
            idle = 0 if progressed else idle + 1
            if idle > 1 + max(self.config.latency_table.values()) + self._max_inject():
                raise RuntimeError(f"systolic schedule deadlocked at cycle {cycle}")
            cycle += 1
        k = self.config.k_active
        return SystolicTrace(
            cycles=finish,
            events=tuple(events),
            n_max=self.config.n_max,
            k_active=k,
            boundary_cells=sum(1 for c in active if c.kind == "boundary"),
            internal_cells=sum(1 for c in active if c.kind == "internal"),
            fired_cells=frozenset(fired),
        )

    def _max_inject(self) -> int:
        return max((t[0] for t in self._tokens.values()), default=0)
