"""Monte Carlo benchmark harness for the sorters, plus its CSV exchange format.

A cell is (algorithm, n): ``reps`` fresh uniform arrays are generated,
each sorted once, and the per-replication measurements are aggregated to
a mean and sample standard deviation.  Replication r of a cell draws its
keys from ``derive_seed(seed, r, stream)``; paired runs give every
algorithm stream 0 so they face bit-identical inputs, unpaired runs give
algorithm k its own stream k + 1.

Two measurement modes:

  wall_time:  perf_counter_ns around the sort call alone (no generation,
      no verification inside the window), reported in seconds.
  op_counts:  exact comparison and move tallies from the instrumented
      sort paths; no clock is read, so results are fully deterministic
      and records carry no timestamp.

Every replication's output is verified ascending before it counts;
a failed check aborts the cell rather than averaging garbage.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO, Union

from .sort_core import SORTERS, OpCounts, is_sorted
from .workload import WorkloadSpec, derive_seed, generate

DEFAULT_REPS = 500

CSV_FIELDS = (
    "algorithm",
    "n",
    "nlog2n",
    "reps",
    "seed",
    "mean_seconds",
    "std_seconds",
    "comparisons_mean",
    "moves_mean",
    "timestamp",
)

MODES = ("wall_time", "op_counts")


class SchemaError(ValueError):
    """A results CSV does not carry the expected header or field types."""


class SortIntegrityError(RuntimeError):
    """A sorter returned without leaving its array ascending."""


def nlog2n(n: int) -> float:
    """The model regressor n * log2(n); 0 for n <= 1 where the log vanishes."""
    if n <= 1:
        return 0.0
    return n * math.log2(n)


@dataclass(frozen=True)
class BenchRecord:
    """One aggregated benchmark cell, or one parsed results row."""

    algorithm: str
    n: int
    nlog2n: float
    reps: int
    seed: Optional[int] = None
    mean_seconds: Optional[float] = None
    std_seconds: Optional[float] = None
    comparisons_mean: Optional[float] = None
    moves_mean: Optional[float] = None
    timestamp: Optional[str] = None


@dataclass(frozen=True)
class BenchConfig:
    """A full grid: every algorithm crossed with every size."""

    sizes: Sequence[int]
    reps: int = DEFAULT_REPS
    seed: int = 0
    algorithms: Sequence[str] = tuple(SORTERS)
    mode: str = "wall_time"
    paired: bool = True
    warmup: int = 0

    def __post_init__(self) -> None:
        if not self.sizes:
            raise ValueError("sizes must be nonempty")
        if any(n < 0 for n in self.sizes):
            raise ValueError("sizes must be nonnegative")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")
        unknown = [a for a in self.algorithms if a not in SORTERS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; choose from {sorted(SORTERS)}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; choose from {MODES}")


def _mean_std(xs: Sequence[float]) -> tuple[float, float]:
    m = sum(xs) / len(xs)
    if len(xs) < 2:
        return m, 0.0
    var = sum((x - m) ** 2 for x in xs) / (len(xs) - 1)
    return m, math.sqrt(var)


def run_cell(
    algorithm: str,
    n: int,
    reps: int,
    seed: int,
    mode: str = "wall_time",
    *,
    stream: int = 0,
    warmup: int = 0,
) -> BenchRecord:
    """Measure one (algorithm, n) cell.

    Warmup replications, when requested, use replication indices past the
    recorded range (reps .. reps + warmup - 1) so they never touch the
    recorded inputs; their measurements are discarded.
    """
    if algorithm not in SORTERS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(SORTERS)}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    sorter = SORTERS[algorithm]

    def _one(rep_index: int, record: bool) -> Optional[tuple[float, float, float]]:
        data = generate(WorkloadSpec(n=n, seed=derive_seed(seed, rep_index, stream)))
        if mode == "wall_time":
            t0 = time.perf_counter_ns()
            sorter(data)
            t1 = time.perf_counter_ns()
            measured = ((t1 - t0) / 1e9, 0.0, 0.0)
        else:
            counts = OpCounts()
            sorter(data, counts)
            measured = (0.0, float(counts.comparisons), float(counts.moves))
        if not is_sorted(data):
            raise SortIntegrityError(
                f"{algorithm} left an unsorted array at n={n}, replication {rep_index}"
            )
        return measured if record else None

    for w in range(warmup):
        _one(reps + w, record=False)

    seconds: list[float] = []
    comparisons: list[float] = []
    moves: list[float] = []
    for r in range(reps):
        sec, comp, mov = _one(r, record=True)  # type: ignore[misc]
        seconds.append(sec)
        comparisons.append(comp)
        moves.append(mov)

    if mode == "wall_time":
        mean_s, std_s = _mean_std(seconds)
        return BenchRecord(
            algorithm=algorithm,
            n=n,
            nlog2n=nlog2n(n),
            reps=reps,
            seed=seed,
            mean_seconds=mean_s,
            std_seconds=std_s,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
    comp_mean, _ = _mean_std(comparisons)
    move_mean, _ = _mean_std(moves)
    return BenchRecord(
        algorithm=algorithm,
        n=n,
        nlog2n=nlog2n(n),
        reps=reps,
        seed=seed,
        comparisons_mean=comp_mean,
        moves_mean=move_mean,
    )


def run_grid(config: BenchConfig) -> list[BenchRecord]:
    """Run the whole grid, sizes outermost, algorithms in declared order."""
    records = []
    for n in config.sizes:
        for k, algorithm in enumerate(config.algorithms):
            stream = 0 if config.paired else k + 1
            records.append(
                run_cell(
                    algorithm,
                    n,
                    config.reps,
                    config.seed,
                    config.mode,
                    stream=stream,
                    warmup=config.warmup,
                )
            )
    return records


# --- CSV exchange ----------------------------------------------------------

_PathOrIO = Union[str, Path, TextIO]


def _fmt(v: Optional[object]) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)  # shortest round-trip form
    return str(v)


def write_csv(records: Iterable[BenchRecord], dest: _PathOrIO) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="", encoding="ascii") as fh:
            write_csv(records, fh)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow(
            [
                r.algorithm,
                _fmt(r.n),
                _fmt(r.nlog2n),
                _fmt(r.reps),
                _fmt(r.seed),
                _fmt(r.mean_seconds),
                _fmt(r.std_seconds),
                _fmt(r.comparisons_mean),
                _fmt(r.moves_mean),
                _fmt(r.timestamp),
            ]
        )


def _parse_opt(raw: str, kind: type, field_name: str, lineno: int):
    if raw == "":
        return None
    try:
        return kind(raw)
    except ValueError as exc:
        raise SchemaError(f"row {lineno}: field {field_name!r} is not {kind.__name__}: {raw!r}") from exc


def read_csv(src: _PathOrIO) -> list[BenchRecord]:
    if isinstance(src, (str, Path)):
        with open(src, "r", newline="", encoding="ascii") as fh:
            return read_csv(fh)
    reader = csv.reader(src)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty results file") from None
    if tuple(header) != CSV_FIELDS:
        raise SchemaError(f"bad header {header!r}; expected {list(CSV_FIELDS)}")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_FIELDS):
            raise SchemaError(f"row {lineno}: expected {len(CSV_FIELDS)} fields, got {len(row)}")
        (alg, n_s, nl_s, reps_s, seed_s, mean_s, std_s, comp_s, mov_s, ts) = row
        if alg == "":
            raise SchemaError(f"row {lineno}: empty algorithm")
        n = _parse_opt(n_s, int, "n", lineno)
        nl = _parse_opt(nl_s, float, "nlog2n", lineno)
        reps = _parse_opt(reps_s, int, "reps", lineno)
        if n is None or nl is None or reps is None:
            raise SchemaError(f"row {lineno}: n, nlog2n and reps are required")
        records.append(
            BenchRecord(
                algorithm=alg,
                n=n,
                nlog2n=nl,
                reps=reps,
                seed=_parse_opt(seed_s, int, "seed", lineno),
                mean_seconds=_parse_opt(mean_s, float, "mean_seconds", lineno),
                std_seconds=_parse_opt(std_s, float, "std_seconds", lineno),
                comparisons_mean=_parse_opt(comp_s, float, "comparisons_mean", lineno),
                moves_mean=_parse_opt(mov_s, float, "moves_mean", lineno),
                timestamp=ts if ts != "" else None,
            )
        )
    return records


def load_table1() -> list[BenchRecord]:
    """The bundled reference timing table, parsed through the normal reader."""
    text = resources.files("sortlab").joinpath("data/table1.csv").read_text(encoding="ascii")
    return read_csv(io.StringIO(text))
