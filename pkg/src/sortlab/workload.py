"""Deterministic workload generation and array serialization.

Keys come from a counter-based splitmix64 stream: output t of a stream
seeded with s is ``mix64(s + (t + 1) * GOLDEN_GAMMA)`` over 64-bit
modular arithmetic, where ``mix64`` is the splitmix64 finalizer.  Because
each output depends only on (seed, position), the scalar generator and
the vectorized bulk generator produce bit-identical values, and any
replication's input can be regenerated from its seed alone.

Uniform floats use the top 53 bits of each word: ``(u >> 11) * 2**-53``,
dense in [0, 1).

Serialized array formats, both self-describing enough to round-trip:

  binary: 8-byte little-endian unsigned count, then count little-endian
      IEEE-754 float64 values.
  text:   one ``repr(value)`` per line (repr round-trips exactly).

Readers reject NaN or infinite values at ingestion; the sorters can then
assume finite keys.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .sort_core import NonFiniteKeyError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

WORKLOAD_KINDS = ("uniform01", "sorted_ascending", "sorted_descending", "constant")

_PathLike = Union[str, Path]


def mix64(x: int) -> int:
    """splitmix64 finalizer: a bijective 64-bit avalanche mix."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class SplitMix64:
    """Scalar stream view of the counter-based generator."""

    __slots__ = ("_seed", "_index")

    def __init__(self, seed: int) -> None:
        self._seed = seed & MASK64
        self._index = 0

    def next_uint64(self) -> int:
        self._index += 1
        return mix64(self._seed + self._index * GOLDEN_GAMMA)

    def next_float(self) -> float:
        return (self.next_uint64() >> 11) * 2.0**-53


def _bulk_uint64(seed: int, count: int) -> np.ndarray:
    # identical sequence to SplitMix64(seed); uint64 arithmetic wraps mod 2**64
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _bulk_uniform01(seed: int, count: int) -> np.ndarray:
    return (_bulk_uint64(seed, count) >> np.uint64(11)) * 2.0**-53


def derive_seed(seed: int, index: int, stream: int = 0) -> int:
    """Seed for replication ``index`` of substream ``stream`` under ``seed``.

    Two chained counter steps: position ``stream`` of the stream over
    ``seed`` picks a substream seed, position ``index`` of that substream
    picks the replication seed.  Distinct (stream, index) pairs decorrelate
    even when the base seeds are adjacent integers.
    """
    if index < 0 or stream < 0:
        raise ValueError("index and stream must be nonnegative")
    sub = mix64(seed + (stream + 1) * GOLDEN_GAMMA)
    return mix64(sub + (index + 1) * GOLDEN_GAMMA)


@dataclass(frozen=True)
class WorkloadSpec:
    """What to generate: n keys of one kind under one seed."""

    n: int
    seed: int
    kind: str = "uniform01"

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"n must be nonnegative, got {self.n}")
        if self.kind not in WORKLOAD_KINDS:
            raise ValueError(f"unknown workload kind {self.kind!r}; choose from {WORKLOAD_KINDS}")


def generate(spec: WorkloadSpec) -> list[float]:
    """Fresh key array for spec; same spec, same bits, every time."""
    if spec.n == 0:
        return []
    if spec.kind == "constant":
        return [0.5] * spec.n
    block = _bulk_uniform01(spec.seed, spec.n)
    if spec.kind == "sorted_ascending":
        block = np.sort(block)
    elif spec.kind == "sorted_descending":
        block = np.sort(block)[::-1]
    return block.tolist()


def duplicate(a: list[float]) -> list[float]:
    """Independent copy; sorting one must not disturb the other."""
    return list(a)


def _require_finite(values: Iterable[float], source: str) -> list[float]:
    out = list(values)
    for t, v in enumerate(out):
        if not math.isfinite(v):
            raise NonFiniteKeyError(f"{source}: value at position {t} is {v!r}; keys must be finite")
    return out


def write_binary(path: _PathLike, a: list[float]) -> None:
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(a)))
        fh.write(struct.pack(f"<{len(a)}d", *a))


def read_binary(path: _PathLike) -> list[float]:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 8:
        raise ValueError(f"{path}: truncated header, {len(raw)} bytes")
    (count,) = struct.unpack_from("<Q", raw, 0)
    expected = 8 + 8 * count
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes for {count} values, found {len(raw)}")
    values = struct.unpack_from(f"<{count}d", raw, 8)
    return _require_finite(values, str(path))


def write_text(path: _PathLike, a: list[float]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for v in a:
            fh.write(repr(v))
            fh.write("\n")


def read_text(path: _PathLike) -> list[float]:
    values = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: not a float: {line!r}") from exc
    return _require_finite(values, str(path))
