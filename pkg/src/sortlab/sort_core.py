"""In-place sorting of float arrays, with optional exact operation counts.

Two sorters share one contract: ascending, in-place, over finite floats.

``k_sort`` is an interchange-free quicksort variant.  Its partition never
swaps a pair of elements; it moves single values into slots vacated by the
two scan cursors, so every relocation is one element write.  ``heap_sort``
is a bottom-up binary max-heap sort whose sift-down carries the displaced
value in a hole instead of swapping at each level.

Both sorters accept an ``OpCounts`` accumulator.  When given one they run
an instrumented twin of the plain code path that tallies key comparisons
and element moves exactly; array results are identical either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

KeyArray = list[float]


class NonFiniteKeyError(ValueError):
    """Raised when an input key is NaN or infinite; its order is undefined."""


@dataclass
class OpCounts:
    """Tallies of the abstract work a sort performed.

    comparisons: key-to-key order tests.
    moves: element writes, including stashing a value in a temporary.
    max_pending_ranges: peak number of subranges awaiting partition
        (k_sort only; heap_sort keeps no worklist and leaves it at 0).
    """

    comparisons: int = 0
    moves: int = 0
    max_pending_ranges: int = 0


@dataclass(frozen=True)
class PartitionOutcome:
    pivot_index: int
    flag_used: bool


def _check_finite(a: KeyArray, lo: int = 0, hi: Optional[int] = None) -> None:
    # hi is inclusive; a malformed key fails loudly before any write happens
    seg = a if hi is None else a[lo : hi + 1]
    if all(map(math.isfinite, seg)):
        return
    base = 0 if hi is None else lo
    for t, v in enumerate(seg):
        if not math.isfinite(v):
            raise NonFiniteKeyError(f"key at index {base + t} is {v!r}; keys must be finite")
    raise AssertionError("unreachable")


def is_sorted(a: KeyArray) -> bool:
    """True when a is ascending (non-strict)."""
    for t in range(1, len(a)):
        if a[t - 1] > a[t]:
            return False
    return True


# --- k_sort ---------------------------------------------------------------
#
# Partition invariant, with key = the original a[left]:
#   a[left..i-1] < key <= a[j+1..right']   where right' excludes the stashed
# boundary element, and the window a[i..j] is still unexamined.  The right
# cursor's first capture cannot be written to slot j (nothing has vacated
# yet), so it is stashed in temp and restored next to the pivot at the end.
# The left write cursor i trails the probe p by construction, so each
# relocation lands in a slot whose old value was already placed elsewhere.


def _partition(a: KeyArray, left: int, right: int) -> tuple[int, bool]:
    key = a[left]
    i = left
    j = right + 1
    p = left + 1
    flag = False
    temp = 0.0
    while j - i >= 2:
        v = a[p]
        if key <= v:
            if j == right + 1:
                temp = v
                flag = True
            elif p != j:
                a[j] = v
            j -= 1
            p = j
        else:
            a[i] = v
            i += 1
            p = i + 1  # the next left-scan slot stays one ahead of i
    a[i] = key
    if flag:
        a[i + 1] = temp
    return i, flag


def _partition_counted(a: KeyArray, left: int, right: int, counts: OpCounts) -> tuple[int, bool]:
    # Twin of _partition; every divergence between the two is a bug.
    key = a[left]
    i = left
    j = right + 1
    p = left + 1
    flag = False
    temp = 0.0
    comparisons = 0
    moves = 0
    while j - i >= 2:
        v = a[p]
        comparisons += 1
        if key <= v:
            if j == right + 1:
                temp = v
                flag = True
                moves += 1
            elif p != j:
                a[j] = v
                moves += 1
            j -= 1
            p = j
        else:
            a[i] = v
            moves += 1
            i += 1
            p = i + 1
    a[i] = key
    moves += 1
    if flag:
        a[i + 1] = temp
        moves += 1
    counts.comparisons += comparisons
    counts.moves += moves
    return i, flag


def ksort_partition(
    a: KeyArray, left: int, right: int, counts: Optional[OpCounts] = None
) -> PartitionOutcome:
    """Partition a[left..right] (inclusive) around key = a[left], in place.

    On return the key sits at the pivot index, everything left of it is
    strictly smaller, and everything right of it is >= the key.  Equal
    keys route right, so the pivot slot holds the segment's only copy
    produced by strict less-than placement.  Exactly right - left key
    comparisons are spent.
    """
    if not 0 <= left < right < len(a):
        raise ValueError(
            f"partition range [{left}, {right}] invalid for array of length {len(a)}"
        )
    _check_finite(a, left, right)
    if counts is None:
        pivot, flag = _partition(a, left, right)
    else:
        pivot, flag = _partition_counted(a, left, right, counts)
    return PartitionOutcome(pivot_index=pivot, flag_used=flag)


def k_sort(a: KeyArray, counts: Optional[OpCounts] = None) -> None:
    """Sort a ascending, in place, without any pairwise interchanges.

    Drives the partition from an explicit worklist rather than recursion:
    after each split the smaller side is processed first (ties favor the
    left side), which caps pending ranges at ceil(log2(n)) + 1 and keeps
    adversarial inputs such as presorted arrays from exhausting a stack.
    Not stable: equal keys may leave in a different relative order.
    """
    _check_finite(a)
    n = len(a)
    if n < 2:
        return
    stack: list[tuple[int, int]] = [(0, n - 1)]
    if counts is None:
        while stack:
            left, right = stack.pop()
            piv, _ = _partition(a, left, right)
            lo_len = piv - left
            hi_len = right - piv
            if lo_len <= hi_len:
                if hi_len >= 2:
                    stack.append((piv + 1, right))
                if lo_len >= 2:
                    stack.append((left, piv - 1))
            else:
                if lo_len >= 2:
                    stack.append((left, piv - 1))
                if hi_len >= 2:
                    stack.append((piv + 1, right))
    else:
        counts.max_pending_ranges = max(counts.max_pending_ranges, 1)
        while stack:
            left, right = stack.pop()
            piv, _ = _partition_counted(a, left, right, counts)
            lo_len = piv - left
            hi_len = right - piv
            if lo_len <= hi_len:
                if hi_len >= 2:
                    stack.append((piv + 1, right))
                if lo_len >= 2:
                    stack.append((left, piv - 1))
            else:
                if lo_len >= 2:
                    stack.append((left, piv - 1))
                if hi_len >= 2:
                    stack.append((piv + 1, right))
            if len(stack) > counts.max_pending_ranges:
                counts.max_pending_ranges = len(stack)


# --- heap_sort ------------------------------------------------------------


def _sift_down(a: KeyArray, root: int, end: int) -> None:
    # Max-heap over a[0..end]; the displaced root value rides in a hole.
    val = a[root]
    while True:
        child = 2 * root + 1
        if child > end:
            break
        if child + 1 <= end and a[child + 1] > a[child]:
            child += 1
        if a[child] > val:
            a[root] = a[child]
            root = child
        else:
            break
    a[root] = val


def _sift_down_counted(a: KeyArray, root: int, end: int, counts: OpCounts) -> None:
    val = a[root]
    counts.moves += 1  # stash
    while True:
        child = 2 * root + 1
        if child > end:
            break
        if child + 1 <= end:
            counts.comparisons += 1
            if a[child + 1] > a[child]:
                child += 1
        counts.comparisons += 1
        if a[child] > val:
            a[root] = a[child]
            counts.moves += 1
            root = child
        else:
            break
    a[root] = val
    counts.moves += 1


def heap_sort(a: KeyArray, counts: Optional[OpCounts] = None) -> None:
    """Sort a ascending, in place, via a bottom-up binary max-heap.

    Builds the heap by sifting down from the last interior node, then
    repeatedly moves the max to the shrinking tail.  Not stable.
    """
    _check_finite(a)
    n = len(a)
    if n < 2:
        return
    if counts is None:
        for root in range(n // 2 - 1, -1, -1):
            _sift_down(a, root, n - 1)
        for end in range(n - 1, 0, -1):
            a[0], a[end] = a[end], a[0]
            if end > 1:
                _sift_down(a, 0, end - 1)
    else:
        for root in range(n // 2 - 1, -1, -1):
            _sift_down_counted(a, root, n - 1, counts)
        for end in range(n - 1, 0, -1):
            a[0], a[end] = a[end], a[0]
            counts.moves += 2
            if end > 1:
                _sift_down_counted(a, 0, end - 1, counts)


SORTERS: dict[str, Callable[..., None]] = {
    "ksort": k_sort,
    "heapsort": heap_sort,
}
