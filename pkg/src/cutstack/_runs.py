"""Run-list kernels over sorted, disjoint half-open integer intervals.

Runs are stored as two parallel numpy arrays ``lo`` and ``hi``.  Arrays use
``int64`` while every value involved stays below ``INT_LIMIT`` and fall back
to ``object`` arrays of Python integers otherwise, so results are exact at any
height.
"""

from __future__ import annotations

import numpy as np

INT_LIMIT = 2 ** 62


def int_dtype(bound: int):
    """``int64`` if all magnitudes stay below ``bound < INT_LIMIT``."""
    return np.int64 if bound < INT_LIMIT else object


def as_int_array(values, dtype) -> np.ndarray:
    if dtype is object:
        return np.array([int(v) for v in values], dtype=object)
    return np.asarray(values, dtype=np.int64)


def cast(arr: np.ndarray, dtype) -> np.ndarray:
    if arr.dtype == dtype:
        return arr
    if dtype is object:
        return np.array([int(v) for v in arr.tolist()], dtype=object)
    return arr.astype(np.int64)


def exact_sum(arr: np.ndarray, bound: int) -> int:
    """Sum of an integer array; ``bound`` caps the absolute partial sums."""
    if arr.size == 0:
        return 0
    if arr.dtype == object or bound >= INT_LIMIT:
        return int(sum(arr.tolist()))
    return int(arr.sum())


def normalize(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Drop empty runs and merge touching neighbours (input sorted, disjoint)."""
    nonempty = hi > lo
    if not nonempty.all():
        lo, hi = lo[nonempty], hi[nonempty]
    if lo.size < 2:
        return lo, hi
    gap = lo[1:] != hi[:-1]
    if gap.all():
        return lo, hi
    starts = np.concatenate(([True], gap))
    ends = np.concatenate((gap, [True]))
    return lo[starts], hi[ends]


def runs_from_levels(levels, dtype=np.int64) -> tuple[np.ndarray, np.ndarray]:
    levels = np.unique(as_int_array(levels, dtype))
    if levels.size == 0:
        return levels, levels.copy()
    return normalize(levels, levels + 1)


def membership(lo: np.ndarray, hi: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Boolean mask: which points of ``x`` lie inside the runs."""
    if lo.size == 0:
        return np.zeros(len(x), dtype=bool)
    idx = np.searchsorted(lo, x, side="right") - 1
    safe = np.maximum(idx, 0)
    return (idx >= 0) & (x < hi[safe])


def combine(a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray],
            op: str) -> tuple[np.ndarray, np.ndarray]:
    """Boolean algebra on run lists via elementary intervals.

    ``op`` is one of ``"and"``, ``"or"``, ``"sub"``.
    """
    (alo, ahi), (blo, bhi) = a, b
    coords = np.unique(np.concatenate((alo, ahi, blo, bhi)))
    if coords.size < 2:
        return coords[:0], coords[:0]
    starts = coords[:-1]
    in_a = membership(alo, ahi, starts)
    in_b = membership(blo, bhi, starts)
    if op == "and":
        keep = in_a & in_b
    elif op == "or":
        keep = in_a | in_b
    elif op == "sub":
        keep = in_a & ~in_b
    else:
        raise ValueError(f"unknown op {op!r}")
    return normalize(starts[keep], coords[1:][keep])


class RunIndex:
    """Prefix-count machinery over one run list.

    ``P(x)`` is the number of levels below ``x``; ``Q(x) = sum_{y<x} P(y)``.
    Both are evaluated in O(log runs) per query, which turns window sums
    ``sum_b |S & [b, b+t)|`` into a handful of lookups per run.
    """

    def __init__(self, lo: np.ndarray, hi: np.ndarray, max_query: int):
        self.size = int(exact_sum(hi - lo, INT_LIMIT)) if lo.size else 0
        # Q(x) <= x * size for every queried x
        self.dtype = int_dtype(max(max_query, 1) * max(self.size, 1) + max_query)
        self.lo = cast(lo, self.dtype)
        self.hi = cast(hi, self.dtype)
        self.length = self.hi - self.lo
        n = self.lo.size
        if n == 0:
            return
        zero = self.lo[:1] * 0
        self.cum = np.concatenate((zero, np.cumsum(self.length)[:-1]))
        after = self.cum + self.length
        gap = np.concatenate((self.lo[1:] - self.hi[:-1], zero))
        step = self.length * self.cum + self.length * (self.length - 1) // 2 + gap * after
        self.qlo = np.concatenate((zero, np.cumsum(step)[:-1]))

    def _locate(self, x: np.ndarray) -> np.ndarray:
        return np.maximum(np.searchsorted(self.lo, x, side="right") - 1, 0)

    def P(self, x: np.ndarray) -> np.ndarray:
        x = cast(np.asarray(x), self.dtype) if self.dtype is object else np.asarray(x, np.int64)
        if self.lo.size == 0:
            return x * 0
        k = self._locate(x)
        d = np.minimum(np.maximum(x - self.lo[k], 0), self.length[k])
        return self.cum[k] + d

    def Q(self, x: np.ndarray) -> np.ndarray:
        x = cast(np.asarray(x), self.dtype) if self.dtype is object else np.asarray(x, np.int64)
        if self.lo.size == 0:
            return x * 0
        k = self._locate(x)
        off = np.maximum(x - self.lo[k], 0)
        d = np.minimum(off, self.length[k])
        return (self.qlo[k] + d * self.cum[k] + d * (d - 1) // 2
                + (off - d) * (self.cum[k] + self.length[k]))

    def count_in(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Per-run counts ``|S & [lo, hi)|``."""
        return self.P(hi) - self.P(lo)


def expand_chunks(lo: np.ndarray, hi: np.ndarray, chunk: int):
    """Yield arrays of individual levels, about ``chunk`` at a time."""
    lengths = (hi - lo).astype(np.int64)
    ends = np.cumsum(lengths)
    start = 0
    while start < lo.size:
        done = int(ends[start - 1]) if start else 0
        stop = max(int(np.searchsorted(ends, done + chunk, side="right")), start + 1)
        block_len = lengths[start:stop]
        first = np.repeat(np.cumsum(block_len) - block_len, block_len)
        yield np.repeat(lo[start:stop], block_len) + (
            np.arange(int(block_len.sum()), dtype=np.int64) - first)
        start = stop
