"""Measurable sets as run-encoded unions of full levels of a stage column.

A :class:`LevelSet` at stage ``s`` is a union of levels of ``C_s``.  Every
level of ``C_s`` has width ``1 / h_hat_s``, so measures are exact rationals.
Sets at different stages are compared and combined after refining the
coarser one; refinement places one copy of the runs at every embedding
offset of ``C_s`` inside ``C_{s+1}``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _runs
from .construction import HorizonError, ParamSeq, embedding, last_offset

__all__ = [
    "LevelSet",
    "F_set",
    "column_set",
    "spacer_set",
    "subcolumn_set",
    "D_set",
    "parse_levelset",
    "format_levelset",
]


def stage_dtype(p: ParamSeq, stage: int):
    return _runs.int_dtype(p.h[stage])


class LevelSet:
    """Immutable union of levels ``[lo, hi)`` of column ``C_stage``.

    >>> from cutstack.construction import explicit_params
    >>> p = explicit_params(2, 1, 1, n_max=3)
    >>> F = F_set(p, 1)
    >>> F.runs
    [(0, 1), (2, 3)]
    >>> F.refine(2).runs
    [(0, 1), (2, 3), (7, 8), (9, 10)]
    """

    __slots__ = ("params", "stage", "lo", "hi", "_refined", "_index")

    def __init__(self, params: ParamSeq, stage: int, lo, hi, *, check: bool = True):
        params.check_stage(stage)
        dtype = stage_dtype(params, stage)
        lo = _runs.cast(np.asarray(lo), dtype) if isinstance(lo, np.ndarray) \
            else _runs.as_int_array(lo, dtype)
        hi = _runs.cast(np.asarray(hi), dtype) if isinstance(hi, np.ndarray) \
            else _runs.as_int_array(hi, dtype)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lo and hi must be 1-d arrays of equal length")
        if check and lo.size:
            if (hi < lo).any():
                raise ValueError("run with hi < lo")
            if lo[0] < 0 or hi[-1] > params.h[stage]:
                raise ValueError(f"runs outside [0, {params.h[stage]})")
            if lo.size > 1 and (lo[1:] < hi[:-1]).any():
                raise ValueError("runs must be sorted and disjoint")
        lo, hi = _runs.normalize(lo, hi)
        lo.flags.writeable = False
        hi.flags.writeable = False
        self.params = params
        self.stage = stage
        self.lo = lo
        self.hi = hi
        self._refined: dict[int, LevelSet] = {}
        self._index = None

    @classmethod
    def from_runs(cls, params: ParamSeq, stage: int, runs) -> "LevelSet":
        runs = sorted((int(a), int(b)) for a, b in runs)
        return cls(params, stage, [a for a, _ in runs], [b for _, b in runs])

    @classmethod
    def from_levels(cls, params: ParamSeq, stage: int, levels) -> "LevelSet":
        lo, hi = _runs.runs_from_levels(levels, stage_dtype(params, stage))
        return cls(params, stage, lo, hi)

    @classmethod
    def empty(cls, params: ParamSeq, stage: int = 0) -> "LevelSet":
        return cls(params, stage, [], [])

    # -- basic queries -------------------------------------------------------

    @property
    def runs(self) -> list[tuple[int, int]]:
        return list(zip(map(int, self.lo.tolist()), map(int, self.hi.tolist())))

    @property
    def n_runs(self) -> int:
        return int(self.lo.size)

    @property
    def count(self) -> int:
        """Number of levels."""
        return _runs.exact_sum(self.hi - self.lo, self.params.h[self.stage])

    @property
    def measure(self) -> Fraction:
        return Fraction(self.count, self.params.h_hat[self.stage])

    @property
    def max_level(self) -> int | None:
        return int(self.hi[-1]) - 1 if self.lo.size else None

    def is_empty(self) -> bool:
        return self.lo.size == 0

    def levels(self) -> np.ndarray:
        if self.lo.size == 0:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(list(_runs.expand_chunks(self.lo, self.hi, 1 << 22)))

    def index(self, max_query: int | None = None) -> _runs.RunIndex:
        """Prefix-count index; ``max_query`` bounds the largest query point."""
        top = 2 * self.params.h[self.stage] if max_query is None else max_query
        if self._index is None or self._index[0] < top:
            self._index = (top, _runs.RunIndex(self.lo, self.hi, top))
        return self._index[1]

    # -- refinement ----------------------------------------------------------

    def refine(self, target: int) -> "LevelSet":
        """The same measurable set expressed by levels of ``C_target``."""
        if target < self.stage:
            raise ValueError(f"cannot coarsen from stage {self.stage} to {target}")
        if target > self.params.n_max + 1:
            raise HorizonError(
                f"insufficient horizon: refinement to stage {target} "
                f"beyond n_max + 1 = {self.params.n_max + 1}")
        if target == self.stage:
            return self
        cur = self
        for s in range(target - 1, self.stage, -1):
            if s in self._refined:
                cur = self._refined[s]
                break
        while cur.stage < target:
            cur = cur._refine_once()
            self._refined[cur.stage] = cur
        return cur

    def _refine_once(self) -> "LevelSet":
        p, s = self.params, self.stage
        dtype = stage_dtype(p, s + 1)
        offsets = _runs.as_int_array(embedding(p, s).offsets, dtype)
        lo = _runs.cast(self.lo, dtype)
        hi = _runs.cast(self.hi, dtype)
        new_lo = np.add.outer(offsets, lo).ravel()
        new_hi = np.add.outer(offsets, hi).ravel()
        return LevelSet(p, s + 1, new_lo, new_hi, check=False)

    def max_level_at(self, target: int) -> int | None:
        """``max_level`` of the refinement without materialising it."""
        top = self.max_level
        if top is None:
            return None
        for s in range(self.stage, target):
            top += last_offset(self.params, s)
        return top

    # -- algebra -------------------------------------------------------------

    def _common(self, other: "LevelSet") -> tuple["LevelSet", "LevelSet"]:
        if other.params is not self.params and other.params != self.params:
            raise ValueError("level sets belong to different constructions")
        s = max(self.stage, other.stage)
        return self.refine(s), other.refine(s)

    def _combine(self, other: "LevelSet", op: str) -> "LevelSet":
        a, b = self._common(other)
        lo, hi = _runs.combine((a.lo, a.hi), (b.lo, b.hi), op)
        return LevelSet(a.params, a.stage, lo, hi, check=False)

    def intersect(self, other: "LevelSet") -> "LevelSet":
        return self._combine(other, "and")

    def union(self, other: "LevelSet") -> "LevelSet":
        return self._combine(other, "or")

    def difference(self, other: "LevelSet") -> "LevelSet":
        return self._combine(other, "sub")

    def complement_in(self, other: "LevelSet | None" = None) -> "LevelSet":
        """``other - self``; by default the complement inside ``C_stage``."""
        if other is None:
            other = column_set(self.params, self.stage)
        return other.difference(self)

    __and__ = intersect
    __or__ = union
    __sub__ = difference

    def issubset(self, other: "LevelSet") -> bool:
        a, b = self._common(other)
        if a.is_empty():
            return True
        idx = b.index(b.params.h[b.stage])
        inside = _runs.exact_sum(idx.count_in(a.lo, a.hi), a.params.h[a.stage])
        return inside == a.count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LevelSet):
            return NotImplemented
        a, b = self._common(other)
        return bool(a.lo.size == b.lo.size and (a.lo == b.lo).all() and (a.hi == b.hi).all())

    def __hash__(self):
        return hash((self.stage, self.n_runs, self.count))

    def __repr__(self) -> str:
        if self.n_runs <= 6:
            body = ",".join(f"[{a},{b})" for a, b in self.runs)
        else:
            body = f"{self.n_runs} runs"
        return f"LevelSet(stage={self.stage}, {body})"


# -- named sets ----------------------------------------------------------------

@lru_cache(maxsize=32)
def F_set(p: ParamSeq, n: int) -> LevelSet:
    """``F = I_0`` expressed at stage ``n``: the levels that copy ``C_0``."""
    p.check_stage(n)
    if n == 0:
        return LevelSet(p, 0, [0], [1])
    return F_set(p, n - 1).refine(n)


def column_set(p: ParamSeq, n: int) -> LevelSet:
    """All of ``C_n``."""
    return LevelSet(p, n, [0], [p.h[n]])


def spacer_set(p: ParamSeq, n: int) -> LevelSet:
    """Spacer levels of ``C_n`` (the complement of ``F`` inside ``C_n``)."""
    return F_set(p, n).complement_in()


def _subcolumn_runs(p: ParamSeq, n: int, i: int, js) -> LevelSet:
    k, m, h = p.k[n], p.m[n], p.h[n]
    H = h + p.ell[n]
    if i < k - 1:
        starts = [(j * (k - 1) + i) * H for j in js]
    else:
        starts = [m * (k - 1) * H + j * h for j in js]
    return LevelSet.from_runs(p, n + 1, [(s, s + h) for s in starts])


def subcolumn_set(p: ParamSeq, n: int, i: int, j: int | None = None) -> LevelSet:
    """``C_n(i)`` (or ``C_n(i, j)`` when ``j`` is given) at stage ``n + 1``."""
    if n > p.n_max:
        raise HorizonError(f"insufficient horizon: subcolumns of C_{n} need stage {n + 1}")
    if not 0 <= i < p.k[n]:
        raise IndexError(f"subcolumn index {i} outside 0..{p.k[n] - 1}")
    if j is not None and not 0 <= j < p.m[n]:
        raise IndexError(f"secondary index {j} outside 0..{p.m[n] - 1}")
    js = range(p.m[n]) if j is None else [j]
    return _subcolumn_runs(p, n, i, js)


def D_set(p: ParamSeq, n: int) -> LevelSet:
    """Union of ``C_n(k_n - 1, j)`` for ``floor(n^alpha) <= j < m_n``."""
    if not p.is_valpha:
        raise ValueError("D_n is defined only for the V_alpha family")
    if n < 1:
        raise ValueError("D_n needs n >= 1")
    if n > p.n_max:
        raise HorizonError(f"insufficient horizon: D_{n} lives at stage {n + 1}")
    return _subcolumn_runs(p, n, p.k[n] - 1, range(p.floor_n_alpha(n), p.m[n]))


# -- text format ---------------------------------------------------------------

def parse_levelset(text: str, p: ParamSeq) -> LevelSet:
    """Parse ``"stage:lo-hi,lo-hi,..."`` (decimal, half-open runs)."""
    try:
        stage_txt, _, body = text.strip().partition(":")
        stage = int(stage_txt)
        runs = []
        for part in filter(None, (s.strip() for s in body.split(","))):
            a, b = part.split("-")
            runs.append((int(a), int(b)))
    except ValueError as exc:
        raise ValueError(f"bad set literal {text!r}: {exc}") from None
    return LevelSet.from_runs(p, stage, runs)


def format_levelset(s: LevelSet) -> str:
    return f"{s.stage}:" + ",".join(f"{a}-{b}" for a, b in s.runs)
