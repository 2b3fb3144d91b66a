"""Exact correlations ``mu(A & T^i B)`` and Birkhoff-sum distributions.

Inside one column ``T`` moves level ``j`` to level ``j + 1``.  As long as a
shifted set stays below the column top, ``T^i B`` is just ``B + i`` and every
quantity reduces to counting levels.  All functions here pick the smallest
such *safe stage* and refine their operands to it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np

from . import _runs
from .construction import HorizonError, last_offset
from .levelsets import F_set, LevelSet

__all__ = [
    "BirkhoffHistogram",
    "safe_stage",
    "corr",
    "corr_sum",
    "corr_profile",
    "corr_sum_profile",
    "birkhoff_hist",
    "moment",
    "as_beta",
]


def safe_stage(B: LevelSet, shift: int, at_least: int = 0) -> int:
    """Smallest stage ``s >= max(B.stage, at_least)`` with ``max(B@s) + shift < h_s``."""
    p = B.params
    s = max(B.stage, at_least)
    top = B.max_level_at(s)
    if top is None:
        return s
    while top + shift >= p.h[s]:
        if s >= p.n_max + 1:
            raise HorizonError(
                f"insufficient horizon: shift {shift} is not safe at any stage "
                f"<= n_max + 1 = {p.n_max + 1}")
        top += last_offset(p, s)
        s += 1
    return s


def _check_stage(B: LevelSet, shift: int, stage: int) -> None:
    top = B.max_level_at(stage)
    if top is not None and top + shift >= B.params.h[stage]:
        raise HorizonError(f"shift {shift} is not safe at stage {stage}")


def _operands(A: LevelSet, B: LevelSet, shift: int, stage: int | None):
    if A.params is not B.params and A.params != B.params:
        raise ValueError("level sets belong to different constructions")
    if stage is None:
        stage = safe_stage(B, shift, A.stage)
    else:
        if stage < max(A.stage, B.stage):
            raise ValueError("stage below operand stage")
        _check_stage(B, shift, stage)
    return A.refine(stage), B.refine(stage), stage


def _batch(shifts, stage, A, B):
    shifts = [int(x) for x in shifts]
    if any(x < 0 for x in shifts):
        raise ValueError("negative shifts are not supported")
    top = max(shifts, default=0)
    a, b, s = _operands(A, B, top, stage)
    return shifts, top, a, b, s


def _blocks(n_rows: int, n_runs: int, budget: int = 1 << 22):
    step = max(budget // max(n_runs, 1), 1)
    for start in range(0, n_rows, step):
        yield slice(start, min(start + step, n_rows))


def corr_profile(A: LevelSet, B: LevelSet, shifts, stage: int | None = None) -> list[Fraction]:
    """``mu(A & T^i B)`` for every ``i`` in ``shifts``, at one common safe stage."""
    shifts, top, a, b, s = _batch(shifts, stage, A, B)
    p = a.params
    if a.is_empty() or b.is_empty() or not shifts:
        return [Fraction(0)] * len(shifts)
    idx = a.index(p.h[s] + top)
    sh = _runs.as_int_array(shifts, idx.dtype)[:, None]
    lo, hi = _runs.cast(b.lo, idx.dtype)[None, :], _runs.cast(b.hi, idx.dtype)[None, :]
    out = []
    for rows in _blocks(len(shifts), b.n_runs):
        hits = idx.P(hi + sh[rows]) - idx.P(lo + sh[rows])
        out.extend(_row_sums(hits, p.h[s]))
    return [Fraction(h, p.h_hat[s]) for h in out]


def corr_sum_profile(A: LevelSet, B: LevelSet, ts, stage: int | None = None) -> list[Fraction]:
    """``sum_{i<t} mu(A & T^i B)`` for every ``t`` in ``ts`` via the window identity.

    Each level ``b`` of ``B`` contributes ``|A & [b, b+t)|``; over a run this
    is a difference of second prefix sums, so the cost does not grow with
    ``t``.
    """
    ts, top, a, b, s = _batch(ts, stage, A, B)
    p = a.params
    if a.is_empty() or b.is_empty() or not ts:
        return [Fraction(0)] * len(ts)
    idx = a.index(p.h[s] + top)
    tt = _runs.as_int_array(ts, idx.dtype)[:, None]
    lo, hi = _runs.cast(b.lo, idx.dtype)[None, :], _runs.cast(b.hi, idx.dtype)[None, :]
    base = idx.Q(hi) - idx.Q(lo)
    out = []
    for rows in _blocks(len(ts), b.n_runs):
        per_run = idx.Q(hi + tt[rows]) - idx.Q(lo + tt[rows]) - base
        out.extend(_row_sums(per_run, b.count * min(top, idx.size)))
    return [Fraction(x, p.h_hat[s]) for x in out]


def _row_sums(mat: np.ndarray, bound: int) -> list[int]:
    if mat.dtype == object or bound >= _runs.INT_LIMIT:
        return [int(sum(row)) for row in mat.tolist()]
    return [int(x) for x in mat.sum(axis=1).tolist()]


def corr(A: LevelSet, B: LevelSet, i: int, stage: int | None = None) -> Fraction:
    """``mu(A & T^i B)``, exact.

    >>> from cutstack.construction import explicit_params
    >>> p = explicit_params(2, 1, 1, n_max=3)
    >>> F = F_set(p, 0)
    >>> corr(F, F, 2), corr(F, F, 1)
    (Fraction(1, 2), Fraction(0, 1))
    """
    return corr_profile(A, B, [i], stage)[0]


def corr_sum(A: LevelSet, B: LevelSet, t: int, stage: int | None = None) -> Fraction:
    """``sum_{i<t} mu(A & T^i B)``, exact."""
    return corr_sum_profile(A, B, [t], stage)[0]


@dataclass(frozen=True)
class BirkhoffHistogram:
    """Distribution of ``S_t = sum_{i<t} 1_F o T^i`` over ``base``.

    ``counts[v]`` is the number of stage-``stage`` levels of ``base`` on
    which ``S_t = v``; each level weighs ``1/denominator``.
    """

    t: int
    stage: int
    denominator: int
    counts: tuple[tuple[int, int], ...]
    base_measure: Fraction

    @property
    def entries(self) -> dict[int, Fraction]:
        return {v: Fraction(c, self.denominator) for v, c in self.counts}

    @property
    def total_measure(self) -> Fraction:
        return Fraction(sum(c for _, c in self.counts), self.denominator)

    def integral(self) -> Fraction:
        """``int_base S_t dmu``."""
        return Fraction(sum(v * c for v, c in self.counts), self.denominator)

    def is_atom(self) -> bool:
        return len(self.counts) <= 1


def birkhoff_hist(base: LevelSet, t: int, *, F: LevelSet | None = None,
                  chunk: int = 1 << 22, stage: int | None = None) -> BirkhoffHistogram:
    """Exact histogram of ``S_t`` restricted to ``base``, which must lie in ``F``.

    Levels of ``base`` are processed ``chunk`` at a time and merged by
    integer addition, so the result does not depend on ``chunk``.
    """
    p = base.params
    if t < 0:
        raise ValueError("t must be nonnegative")
    F = F_set(p, 0) if F is None else F
    f, b, s = _operands(F, base, t, stage)
    if not b.issubset(f):
        raise ValueError("base is not contained in F")
    counter: Counter[int] = Counter()
    if not b.is_empty():
        idx = f.index(p.h[s] + t)
        for levels in _runs.expand_chunks(b.lo, b.hi, chunk):
            v = idx.P(levels + t) - idx.P(levels)
            values, counts = np.unique(v, return_counts=True)
            counter.update(dict(zip(map(int, values.tolist()), map(int, counts.tolist()))))
    return BirkhoffHistogram(t=t, stage=s, denominator=p.h_hat[s],
                             counts=tuple(sorted(counter.items())),
                             base_measure=b.measure)


def as_beta(beta):
    """Parse ``beta``: integers and rationals stay exact, ``"5/2"`` accepted."""
    if isinstance(beta, str):
        beta = Fraction(beta.strip())
    if isinstance(beta, Rational):
        beta = Fraction(beta)
        return int(beta) if beta.denominator == 1 else beta
    return beta


def moment(hist: BirkhoffHistogram, beta, precision: int = 64):
    """``int_base S_t^beta dmu``.

    Exact ``Fraction`` for integer ``beta``; otherwise an ``mpmath.mpf``
    computed with ``precision`` bits.
    """
    beta = as_beta(beta)
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if isinstance(beta, int):
        return Fraction(sum(v ** beta * c for v, c in hist.counts), hist.denominator)
    with mpmath.workprec(max(precision, 64)):
        b = mpmath.mpf(beta.numerator) / beta.denominator if isinstance(beta, Fraction) \
            else mpmath.mpf(beta)
        total = mpmath.fsum(mpmath.mpf(v) ** b * c for v, c in hist.counts)
        return +(total / hist.denominator)
