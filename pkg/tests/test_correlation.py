from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cutstack.construction import HorizonError, explicit_params
from cutstack.correlation import (
    birkhoff_hist,
    corr,
    corr_profile,
    corr_sum,
    corr_sum_profile,
    moment,
    safe_stage,
)
from cutstack.levelsets import F_set, LevelSet, subcolumn_set
from cutstack.oracle import build_explicit, oracle_birkhoff


def test_corr_examples(p221, va):
    for p in (p221, va):
        F = F_set(p, 0)
        assert corr(F, F, 0) == 1
    F = F_set(p221, 0)
    assert corr(F, F, 2) == Fraction(1, 2)
    assert corr(F, F, 1) == 0


def test_corr_sum_examples(p221):
    F = F_set(p221, 0)
    assert corr_sum(F, F, 1) == 1
    assert corr_sum(F, F, 3) == Fraction(3, 2)
    assert corr_sum(F, LevelSet.empty(p221), 5) == 0
    assert corr_sum(F, F, 0) == 0


def test_profiles_agree_with_scalar(va):
    F = F_set(va, 0)
    C = subcolumn_set(va, 2, 1)
    prof = corr_profile(F, C, range(300), stage=3)
    sums = corr_sum_profile(F, C, range(301), stage=3)
    assert all(prof[i] == corr(F, C, i, stage=3) for i in range(0, 300, 17))
    assert all(sums[t] == sum(prof[:t]) for t in range(0, 301, 23))


def test_safe_stage_rule(p221):
    F = F_set(p221, 0)
    assert safe_stage(F, 0) == 0
    assert safe_stage(F, 2) == 1  # level 0 + 2 < h_1 = 6
    assert safe_stage(F, 6) == 2
    with pytest.raises(HorizonError):
        corr(F, F, 10 ** 6)
    with pytest.raises(HorizonError):
        corr(F, F, 7, stage=1)


def test_stage_independence(va):
    F = F_set(va, 0)
    C = subcolumn_set(va, 1, 0)
    for i in (0, 3, 9, 30):
        vals = {corr(F, C, i, stage=s) for s in range(safe_stage(C, i), 5)}
        assert len(vals) == 1


def test_birkhoff_examples(p221):
    F = F_set(p221, 0)
    assert birkhoff_hist(F, 1).entries == {1: Fraction(1)}
    h = birkhoff_hist(F, 3)
    assert h.entries == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    assert h.integral() == corr_sum(F, F, 3) == Fraction(3, 2)


def test_birkhoff_matches_oracle(va):
    tower = build_explicit(va, 4)
    F = F_set(va, 0)
    for t in (1, 5, 48, 100, 1920):
        got = birkhoff_hist(F, t, stage=4).entries
        assert got == oracle_birkhoff(tower, tower.original, t)


def test_birkhoff_chunking_invariant(va):
    F = F_set(va, 0)
    a = birkhoff_hist(F, 1920, chunk=7)
    b = birkhoff_hist(F, 1920)
    assert a == b


def test_birkhoff_rejects_base_outside_F(p221):
    with pytest.raises(ValueError):
        birkhoff_hist(LevelSet.from_runs(p221, 1, [(1, 2)]), 2)


def test_moment_examples(p221):
    h = birkhoff_hist(F_set(p221, 0), 3)
    assert moment(h, 1) == Fraction(3, 2)
    assert moment(h, 2) == Fraction(5, 2)
    assert moment(h, 3) == Fraction(9, 2)
    with pytest.raises(ValueError):
        moment(h, Fraction(1, 2))
    with mpmath.workprec(200):
        want = (2 ** mpmath.mpf(2.5) + 1) / 2
    assert abs(moment(h, "5/2", precision=128) - want) < mpmath.mpf(2) ** -120


def test_big_integer_family_correlations():
    # huge spacer blocks push level indices past 64 bits (object arrays);
    # F at stage 2 is {0, 1, H_1, H_1 + 1} with H_1 = 4 + 10**20
    big = explicit_params(2, [0, 10 ** 20, 10 ** 20], 1, n_max=2)
    F = F_set(big, 0)
    assert F_set(big, 3).lo.dtype == object
    assert corr(F, F, 1) == Fraction(1, 2)
    assert corr_sum(F, F, 10 ** 20) == Fraction(3, 2)
    h = birkhoff_hist(F, 3)
    assert h.integral() == corr_sum(F, F, 3)


@given(st.integers(1, 900), st.sampled_from([2, 3, 4, 5]), st.sampled_from([2, 3, 4, 5]))
@settings(max_examples=40, deadline=None)
def test_power_mean_inequality(t, b1, b2):
    p = explicit_params([2, 3, 2, 2], [1, 2, 0, 3], [1, 2, 2, 1], n_max=3)
    base = F_set(p, 0)
    if base.max_level_at(4) + t >= p.h[4]:
        return
    h = birkhoff_hist(base, t)
    lo, hi = sorted((b1, b2))
    mu = base.measure
    # (M_lo/mu)^(1/lo) <= (M_hi/mu)^(1/hi), compared exactly via integer powers
    assert (moment(h, lo) / mu) ** hi <= (moment(h, hi) / mu) ** lo


def test_fubini_random_bases(va):
    rng = np.random.default_rng(3)
    F = F_set(va, 0)
    F3 = F_set(va, 3)
    levels = F3.levels()
    for _ in range(30):
        pick = rng.choice(levels, size=rng.integers(1, 20), replace=False)
        base = LevelSet.from_levels(va, 3, pick)
        t = int(rng.integers(1, 960 - base.max_level))
        assert birkhoff_hist(base, t).integral() == corr_sum(F, base, t)
