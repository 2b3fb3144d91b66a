from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cutstack.construction import HorizonError, explicit_params
from cutstack.levelsets import (
    D_set,
    F_set,
    LevelSet,
    column_set,
    format_levelset,
    parse_levelset,
    spacer_set,
    subcolumn_set,
)
from cutstack.oracle import build_explicit


def test_refine_example(p221):
    F1 = LevelSet.from_runs(p221, 1, [(0, 1), (2, 3)])
    assert F1.refine(2).runs == [(0, 1), (2, 3), (7, 8), (9, 10)]
    assert F1.refine(1) is F1
    with pytest.raises(ValueError):
        F1.refine(0)
    with pytest.raises(HorizonError):
        F1.refine(5)


def test_F_set(p221, va):
    assert F_set(p221, 1).runs == [(0, 1), (2, 3)]
    assert F_set(va, 0).runs == [(0, 1)]
    for p in (p221, va):
        for n in range(0, 5):
            assert F_set(p, n).measure == 1


def test_subcolumn_set(p221):
    C = subcolumn_set(p221, 1, 1)
    assert C.stage == 2 and C.runs == [(7, 13)]
    measures = {subcolumn_set(p221, 1, i).measure for i in range(2)}
    assert len(measures) == 1
    with pytest.raises(IndexError):
        subcolumn_set(p221, 1, 2)


def test_subcolumns_partition_column(va):
    for n in range(0, 4):
        parts = [subcolumn_set(va, n, i) for i in range(va.k[n])]
        union = parts[0]
        for s in parts[1:]:
            assert union.intersect(s).is_empty()
            union = union | s
        assert union == column_set(va, n).refine(n + 1)
        assert all(s.measure == column_set(va, n).measure / va.k[n] for s in parts)


def test_D_set(va, p221):
    D = D_set(va, 2)
    assert D == LevelSet.from_runs(va, 3, [(408, 432), (432, 456), (456, 480)])
    assert D.measure == Fraction(3, 2)
    assert D.issubset(subcolumn_set(va, 2, va.k[2] - 1))
    with pytest.raises(ValueError):
        D_set(p221, 1)


def test_D_set_empty_when_floor_exceeds_m():
    from cutstack.construction import valpha_params
    p = valpha_params(Fraction(1, 2), [0, 1, 1, 1], n_max=3)
    assert D_set(p, 1).is_empty()


def test_algebra_examples(p221):
    F2 = F_set(p221, 2)
    got = F2.intersect(LevelSet.from_runs(p221, 2, [(7, 13)]))
    assert got.runs == [(7, 8), (9, 10)]
    assert got.measure == Fraction(1, 2)
    empty = LevelSet.empty(p221)
    assert (F2 | empty) == F2
    assert (F2 - F2).is_empty()


def test_spacer_measure(p221, va):
    for p in (p221, va):
        for n in range(0, 5):
            S = spacer_set(p, n)
            assert S.measure == Fraction(p.h[n], p.h_hat[n]) - 1
            assert S.intersect(F_set(p, n)).is_empty()
            assert (S | F_set(p, n)) == column_set(p, n)


def test_self_similarity_and_run_growth(va, p221):
    for p in (va, p221):
        for n in range(0, 4):
            Fn, Fn1 = F_set(p, n), F_set(p, n + 1)
            assert Fn.refine(n + 1) == Fn1
            bound = p.k[n] * p.m[n] * Fn.n_runs
            assert Fn1.n_runs <= bound
            if p.ell[n] > 0 and n >= 1:
                assert Fn1.n_runs == bound


def test_seam_merge_with_zero_spacers():
    p = explicit_params(3, 0, 1, n_max=2)
    # three copies of the one-level C_0 sit back to back
    assert F_set(p, 1).runs == [(0, 3)]


def test_text_format_round_trip(va):
    s = parse_levelset("3:0-2,8-10", va)
    assert s.runs == [(0, 2), (8, 10)]
    assert parse_levelset(format_levelset(s), va) == s
    with pytest.raises(ValueError):
        parse_levelset("3:0-2,x", va)
    with pytest.raises(ValueError):
        parse_levelset("1:0-9", va)  # beyond h_1 = 4


def test_rejects_overlapping_runs(va):
    with pytest.raises(ValueError):
        LevelSet(va, 2, [0, 1], [3, 4])


def test_big_integer_levels():
    p = explicit_params(2, 10 ** 20, 1, n_max=3)
    F = F_set(p, 3)
    assert F.lo.dtype == object
    assert F.measure == 1
    assert F.max_level > 2 ** 64
    assert F.max_level_at(3) == F.max_level


def test_levels_match_oracle_roles(va, p221):
    for p, top in ((va, 4), (p221, 4)):
        tower = build_explicit(p, top)
        for n in range(top + 1):
            orig = np.flatnonzero(tower.tower(n).original)
            assert np.array_equal(orig, F_set(p, n).levels())
            assert np.array_equal(np.flatnonzero(~tower.tower(n).original),
                                  spacer_set(p, n).levels())


level_lists = st.lists(st.integers(0, 105), max_size=40)


@given(level_lists, level_lists)
@settings(max_examples=150, deadline=None)
def test_algebra_matches_python_sets(a, b):
    p = explicit_params(2, 1, 1, n_max=3)
    A, B = LevelSet.from_levels(p, 3, a), LevelSet.from_levels(p, 3, b)
    sa, sb = set(a), set(b)
    assert set(A.intersect(B).levels().tolist()) == sa & sb
    assert set(A.union(B).levels().tolist()) == sa | sb
    assert set(A.difference(B).levels().tolist()) == sa - sb
    assert set(A.complement_in().levels().tolist()) == set(range(106)) - sa
    assert A.measure == Fraction(len(sa), 8)
    assert A.issubset(A | B)
    assert A.refine(4).measure == A.measure
