from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cutstack.construction import HorizonError
from cutstack.levelsets import F_set
from cutstack.normalizers import DecompositionError, a_hat, a_of_F, b_term, decompose
from cutstack.oracle import build_explicit, oracle_corr_sum


def test_decompose_examples(va):
    d = decompose(va, 48)
    assert (d.n, d.q, d.r, d.case, d.q1) == (2, 1, 0, 2, 0)
    H4 = va.h[4] + va.ell[4]
    d = decompose(va, H4 + 150000)
    assert H4 + 150000 == 512880
    assert (d.n, d.q, d.r, d.case) == (4, 1, 150000, 1)
    d = decompose(va, 662880)
    assert (d.n, d.q, d.r, d.case, d.q2, d.r2) == (4, 1, 300000, 3, 32, 1440)


def test_decompose_bounds(va):
    with pytest.raises(DecompositionError):
        decompose(va, va.h[2] - 1)
    with pytest.raises(HorizonError):
        decompose(va, va.h[6])


def test_a_hat_examples(va):
    assert a_hat(va, 48) == Fraction(23, 6)
    assert a_hat(va, 512880) == Fraction(12906, 5)
    assert a_hat(va, 662880) == Fraction(38876, 15)


@given(st.integers(24, 50319359))
@settings(max_examples=300, deadline=None)
def test_decomposition_is_exact_and_unique(t):
    from cutstack.construction import valpha_params
    p = valpha_params(Fraction(1, 2), "n^2", n_max=5)
    d = decompose(p, t)
    h, H = p.h[d.n], p.h[d.n] + p.ell[d.n]
    assert h <= t < p.h[d.n + 1]
    assert d.q * H + d.r == t and 0 <= d.r < H
    cases = [h <= d.r < H - h, d.r < h, d.r >= H - h]
    assert sum(cases) == 1 and cases[d.case - 1]
    Hp = p.h[d.n - 1] + p.ell[d.n - 1]
    if d.case == 2:
        assert d.q1 * Hp + d.r1 == d.r
    if d.case == 3:
        assert d.q2 * Hp + d.r2 == H - d.r
    assert a_hat(p, t) > 0


def test_case1_empty_when_floor_is_one(va):
    # ell_n = h_n for n = 1..3, so h_n <= r < H_n - h_n = h_n is empty
    for n in (2, 3):
        h, H = va.h[n], va.h[n] + va.ell[n]
        assert all(decompose(va, q * H + r).case != 1
                   for q in (1, 2) for r in (0, h - 1, h, H - 1))


def test_case_consistency_at_r_zero(va):
    for n in (2, 3, 4, 5):
        H = va.h[n] + va.ell[n]
        for q in (1, 2, 7):
            t = q * H
            km = va.k[n] * va.m[n]
            assert a_hat(va, t) == va.h_hat[n] * q * (1 - Fraction(q, 2 * km))


def test_a_of_F(p221, va):
    F = F_set(p221, 0)
    assert a_of_F(F, 1) == 1
    assert a_of_F(F, 3) == Fraction(3, 2)
    tower = build_explicit(va, 3)
    Fv = F_set(va, 0)
    assert a_of_F(Fv, 48) == oracle_corr_sum(tower, tower.original, tower.original, 48)


def test_b_term(p221):
    assert b_term(p221, 1, 1) == 1
    assert b_term(p221, 1, 3) == Fraction(3, 2)
    assert b_term(p221, 1, 0) == 0
