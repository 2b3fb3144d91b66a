from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cutstack.construction import (
    HorizonError,
    embedding,
    explicit_params,
    floor_power,
    geometry,
    make_params,
    valpha_params,
)


def test_explicit_constant_family(p221):
    assert p221.k == (2, 2, 2, 2)
    assert p221.ell == (1, 1, 1, 1)
    assert p221.family == "explicit"


def test_valpha_family_rule(va):
    assert va.k == (2, 2, 3, 4, 5, 6)
    assert va.ell[1] == va.h[1]
    assert va.m[1:] == (1, 4, 9, 16, 25)
    for n in range(1, 6):
        assert va.ell[n] == floor_power(n, Fraction(1, 2)) * va.h[n]


@pytest.mark.parametrize("kwargs", [
    dict(k=1, ell=0, m=1, n_max=2),
    dict(k=2, ell=0, m=0, n_max=2),
    dict(k=2, ell=-1, m=1, n_max=2),
])
def test_explicit_rejects_bad_parameters(kwargs):
    with pytest.raises(ValueError):
        explicit_params(**kwargs)


@pytest.mark.parametrize("alpha", [Fraction(3, 2), 0, 1])
def test_valpha_rejects_alpha(alpha):
    with pytest.raises(ValueError):
        valpha_params(alpha, "n^2", n_max=3)


def test_valpha_rejects_short_horizon():
    with pytest.raises(ValueError):
        valpha_params(Fraction(1, 2), "n^2", n_max=0)


def test_make_params_dispatch(va):
    p = make_params("valpha", alpha=Fraction(1, 2), m_rule="n^2", n_max=5)
    assert p == va
    with pytest.raises(ValueError):
        make_params("other")


def test_explicit_m_rule_list():
    p = valpha_params(Fraction(1, 2), [0, 1, 4, 9], n_max=3)
    assert p.m == (1, 1, 4, 9)


def test_geometry_p221(p221):
    assert geometry(p221, 1).h == 6
    g = geometry(p221, 2)
    assert (g.h, g.h_hat) == (26, 4)
    assert geometry(p221, 1).H == 7


def test_geometry_va(va):
    g = geometry(va, 3)
    assert (g.h, g.h_hat) == (960, 48)
    assert geometry(va, 2).H == 48
    assert g.base_width == Fraction(1, 48)
    assert g.spacer_levels == 960 - 48


def test_geometry_horizon(p221):
    assert geometry(p221, 4).H is None
    with pytest.raises(HorizonError):
        geometry(p221, 5)


def test_embedding_examples(p221, va):
    assert embedding(p221, 1).offsets == (0, 7)
    assert embedding(va, 1).offsets == (0, 8)
    with pytest.raises(HorizonError):
        embedding(p221, 4)


def test_limit_condition_flag(va):
    # floor(sqrt 3)/9 < floor(sqrt 4)/16: the finite-horizon proxy is violated
    assert va.limit_condition_monotone is False
    assert valpha_params(Fraction(1, 2), "n^3", n_max=6).limit_condition_monotone


def test_big_integer_heights():
    p = explicit_params(2, 10 ** 20, 1, n_max=3)
    assert p.h[2] > 2 ** 64
    assert geometry(p, 3).h % 2 == 0


families = st.builds(
    lambda n_max, ks, ls, ms: explicit_params(ks[: n_max + 1], ls[: n_max + 1],
                                              ms[: n_max + 1], n_max),
    st.integers(1, 4),
    st.lists(st.integers(2, 5), min_size=5, max_size=5),
    st.lists(st.integers(0, 7), min_size=5, max_size=5),
    st.lists(st.integers(1, 4), min_size=5, max_size=5),
)


@given(families)
@settings(max_examples=80, deadline=None)
def test_embedding_invariants(p):
    for n in range(p.n_max + 1):
        g, g1 = geometry(p, n), geometry(p, n + 1)
        off = embedding(p, n).offsets
        assert len(off) == p.k[n] * p.m[n]
        assert all(b - a >= g.h for a, b in zip(off, off[1:]))
        assert off[-1] + g.h == g1.h // 2
        assert g1.h % 2 == 0
        assert p.m[n] * (p.k[n] - 1) * g.H + p.m[n] * g.h == g1.h // 2
        assert g1.h_hat == p.k[n] * p.m[n] * g.h_hat
        assert g1.base_width * p.k[n] * p.m[n] == g.base_width
        assert g.base_width * g.h_hat == 1


@given(st.integers(0, 400), st.integers(1, 9), st.integers(1, 9))
def test_floor_power_matches_brute_force(n, a, b):
    alpha = Fraction(min(a, b), max(a, b))
    brute = max(l for l in range(n + 2) if Fraction(l) ** alpha.denominator
                <= Fraction(n) ** alpha.numerator)
    assert floor_power(n, alpha) == brute
