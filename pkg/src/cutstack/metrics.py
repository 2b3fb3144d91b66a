"""Headline quantities: ratio tables, power-moment ratios and exact checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .construction import ParamSeq, floor_power
from .correlation import as_beta, birkhoff_hist, corr_sum, moment
from .levelsets import F_set, LevelSet, subcolumn_set, column_set
from .normalizers import a_hat, decompose

__all__ = [
    "BoundInapplicable",
    "WreRow",
    "BetaRow",
    "HolderResult",
    "IndependenceReport",
    "wre_ratio",
    "beta_ratio",
    "beta_row",
    "holder_check",
    "independence_check",
    "ratio_bound",
]


class BoundInapplicable(ValueError):
    """The decay bound has a nonpositive denominator at this stage."""


def _mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class WreRow:
    t: int
    n: int
    q: int
    r: int
    case: int
    corr_sum: Fraction
    a_t: Fraction
    ratio: mpmath.mpf
    target: Fraction
    residual: mpmath.mpf
    precision: int = 64


@dataclass(frozen=True)
class BetaRow:
    t: int
    beta: object
    numerator: object
    denominator: object
    R: mpmath.mpf
    R_exact: Fraction | None
    n: int | None = None
    ratio_bound: float | None = None
    precision: int = 64
    meta: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.R_exact is not None


@dataclass(frozen=True)
class HolderResult:
    ok: bool
    slack: object
    lhs: object
    rhs: object


@dataclass(frozen=True)
class IndependenceReport:
    N: int
    n: int
    n2: int
    mu_En: Fraction
    mu_En2: Fraction
    mu_joint: Fraction

    @property
    def product(self) -> Fraction:
        return self.mu_En * self.mu_En2

    @property
    def independent(self) -> bool:
        return self.mu_joint == self.product


def _check_in_F(p: ParamSeq, *sets: LevelSet) -> None:
    F = F_set(p, 0)
    for s in sets:
        if not s.issubset(F):
            raise ValueError("set is not contained in F")


def wre_ratio(p: ParamSeq, A: LevelSet, B: LevelSet, t: int, precision: int = 64) -> WreRow:
    """Return sum ``sum_{i<t} mu(A & T^i B)`` against ``a_hat(t)``."""
    _check_in_F(p, A, B)
    d = decompose(p, t)
    a_t = a_hat(p, t)
    s = corr_sum(A, B, t)
    target = A.measure * B.measure
    with mpmath.workprec(max(precision, 64)):
        ratio = _mpf(s) / _mpf(a_t)
        residual = abs(ratio - _mpf(target))
    return WreRow(t, d.n, d.q, d.r, d.case, s, a_t, ratio, target, residual, precision)


def beta_ratio(base: LevelSet, t: int, beta, precision: int = 64) -> BetaRow:
    """``(int_base S_t)^beta / int_base S_t^beta`` with ``S_t`` counting visits to ``F``."""
    beta = as_beta(beta)
    if beta <= 1:
        raise ValueError("beta must be > 1")
    hist = birkhoff_hist(base, t)
    mean = hist.integral()
    den = moment(hist, beta, precision)
    with mpmath.workprec(max(precision, 64)):
        if isinstance(beta, int):
            num = mean ** beta
            exact = num / den if den else None
            R = _mpf(exact) if exact is not None else mpmath.mpf(0)
        else:
            b = _mpf(beta) if isinstance(beta, Fraction) else mpmath.mpf(beta)
            num = _mpf(mean) ** b
            exact = None
            R = num / den if den else mpmath.mpf(0)
    return BetaRow(t=t, beta=beta, numerator=num, denominator=den, R=R, R_exact=exact,
                   precision=precision)


def beta_row(p: ParamSeq, n: int, beta, precision: int = 64, delta=0) -> BetaRow:
    """``beta_ratio`` of ``F`` along ``t = H_n`` with the decay bound attached."""
    t = p.h[n] + p.ell[n]
    row = beta_ratio(F_set(p, 0), t, beta, precision)
    bound = None
    meta = {}
    if p.is_valpha:
        try:
            bound = ratio_bound(n, p.alpha, row.beta, p.m[n], delta)
        except BoundInapplicable:
            meta["ratio_bound"] = "inapplicable"
    return BetaRow(t=row.t, beta=row.beta, numerator=row.numerator,
                   denominator=row.denominator, R=row.R, R_exact=row.R_exact, n=n,
                   ratio_bound=bound, precision=precision, meta=meta)


def holder_check(base: LevelSet, t: int, beta, precision: int = 64) -> HolderResult:
    """``(int S)^beta <= (int S^beta) mu(base)^(beta-1)`` on ``base``.

    Exact for integer ``beta``; otherwise evaluated with ``precision`` bits.
    """
    beta = as_beta(beta)
    hist = birkhoff_hist(base, t)
    mu = base.measure
    mean = hist.integral()
    if isinstance(beta, int):
        lhs = mean ** beta
        rhs = moment(hist, beta) * mu ** (beta - 1)
        return HolderResult(lhs <= rhs, rhs - lhs, lhs, rhs)
    with mpmath.workprec(max(precision, 64)):
        b = _mpf(beta) if isinstance(beta, Fraction) else mpmath.mpf(beta)
        lhs = _mpf(mean) ** b
        rhs = moment(hist, beta, precision) * _mpf(mu) ** (b - 1)
        slack = rhs - lhs
        # relative tolerance of a few ulps at the working precision
        tol = abs(rhs) * mpmath.mpf(2) ** (-(max(precision, 64) - 4))
        return HolderResult(bool(slack >= -tol), slack, lhs, rhs)


def independence_check(p: ParamSeq, N: int, n: int, n2: int) -> IndependenceReport:
    """Product law for ``E_n = C_N & C_n(k_n - 1)`` under ``mu / mu(C_N)``."""
    if not N < n < n2 <= p.n_max:
        raise ValueError(f"need N < n < n' <= n_max, got {N}, {n}, {n2}")
    CN = column_set(p, N)
    norm = CN.measure
    En = CN.intersect(subcolumn_set(p, n, p.k[n] - 1))
    En2 = CN.intersect(subcolumn_set(p, n2, p.k[n2] - 1))
    joint = En.intersect(En2)
    return IndependenceReport(N, n, n2, En.measure / norm, En2.measure / norm,
                              joint.measure / norm)


def ratio_bound(n: int, alpha, beta, m_n: int, delta=0, mu_F=1) -> float:
    """``2^(2 beta) mu(F)^(beta-1)`` over
    ``floor(n^alpha)^beta / (n+1) (1-delta)^2 (1 - 5 delta - 2 floor(n^alpha)/m_n)``.
    """
    delta = Fraction(delta)
    if not 0 <= delta <= Fraction(1, 10):
        raise ValueError("delta must lie in [0, 1/10]")
    f = floor_power(n, Fraction(alpha))
    beta_f = float(beta)
    last = 1 - 5 * delta - Fraction(2 * f, m_n)
    if f == 0 or last <= 0:
        raise BoundInapplicable(f"bound inapplicable at n = {n}")
    denom = f ** beta_f / (n + 1) * float((1 - delta) ** 2 * last)
    return 2 ** (2 * beta_f) * float(mu_F) ** (beta_f - 1) / denom
