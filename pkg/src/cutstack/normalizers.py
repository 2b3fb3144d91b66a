"""Normalizing sequences for the return sums of ``F = I_0``.

``a_hat`` evaluates the closed-form normalizer piecewise in the position of
``t`` inside the stage-``n`` block structure; ``a_of_F`` and ``b_term`` are
the exact correlation sums it is compared against.

The V_alpha family has ``k_n = n + 1``, so factors written there as
``(n+1) m_n`` and ``n m_{n-1}`` are evaluated here as ``k_n m_n`` and
``k_{n-1} m_{n-1}``; for other families this keeps the formulas defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .construction import HorizonError, ParamSeq
from .correlation import corr_sum
from .levelsets import F_set, LevelSet, subcolumn_set

__all__ = ["DecompositionError", "TDecomposition", "decompose", "a_hat", "a_of_F", "b_term"]


class DecompositionError(ValueError):
    """``t`` is below the first stage where the normalizer is defined."""


@dataclass(frozen=True)
class TDecomposition:
    t: int
    n: int
    q: int
    r: int
    case: int
    q1: int | None = None  # case 2: r = q1 H_{n-1} + r1
    r1: int | None = None
    q2: int | None = None  # case 3: H_n - r = q2 H_{n-1} + r2
    r2: int | None = None


def _H(p: ParamSeq, n: int) -> int:
    return p.h[n] + p.ell[n]


def decompose(p: ParamSeq, t: int) -> TDecomposition:
    """Locate ``t`` with ``h_n <= t < h_{n+1}`` and split ``t = q H_n + r``.

    >>> from fractions import Fraction
    >>> from cutstack.construction import valpha_params
    >>> p = valpha_params(Fraction(1, 2), "n^2", n_max=5)
    >>> decompose(p, 48)
    TDecomposition(t=48, n=2, q=1, r=0, case=2, q1=0, r1=0, q2=None, r2=None)
    """
    if p.n_max < 2 or t < p.h[2]:
        raise DecompositionError(f"t = {t} below h_2; the normalizer needs stage n >= 2")
    n = None
    for s in range(2, p.n_max + 1):
        if p.h[s] <= t < p.h[s + 1]:
            n = s
            break
    if n is None:
        raise HorizonError(f"insufficient horizon: t = {t} >= h_{p.n_max + 1}")
    h, H, Hp = p.h[n], _H(p, n), _H(p, n - 1)
    q, r = divmod(t, H)
    if r < h:
        q1, r1 = divmod(r, Hp)
        return TDecomposition(t, n, q, r, 2, q1=q1, r1=r1)
    if r >= H - h:
        q2, r2 = divmod(H - r, Hp)
        return TDecomposition(t, n, q, r, 3, q2=q2, r2=r2)
    return TDecomposition(t, n, q, r, 1)


def a_hat(p: ParamSeq, t: int) -> Fraction:
    """Piecewise closed-form normalizer ``a_t``.

    Case 1 (``h_n <= r < H_n - h_n``) adds half a column, case 2 (``r < h_n``)
    adds the stage ``n-1`` term for ``r``, case 3 (``r >= H_n - h_n``) rounds
    up to ``q + 1`` blocks and subtracts the stage ``n-1`` term for
    ``H_n - r``.
    """
    d = decompose(p, t)
    n = d.n
    hh, hh_prev = p.h_hat[n], p.h_hat[n - 1]
    km, km_prev = p.k[n] * p.m[n], p.k[n - 1] * p.m[n - 1]

    def block(q, height, cuts):
        return q * height * (1 - Fraction(q, 2 * cuts))

    if d.case == 1:
        return block(d.q, hh, km) + Fraction(hh, 2)
    if d.case == 2:
        return block(d.q, hh, km) + block(d.q1, hh_prev, km_prev)
    return ((d.q + 1) * hh * (1 - Fraction(d.q, 2 * km))
            - block(d.q2, hh_prev, km_prev) * (1 - Fraction(d.q, km)))


def a_of_F(F: LevelSet, N: int) -> Fraction:
    """``sum_{k<N} mu(F & T^k F) / mu(F)^2``."""
    mu = F.measure
    if mu == 0:
        raise ValueError("F must have positive measure")
    return corr_sum(F, F, N) / mu ** 2


def b_term(p: ParamSeq, n: int, N: int) -> Fraction:
    """Return-sum mass carried by ``F & C_n(k_n - 1)``, both directions.

    ``sum_{i<N} mu(F & T^i F_n) + mu(F_n & T^i F)`` with ``F_n = F & C_n(k_n - 1)``.
    """
    if N == 0:
        return Fraction(0)
    F = F_set(p, 0)
    Fn = F.intersect(subcolumn_set(p, n, p.k[n] - 1))
    return corr_sum(F, Fn, N) + corr_sum(Fn, F, N)
