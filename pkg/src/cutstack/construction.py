"""Parameter sequences and exact stage geometry of the rank-one towers.

A construction is driven by three sequences ``k_n`` (cuts), ``ell_n``
(spacers placed on top of each of the first ``k_n - 1`` subcolumns) and
``m_n`` (secondary cuts).  Column ``C_{n+1}`` is assembled from
``k_n * m_n`` copies of ``C_n``:

* the first ``m_n (k_n - 1)`` copies are laid out with period
  ``H_n = h_n + ell_n`` (copy plus its spacer block),
* the last ``m_n`` copies follow back to back with period ``h_n``,
* the whole stack is doubled with spacers on top.

All heights are Python integers, all widths ``fractions.Fraction``.  Widths
are normalised so that the original interval ``I_0`` has measure one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

__all__ = [
    "HorizonError",
    "ParamSeq",
    "StageGeometry",
    "EmbeddingMap",
    "floor_power",
    "explicit_params",
    "valpha_params",
    "make_params",
    "geometry",
    "embedding",
]


class HorizonError(ValueError):
    """Raised when a query needs stages beyond the construction horizon."""


def _iroot_floor(x: int, q: int) -> int:
    """Largest r >= 0 with r**q <= x."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x < 2 or q == 1:
        return x
    r = 1 << ((x.bit_length() + q - 1) // q)
    # Newton iteration from above
    while True:
        s = ((q - 1) * r + x // r ** (q - 1)) // q
        if s >= r:
            break
        r = s
    while r ** q > x:
        r -= 1
    while (r + 1) ** q <= x:
        r += 1
    return r


def floor_power(n: int, alpha: Fraction) -> int:
    """Exact ``floor(n ** alpha)`` for a nonnegative rational exponent.

    Computed as the largest integer ``l`` with ``l**q <= n**p`` where
    ``alpha = p/q``; no floating point is involved.
    """
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _iroot_floor(n ** alpha.numerator, alpha.denominator)


@dataclass(frozen=True)
class StageGeometry:
    n: int
    h: int
    H: int | None  # None at stage n_max + 1, where ell is not defined
    h_hat: int
    base_width: Fraction
    spacer_levels: int


@dataclass(frozen=True)
class EmbeddingMap:
    n: int
    offsets: tuple[int, ...]


@dataclass(frozen=True)
class ParamSeq:
    """Validated construction parameters for stages ``0..n_max``.

    Heights ``h`` and induced heights ``h_hat`` are computed eagerly for
    stages ``0..n_max + 1`` since in the V_alpha family ``ell_n`` depends
    on ``h_n``.
    """

    n_max: int
    k: tuple[int, ...]
    ell: tuple[int, ...]
    m: tuple[int, ...]
    family: str = "explicit"
    alpha: Fraction | None = None
    m_rule: str | None = None
    bootstrap: tuple[int, int, int] | None = None
    h: tuple[int, ...] = field(default=(), repr=False)
    h_hat: tuple[int, ...] = field(default=(), repr=False)

    @property
    def is_valpha(self) -> bool:
        return self.family == "valpha"

    @property
    def k_is_n_plus_1(self) -> bool:
        """Whether ``k_n = n + 1`` for all ``n >= 1`` (normalizer flag)."""
        return all(self.k[n] == n + 1 for n in range(1, self.n_max + 1))

    @property
    def limit_condition_monotone(self) -> bool:
        """Finite-horizon proxy for ``floor(n^alpha)/m_n -> 0``.

        True when the ratio is nonincreasing over ``1..n_max``.  Only
        meaningful in the V_alpha family; a finite horizon cannot witness a
        limit, so this is reported rather than enforced.
        """
        if not self.is_valpha:
            return True
        ratios = [Fraction(floor_power(n, self.alpha), self.m[n])
                  for n in range(1, self.n_max + 1)]
        return all(b <= a for a, b in zip(ratios, ratios[1:]))

    def floor_n_alpha(self, n: int) -> int:
        if self.alpha is None:
            raise ValueError("floor(n^alpha) requires a V_alpha family")
        return floor_power(n, self.alpha)

    def check_stage(self, n: int, limit: int | None = None) -> None:
        top = self.n_max + 1 if limit is None else limit
        if not 0 <= n <= top:
            raise HorizonError(
                f"insufficient horizon: stage {n} outside 0..{top}")

    def metadata(self) -> dict[str, str]:
        meta = {"family": self.family, "n_max": str(self.n_max)}
        if self.is_valpha:
            meta.update(alpha=str(self.alpha), m_rule=str(self.m_rule),
                        bootstrap=",".join(map(str, self.bootstrap)),
                        bootstrap_note="stage-0 parameters are user supplied",
                        limit_condition_monotone=str(self.limit_condition_monotone))
        if not self.k_is_n_plus_1:
            meta["normalizer_note"] = "k_n != n+1; (n+1)m_n replaced by k_n m_n"
        return meta


def _expand(name: str, value, n_max: int) -> tuple[int, ...]:
    if isinstance(value, int):
        return (value,) * (n_max + 1)
    vals = tuple(int(v) for v in value)
    if len(vals) < n_max + 1:
        raise ValueError(f"{name} needs {n_max + 1} entries, got {len(vals)}")
    return vals[: n_max + 1]


def _validate(k, ell, m) -> None:
    for n, (kn, ln, mn) in enumerate(zip(k, ell, m)):
        if kn < 2:
            raise ValueError(f"k_{n} = {kn} < 2")
        if ln < 0:
            raise ValueError(f"ell_{n} = {ln} < 0")
        if mn < 1:
            raise ValueError(f"m_{n} = {mn} < 1")


def _heights(k, ell, m) -> tuple[tuple[int, ...], tuple[int, ...]]:
    h, h_hat = [1], [1]
    for kn, ln, mn in zip(k, ell, m):
        hn = h[-1]
        h.append(2 * mn * (hn + ln) * (kn - 1) + 2 * mn * hn)
        h_hat.append(kn * mn * h_hat[-1])
    return tuple(h), tuple(h_hat)


def explicit_params(k, ell, m, n_max: int) -> ParamSeq:
    """Explicit family; each of ``k``, ``ell``, ``m`` is a constant or a sequence.

    >>> p = explicit_params(2, 1, 1, n_max=3)
    >>> p.h[:3]
    (1, 6, 26)
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    k = _expand("k", k, n_max)
    ell = _expand("ell", ell, n_max)
    m = _expand("m", m, n_max)
    _validate(k, ell, m)
    h, h_hat = _heights(k, ell, m)
    return ParamSeq(n_max, k, ell, m, "explicit", h=h, h_hat=h_hat)


_RULE = re.compile(r"^\s*n\s*(?:\^|\*\*)\s*(\d+)\s*$")


def _m_value(rule, n: int) -> int:
    if isinstance(rule, str):
        match = _RULE.match(rule)
        if not match:
            raise ValueError(f"unknown m_rule {rule!r}; expected 'n^2', 'n^3', ...")
        return n ** int(match.group(1))
    return int(rule[n])


def valpha_params(alpha, m_rule="n^2", n_max: int = 5,
                  bootstrap: tuple[int, int, int] = (2, 0, 1)) -> ParamSeq:
    """V_alpha family: ``k_n = n+1``, ``ell_n = floor(n^alpha) h_n`` for n >= 1.

    Stage 0 uses ``bootstrap = (k_0, ell_0, m_0)``.  ``m_rule`` is a symbolic
    power rule such as ``"n^2"`` or an explicit list indexed by stage (entry
    0 is ignored).

    >>> p = valpha_params(Fraction(1, 2), "n^2", n_max=5)
    >>> p.k
    (2, 2, 3, 4, 5, 6)
    >>> p.h[3], p.h_hat[3]
    (960, 48)
    """
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha = {alpha} not in (0, 1)")
    if n_max < 1:
        raise ValueError("V_alpha family needs n_max >= 1")
    k0, l0, m0 = (int(v) for v in bootstrap)
    if k0 < 2:
        raise ValueError("bootstrap k_0 must be >= 2")
    k, ell, m = [k0], [l0], [m0]
    h, h_hat = [1], [1]
    for n in range(n_max + 1):
        if n >= 1:
            k.append(n + 1)
            ell.append(floor_power(n, alpha) * h[n])
            m.append(_m_value(m_rule, n))
        _validate(k[n:n + 1], ell[n:n + 1], m[n:n + 1])
        h.append(2 * m[n] * (h[n] + ell[n]) * (k[n] - 1) + 2 * m[n] * h[n])
        h_hat.append(k[n] * m[n] * h_hat[n])
    rule_tag = m_rule if isinstance(m_rule, str) else ",".join(map(str, m_rule))
    return ParamSeq(n_max, tuple(k), tuple(ell), tuple(m), "valpha",
                    alpha=alpha, m_rule=rule_tag, bootstrap=(k0, l0, m0),
                    h=tuple(h), h_hat=tuple(h_hat))


def make_params(family: str = "explicit", **kwargs) -> ParamSeq:
    """Dispatch to :func:`explicit_params` or :func:`valpha_params`."""
    if family == "explicit":
        return explicit_params(**kwargs)
    if family == "valpha":
        return valpha_params(**kwargs)
    raise ValueError(f"unknown family {family!r}")


def geometry(p: ParamSeq, n: int) -> StageGeometry:
    p.check_stage(n)
    H = p.h[n] + p.ell[n] if n <= p.n_max else None
    return StageGeometry(n=n, h=p.h[n], H=H, h_hat=p.h_hat[n],
                         base_width=Fraction(1, p.h_hat[n]),
                         spacer_levels=p.h[n] - p.h_hat[n])


def embedding(p: ParamSeq, n: int) -> EmbeddingMap:
    """Base levels of the ``k_n m_n`` copies of ``C_n`` inside ``C_{n+1}``."""
    p.check_stage(n, p.n_max)
    k, m, h = p.k[n], p.m[n], p.h[n]
    H = h + p.ell[n]
    tall = m * (k - 1)
    offsets = [c * H for c in range(tall)]
    offsets += [tall * H + c * h for c in range(m)]
    return EmbeddingMap(n, tuple(offsets))


def last_offset(p: ParamSeq, n: int) -> int:
    """Base level of the topmost copy of ``C_n`` inside ``C_{n+1}``."""
    k, m, h = p.k[n], p.m[n], p.h[n]
    return m * (k - 1) * (h + p.ell[n]) + (m - 1) * h
