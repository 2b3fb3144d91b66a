"""Brute-force ground truth: literal cut-and-stack simulation.

Each column is materialised level by level.  Building ``C_{n+1}`` repeats
the physical procedure: cut ``C_n`` into ``k_n`` subcolumns, put ``ell_n``
spacers on the first ``k_n - 1``, stack those, cut the result and the last
subcolumn into ``m_n`` pieces each, stack, put the short stack on the tall
one and add as many spacers again.  No offset arithmetic from
:mod:`cutstack.construction` is used, and all measures come from direct
counting over boolean masks.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .construction import ParamSeq

__all__ = [
    "MemoryCapError",
    "ExplicitTower",
    "build_explicit",
    "oracle_corr",
    "oracle_corr_profile",
    "oracle_corr_sum",
    "oracle_birkhoff",
    "dump_tower_csv",
]

DEFAULT_CAP = 10 ** 7

COPY, ELL_SPACER, TOP_SPACER = 0, 1, 2


class MemoryCapError(RuntimeError):
    """Explicit tower would exceed the configured level cap."""


@dataclass(frozen=True, eq=False)
class ExplicitTower:
    """Column ``C_n`` as explicit arrays indexed by level.

    ``parent[j]`` is the level of ``C_{n-1}`` copied into level ``j`` (``-1``
    for a spacer); ``kind``, ``sub_i``, ``sub_j`` record which piece
    ``C_{n-1}(i, j)`` or spacer batch the level belongs to.
    """

    n: int
    original: np.ndarray
    parent: np.ndarray
    kind: np.ndarray
    sub_i: np.ndarray
    sub_j: np.ndarray
    previous: "ExplicitTower | None"

    @property
    def height(self) -> int:
        return int(self.original.size)

    @property
    def n_original(self) -> int:
        return int(self.original.sum())

    def tower(self, n: int) -> "ExplicitTower":
        t = self
        while t.n > n:
            t = t.previous
        if t.n != n:
            raise ValueError(f"stage {n} not in this chain")
        return t

    def transport(self, mask: np.ndarray, from_stage: int) -> np.ndarray:
        """Carry a level mask of ``C_from_stage`` up to this column."""
        if from_stage == self.n:
            return mask
        below = self.previous.transport(mask, from_stage)
        return (self.parent >= 0) & below[np.maximum(self.parent, 0)]

    def subcolumn_mask(self, i: int, j: int | None = None) -> np.ndarray:
        """Levels of this column that came from ``C_{n-1}(i)`` (or ``(i, j)``)."""
        mask = (self.kind == COPY) & (self.sub_i == i)
        if j is not None:
            mask &= self.sub_j == j
        return mask


def build_explicit(p: ParamSeq, n: int, memory_cap: int = DEFAULT_CAP) -> ExplicitTower:
    """Simulate the construction up to column ``C_n``."""
    if n > p.n_max + 1:
        raise ValueError(f"stage {n} beyond n_max + 1")
    tower = ExplicitTower(0, np.ones(1, bool), np.full(1, -1), np.zeros(1, np.int8),
                          np.full(1, -1), np.full(1, -1), None)
    for s in range(n):
        tower = _stack(p.k[s], p.ell[s], p.m[s], tower, memory_cap)
    return tower


def _stack(k: int, ell: int, m: int, col: ExplicitTower, cap: int) -> ExplicitTower:
    h = col.height
    # each piece is a list of (parent, kind, sub_i, sub_j) column arrays
    def piece(i, j):
        return (np.arange(h), np.full(h, COPY, np.int8), np.full(h, i), np.full(h, j))

    def spacers(count, kind, i=-1, j=-1):
        return (np.full(count, -1), np.full(count, kind, np.int8),
                np.full(count, i), np.full(count, j))

    def stack(parts):
        return tuple(np.concatenate([pt[c] for pt in parts]) if parts
                     else np.zeros(0, np.int64) for c in range(4))

    # cutting a column into m pieces and stacking them left to right puts
    # the j-th vertical slice of every level on top of the (j-1)-th
    tall_pieces = []
    for j in range(m):
        for i in range(k - 1):
            tall_pieces.append(piece(i, j))
            tall_pieces.append(spacers(ell, ELL_SPACER, i, j))
    short_pieces = [piece(k - 1, j) for j in range(m)]
    body = stack(tall_pieces + short_pieces)
    total = 2 * body[0].size
    if total > cap:
        raise MemoryCapError(f"column of height {total} exceeds cap {cap}")
    parent, kind, sub_i, sub_j = stack([body, spacers(body[0].size, TOP_SPACER)])
    original = (parent >= 0) & col.original[np.maximum(parent, 0)]
    return ExplicitTower(col.n + 1, original, parent, kind, sub_i, sub_j, col)


def _mask(tower: ExplicitTower, levels) -> np.ndarray:
    if isinstance(levels, np.ndarray) and levels.dtype == bool:
        return levels
    mask = np.zeros(tower.height, bool)
    mask[np.asarray(list(levels) if not isinstance(levels, np.ndarray) else levels,
                    dtype=np.int64)] = True
    return mask


def oracle_corr(tower: ExplicitTower, A, B, i: int) -> Fraction:
    """``|A & (B + i)| / h_hat`` by enumeration; ``A``, ``B`` are level lists or masks."""
    a, b = _mask(tower, A), _mask(tower, B)
    h = tower.height
    top = np.flatnonzero(b)
    if top.size and top[-1] + i >= h:
        raise ValueError(f"shift {i} unsafe at stage {tower.n}")
    hits = int(np.count_nonzero(a[i:] & b[: h - i])) if i < h else 0
    return Fraction(hits, tower.n_original)


def oracle_corr_profile(tower: ExplicitTower, A, B) -> tuple[np.ndarray, int]:
    """Counts ``|A & (B + i)|`` for every safe ``i`` and the number of safe shifts."""
    a, b = _mask(tower, A), _mask(tower, B)
    h = tower.height
    top = np.flatnonzero(b)
    n_safe = h - (int(top[-1]) + 1) if top.size else h
    counts = np.array([np.count_nonzero(a[i:] & b[: h - i]) for i in range(n_safe)],
                      dtype=np.int64)
    return counts, n_safe


def oracle_corr_sum(tower: ExplicitTower, A, B, t: int) -> Fraction:
    return sum((oracle_corr(tower, A, B, i) for i in range(t)), Fraction(0))


def oracle_birkhoff(tower: ExplicitTower, base, t: int) -> dict[int, Fraction]:
    """Histogram of visit counts to ``F`` over ``base`` by direct counting."""
    b = _mask(tower, base)
    f = tower.original.astype(np.int64)
    cum = np.concatenate(([0], np.cumsum(f)))
    out: dict[int, int] = {}
    for j in np.flatnonzero(b):
        if j + t > tower.height:
            raise ValueError(f"window {t} unsafe at level {j}")
        v = int(cum[j + t] - cum[j])
        out[v] = out.get(v, 0) + 1
    return {v: Fraction(c, tower.n_original) for v, c in sorted(out.items())}


def _provenance(tower: ExplicitTower, j: int) -> str:
    if tower.n == 0:
        return "I0"
    kind = int(tower.kind[j])
    tag = f"C{tower.n - 1}({int(tower.sub_i[j])},{int(tower.sub_j[j])})"
    if kind == COPY:
        return f"{tag}[{int(tower.parent[j])}]"
    if kind == ELL_SPACER:
        return f"spacer:{tag}"
    return "spacer:top"


def dump_tower_csv(tower: ExplicitTower, out=None) -> str:
    """CSV rows ``level_index,role,provenance``."""
    buf = io.StringIO() if out is None else out
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["level_index", "role", "provenance"])
    for j in range(tower.height):
        role = "original" if tower.original[j] else "spacer"
        writer.writerow([j, role, _provenance(tower, j)])
    return buf.getvalue() if out is None else ""
