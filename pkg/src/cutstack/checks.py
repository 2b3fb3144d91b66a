"""Invariant suite run by ``cutstack check``.

Every check compares the run-list engine with the explicit tower or with an
exact identity.  Random cases come from one seeded generator so a given
seed always produces the same rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .construction import ParamSeq
from .correlation import birkhoff_hist, corr, corr_sum
from .levelsets import D_set, F_set, LevelSet, subcolumn_set
from .metrics import holder_check, independence_check
from .oracle import DEFAULT_CAP, build_explicit, oracle_corr_profile

__all__ = ["CheckRow", "random_subset", "named_sets", "run_suite"]


@dataclass(frozen=True)
class CheckRow:
    check: str
    case: str
    passed: bool
    detail: str = ""


def random_subset(p: ParamSeq, stage: int, rng: np.random.Generator,
                  max_runs: int = 6) -> LevelSet:
    """Random union of up to ``max_runs`` runs in the lower half of ``C_stage``."""
    top = max(p.h[stage] // 2, 1)
    cuts = np.sort(rng.choice(top + 1, size=min(2 * max_runs, top + 1), replace=False))
    pairs = cuts[: len(cuts) // 2 * 2].reshape(-1, 2)
    keep = pairs[rng.random(len(pairs)) < 0.7]
    return LevelSet.from_runs(p, stage, [(int(a), int(b)) for a, b in keep])


def named_sets(p: ParamSeq, stage: int) -> dict[str, LevelSet]:
    """``F``, every subcolumn ``C_n(i)`` and ``D_n`` that live at or below ``stage``."""
    out = {"F": F_set(p, 0)}
    for n in range(0, min(stage, p.n_max + 1)):
        for i in range(p.k[n]):
            out[f"C{n}({i})"] = subcolumn_set(p, n, i)
        if p.is_valpha and n >= 1:
            out[f"D{n}"] = D_set(p, n)
    return out


def oracle_stage(p: ParamSeq, memory_cap: int = DEFAULT_CAP, limit: int = 3) -> int:
    s = 0
    while s + 1 <= min(p.n_max + 1, limit) and p.h[s + 1] <= memory_cap:
        s += 1
    return s


def _oracle_mask(tower, s: LevelSet) -> np.ndarray:
    mask = np.zeros(tower.height, bool)
    mask[s.refine(tower.n).levels()] = True
    return mask


def run_suite(p: ParamSeq, seed: int = 0, cases: int = 60,
              memory_cap: int = DEFAULT_CAP) -> list[CheckRow]:
    rng = np.random.default_rng(seed)
    rows: list[CheckRow] = []
    s = oracle_stage(p, memory_cap)
    tower = build_explicit(p, s, memory_cap)

    # conservation
    for n in range(0, s + 1):
        F = F_set(p, n)
        ok = F.measure == 1 and tower.tower(n).n_original == p.h_hat[n]
        ok &= np.array_equal(np.flatnonzero(tower.tower(n).original), F.levels())
        rows.append(CheckRow("conservation", f"n={n}", bool(ok), f"mu(F)={F.measure}"))

    # oracle equivalence
    pool = list(named_sets(p, s).items())
    pool += [(f"rand{j}", random_subset(p, s, rng)) for j in range(max(cases // 4, 1))]
    for j in range(cases):
        (na, A), (nb, B) = pool[rng.integers(len(pool))], pool[rng.integers(len(pool))]
        counts, n_safe = oracle_corr_profile(tower, _oracle_mask(tower, A), _oracle_mask(tower, B))
        if n_safe == 0:
            continue
        i = int(rng.integers(n_safe))
        t = int(rng.integers(n_safe + 1))
        want_i = Fraction(int(counts[i]), p.h_hat[s])
        want_t = Fraction(int(counts[:t].sum()), p.h_hat[s])
        got_i, got_t = corr(A, B, i), corr_sum(A, B, t)
        ok = got_i == want_i and got_t == want_t
        if ok and B.max_level_at(s) is not None:
            # stage independence: same query one stage finer
            if s + 1 <= p.n_max + 1:
                ok = corr(A, B, i, stage=s + 1) == got_i
        rows.append(CheckRow("oracle", f"{na}|{nb}|i={i}|t={t}", ok,
                             f"corr={got_i} corr_sum={got_t}"))

    # Fubini and Hoelder on subsets of F
    F = F_set(p, 0)
    bases = [("F", F)] + [(f"F&{na}", F.intersect(S)) for na, S in pool if na != "F"]
    for j in range(cases):
        nb, base = bases[rng.integers(len(bases))]
        top = base.max_level_at(s)
        if top is None:
            continue
        t = int(rng.integers(1, p.h[s] - top))
        hist = birkhoff_hist(base, t)
        ok = hist.integral() == corr_sum(F, base, t) and hist.total_measure == base.measure
        rows.append(CheckRow("fubini", f"{nb}|t={t}", ok, f"integral={hist.integral()}"))
        for beta in (2, 3, 4):
            res = holder_check(base, t, beta)
            ok = res.ok and ((res.slack == 0) == hist.is_atom())
            rows.append(CheckRow("holder", f"{nb}|t={t}|beta={beta}", ok, f"slack={res.slack}"))

    # independence
    if p.n_max >= 3:
        for n in range(2, p.n_max + 1):
            for n2 in range(n + 1, min(p.n_max, 4) + 1):
                rep = independence_check(p, 1, n, n2)
                ok = rep.independent and rep.mu_En == Fraction(1, p.k[n])
                rows.append(CheckRow("independence", f"N=1|n={n}|n'={n2}", ok,
                                     f"joint={rep.mu_joint} product={rep.product}"))
    return rows
