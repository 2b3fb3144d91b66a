"""Command line driver: reads an INI-style config and writes CSV tables.

Exit codes: 0 ok, 1 invariant failure, 2 usage or config error,
3 horizon or memory cap exceeded.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import re
import sys
from fractions import Fraction

import mpmath

from .checks import run_suite
from .construction import HorizonError, ParamSeq, explicit_params, valpha_params
from .correlation import as_beta
from .levelsets import D_set, F_set, LevelSet, parse_levelset, subcolumn_set
from .metrics import beta_row, independence_check, wre_ratio
from .normalizers import DecompositionError, a_hat, a_of_F, b_term, decompose
from .oracle import DEFAULT_CAP, MemoryCapError, build_explicit, dump_tower_csv

COMMANDS = ("geometry", "wre-table", "beta-table", "normalizers", "independence",
            "check", "dump-tower")


class ConfigError(ValueError):
    pass


# -- config --------------------------------------------------------------------

def _ints(text: str) -> list[int]:
    return [int(x) for x in re.split(r"[,\s]+", text.strip()) if x]


def _int_or_list(text: str):
    vals = _ints(text)
    return vals[0] if len(vals) == 1 else vals


def _range(text: str) -> list[int]:
    out = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def load_config(path: str) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            cfg.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not cfg.has_section("family"):
        raise ConfigError("config needs a [family] section")
    return cfg


def params_from_config(cfg: configparser.ConfigParser) -> ParamSeq:
    fam = cfg["family"]
    try:
        mode = fam.get("mode", "explicit").strip()
        n_max = int(fam["n_max"])
        if mode == "explicit":
            return explicit_params(_int_or_list(fam["k"]), _int_or_list(fam["ell"]),
                                   _int_or_list(fam["m"]), n_max)
        if mode == "valpha":
            rule = fam.get("m_rule", "n^2").strip()
            if re.fullmatch(r"[\d,\s]+", rule):
                rule = _ints(rule)
            boot = tuple(_ints(fam.get("bootstrap", "2,0,1")))
            if len(boot) != 3:
                raise ValueError("bootstrap needs three integers k0,ell0,m0")
            return valpha_params(Fraction(fam["alpha"].strip()), rule, n_max, boot)
        raise ValueError(f"unknown mode {mode!r}")
    except KeyError as exc:
        raise ConfigError(f"[family] is missing {exc}") from None
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad [family] section: {exc}") from None


_TERM = re.compile(r"^C(\d+)\((\d+)(?:,(\d+))?\)$")


def parse_set_expr(text: str, p: ParamSeq) -> LevelSet:
    """``F``, ``C<n>(<i>)``, ``C<n>(<i>,<j>)``, ``D<n>`` or a literal, joined by ``&``."""
    result = None
    for term in (t.strip() for t in text.split("&")):
        if term == "F":
            s = F_set(p, 0)
        elif ":" in term:
            s = parse_levelset(term, p)
        elif term.startswith("D") and term[1:].isdigit():
            s = D_set(p, int(term[1:]))
        elif (m := _TERM.match(term.replace(" ", ""))):
            j = int(m.group(3)) if m.group(3) is not None else None
            s = subcolumn_set(p, int(m.group(1)), int(m.group(2)), j)
        else:
            raise ConfigError(f"cannot parse set term {term!r}")
        result = s if result is None else result.intersect(s)
    if result is None:
        raise ConfigError("empty set expression")
    return result


def _experiment(cfg):
    return cfg["experiment"] if cfg.has_section("experiment") else {}


def t_grid(cfg, p: ParamSeq) -> list[int]:
    exp = _experiment(cfg)
    if "t" in exp:
        return sorted(set(_ints(exp["t"])))
    stages = _range(exp.get("stages", f"2-{p.n_max}"))
    qs = _ints(exp.get("q", "1"))
    for n in stages:
        if not 0 <= n <= p.n_max:
            raise HorizonError(f"insufficient horizon: stage {n} > n_max = {p.n_max}")
    return sorted({q * (p.h[n] + p.ell[n]) for n in stages for q in qs})


# -- formatting ----------------------------------------------------------------

def fmt(x, digits: int) -> str:
    if x is None:
        return ""
    if isinstance(x, (Fraction, int)):
        return str(x)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, digits, min_fixed=-math.inf, max_fixed=math.inf) \
            if abs(x) < mpmath.mpf(10) ** 30 else mpmath.nstr(x, digits)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _digits(bits: int) -> int:
    return max(int(bits * math.log10(2)), 1)


def _write(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands ------------------------------------------------------------------

def cmd_geometry(cfg, p, args) -> tuple[str, int]:
    rows = [[n, p.k[n], p.ell[n], p.m[n], p.h[n], p.h[n] + p.ell[n], p.h_hat[n]]
            for n in range(1, p.n_max + 1)]
    return _write(rows, ["n", "k_n", "ell_n", "m_n", "h_n", "H_n", "h_hat_n"]), 0


def cmd_wre_table(cfg, p, args):
    exp = _experiment(cfg)
    A = parse_set_expr(exp.get("A", "F"), p)
    B = parse_set_expr(exp.get("B", "F"), p)
    d = _digits(args.precision)
    rows = []
    for t in t_grid(cfg, p):
        r = wre_ratio(p, A, B, t, args.precision)
        rows.append([r.t, r.n, r.q, r.r, r.case, fmt(r.corr_sum, d), fmt(r.a_t, d),
                     fmt(r.ratio, d), fmt(r.target, d), fmt(r.residual, d)])
    header = ["t", "n", "q", "r", "case", "corr_sum", "a_t", "ratio", "target", "residual"]
    return _write(rows, header), 0


def cmd_beta_table(cfg, p, args):
    exp = _experiment(cfg)
    betas = [as_beta(b) for b in exp.get("beta", "3").split(",") if b.strip()]
    stages = _range(exp.get("stages", f"2-{p.n_max}"))
    d = _digits(args.precision)
    rows = []
    for n in stages:
        if n > p.n_max:
            raise HorizonError(f"insufficient horizon: stage {n} > n_max")
        for beta in betas:
            r = beta_row(p, n, beta, args.precision)
            rows.append([n, r.t, fmt(beta, d), fmt(r.numerator, d), fmt(r.denominator, d),
                         fmt(r.R, d), fmt(r.R_exact, d),
                         "" if r.ratio_bound is None else repr(r.ratio_bound)])
    header = ["n", "t", "beta", "numerator", "denominator", "R", "R_exact", "ratio_bound"]
    return _write(rows, header), 0


def cmd_normalizers(cfg, p, args):
    F = F_set(p, 0)
    rows = []
    for t in t_grid(cfg, p):
        dc = decompose(p, t)
        rows.append([t, dc.n, dc.q, dc.r, dc.case, fmt(dc.q1, 0), fmt(dc.r1, 0),
                     fmt(dc.q2, 0), fmt(dc.r2, 0), a_hat(p, t), a_of_F(F, t),
                     b_term(p, dc.n, t)])
    header = ["t", "n", "q", "r", "case", "q1", "r1", "q2", "r2", "a_hat", "a_of_F", "b_term"]
    return _write(rows, header), 0


def cmd_independence(cfg, p, args):
    exp = _experiment(cfg)
    N = int(exp.get("N", "1"))
    stages = _range(exp.get("stages", f"{N + 1}-{p.n_max}"))
    rows = []
    for a in stages:
        for b in stages:
            if a < b:
                r = independence_check(p, N, a, b)
                rows.append([N, a, b, r.mu_En, r.mu_En2, r.mu_joint, r.product,
                             int(r.independent)])
    header = ["N", "n", "n2", "mu_En", "mu_En2", "mu_joint", "product", "independent"]
    return _write(rows, header), 0 if all(r[-1] for r in rows) else 1


def cmd_check(cfg, p, args):
    exp = _experiment(cfg)
    cases = int(exp.get("cases", "60"))
    rows = run_suite(p, seed=args.seed, cases=cases, memory_cap=args.memory_cap)
    out = _write([[r.check, r.case, "pass" if r.passed else "FAIL", r.detail] for r in rows],
                 ["check", "case", "status", "detail"])
    return out, 0 if all(r.passed for r in rows) else 1


def cmd_dump_tower(cfg, p, args):
    stage = args.stage
    if stage is None:
        stage = int(_experiment(cfg).get("stage", "1"))
    tower = build_explicit(p, stage, args.memory_cap)
    return dump_tower_csv(tower), 0


HANDLERS = {
    "geometry": cmd_geometry,
    "wre-table": cmd_wre_table,
    "beta-table": cmd_beta_table,
    "normalizers": cmd_normalizers,
    "independence": cmd_independence,
    "check": cmd_check,
    "dump-tower": cmd_dump_tower,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cutstack", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="INI config with a [family] section")
    ap.add_argument("--out", help="output CSV path (default: [output] path or stdout)")
    ap.add_argument("--precision", type=int, default=None, help="float precision in bits (>= 64)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--memory-cap", type=int, default=DEFAULT_CAP, dest="memory_cap")
    ap.add_argument("--stage", type=int, default=None, help="stage for dump-tower")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = load_config(args.config)
        p = params_from_config(cfg)
        out_cfg = cfg["output"] if cfg.has_section("output") else {}
        if args.precision is None:
            args.precision = int(out_cfg.get("precision", "64"))
        if args.precision < 64:
            raise ConfigError("precision must be at least 64 bits")
        text, code = HANDLERS[args.command](cfg, p, args)
    except (ConfigError, DecompositionError) as exc:
        print(f"cutstack: {exc}", file=sys.stderr)
        return 2
    except (HorizonError, MemoryCapError) as exc:
        print(f"cutstack: {exc}", file=sys.stderr)
        return 3
    except (ValueError, IndexError) as exc:
        print(f"cutstack: {exc}", file=sys.stderr)
        return 2
    path = args.out or out_cfg.get("path")
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
        with open(path + ".meta.json", "w") as fh:
            json.dump(p.metadata(), fh, indent=1, sort_keys=True)
    else:
        sys.stdout.write(text)
        for key, val in sorted(p.metadata().items()):
            print(f"# {key}={val}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
