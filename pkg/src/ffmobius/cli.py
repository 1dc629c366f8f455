"""Command-line front end: experiment subcommands, config handling, report
serialization.  Owns no mathematics.

Exit codes: 0 success, 1 an exact identity was violated (the counterexample
is printed), 2 usage, budget, or precision problems.  Every output file
starts with a comment line echoing the fully resolved configuration, and
rerunning with the same seed gives byte-identical output regardless of the
worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import BudgetExceeded, CharacteristicError, IdentityCheckError, PrecisionExceeded
from .fields import parse_field
from .hayes import (
    build_group,
    euler_inverse_check,
    l_polynomial,
    log_deriv_check,
    principal_check,
    rh_check,
)
from .laurent import LaurentSeries, sample_torus
from .polys import Poly, divisor_second_moment, max_tau_report, pnt_check
from .quadform import QuadPhase, hankel_matrix, gauss_mean, isotropic_count, rank_stats
from .correlations import (
    LinearPhase,
    exponent_sweep,
    hankel_corr,
    linear_corr,
    quad_corr,
    type_one_mean_square,
    vaughan_decompose,
    _random_quad_phase,
)
from . import sieve as _sieve

DEFAULTS = {
    "field": "2",
    "budget": 1_200_000,
    "seed": 0,
    "out": None,
    "format": "csv",
    "workers": os.cpu_count() or 1,
    "lmax": 10,
    "nmax": 10,
    "n": 8,
    "l": 0,
    "Q": "1",
    "alpha": "random",
    "beta": "random",
    "domain": "G",
    "u": None,
    "v": None,
    "trials": 1,
    "r": 1,
    "k": 1,
    "h": 0,
    "mode": "exhaustive",
    "samples": 10,
    "experiment": "linear",
    "nmin": 2,
    "config": None,
}


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return format(x, ".12g")
    if isinstance(x, complex):
        return f"{format(x.real, '.12g')}{'+' if x.imag >= 0 else '-'}{format(abs(x.imag), '.12g')}j"
    if x is None:
        return ""
    return str(x)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffmobius", description=__doc__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def add(name, *opts):
        sp = sub.add_parser(name)
        for flag, kind in [
            ("--field", str),
            ("--budget", int),
            ("--seed", int),
            ("--out", str),
            ("--format", str),
            ("--workers", int),
            ("--config", str),
        ] + list(opts):
            sp.add_argument(flag, type=kind, default=None)
        return sp

    add("pnt", ("--lmax", int))
    add("mobius-sums", ("--nmax", int))
    add("divisor-moments", ("--nmax", int))
    add("hayes-lfunc", ("--l", int), ("--Q", str), ("--nmax", int))
    add("rh-check", ("--l", int), ("--Q", str))
    add("euler-check", ("--l", int), ("--Q", str), ("--nmax", int))
    add("principal-check", ("--Q", str), ("--nmax", int))
    add("logderiv-check", ("--l", int), ("--Q", str), ("--lmax", int))
    add("linear-corr", ("--n", int), ("--alpha", str), ("--domain", str))
    add("quad-corr", ("--n", int), ("--trials", int))
    add("hankel-corr", ("--n", int), ("--alpha", str), ("--beta", str), ("--trials", int))
    add("vaughan-audit", ("--n", int), ("--u", int), ("--v", int))
    add("gauss-sums", ("--n", int), ("--trials", int))
    add("isotropic", ("--n", int), ("--r", int), ("--trials", int))
    add("rank-stats", ("--n", int), ("--k", int), ("--h", int), ("--mode", str), ("--samples", int))
    add("exponent-sweep", ("--experiment", str), ("--nmin", int), ("--nmax", int), ("--samples", int))
    return ap


class UsageError(Exception):
    pass


def resolve_config(args: argparse.Namespace) -> dict:
    """Layer builtin defaults, then the config file, then explicit flags."""
    cli = {k: v for k, v in vars(args).items() if k != "subcommand"}
    file_cfg = {}
    cfg_path = cli.get("config")
    if cfg_path:
        with open(cfg_path) as fh:
            file_cfg = json.load(fh)
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    out = {}
    for key in cli:
        if cli[key] is not None:
            out[key] = cli[key]
        elif key in file_cfg:
            out[key] = file_cfg[key]
        else:
            out[key] = DEFAULTS.get(key)
    if out.get("format") not in ("csv", "json"):
        raise UsageError(f"unknown format {out.get('format')!r}")
    if out.get("budget") is None or out["budget"] <= 0:
        raise UsageError("budget must be positive")
    return out


SILENT_KEYS = ("config", "out", "workers")  # do not affect the mathematical content


def header_line(sub: str, cfg: dict) -> str:
    printable = {
        k: v for k, v in sorted(cfg.items()) if k not in SILENT_KEYS and v is not None
    }
    body = " ".join(f"{k}={v}" for k, v in printable.items())
    return f"# ffmobius v{__version__} cmd={sub} {body}"


def write_report(sub: str, cfg: dict, columns: list, rows: list):
    lines = [header_line(sub, cfg)]
    if cfg["format"] == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(x) for x in row])
        lines.append(buf.getvalue().rstrip("\n"))
    else:
        payload = {
            "tool": f"ffmobius v{__version__}",
            "cmd": sub,
            "config": {k: v for k, v in cfg.items() if k not in SILENT_KEYS},
            "columns": columns,
            "rows": [[fmt(x) for x in row] for row in rows],
        }
        lines.append(json.dumps(payload, sort_keys=True))
    text = "\n".join(lines) + "\n"
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_alpha(ctx, text: str, rng, prec: int) -> LaurentSeries:
    if text == "random":
        return sample_torus(ctx, rng, prec)
    if text == "0":
        return LaurentSeries.zero(ctx, prec)
    return LaurentSeries.parse(ctx, text)


# -- runners ---------------------------------------------------------------------


def run_pnt(ctx, cfg, rng):
    rows = []
    for l in range(1, cfg["lmax"] + 1):
        if ctx.q**l > cfg["budget"]:
            break
        s, expected = pnt_check(ctx, l, cfg["budget"])
        if s != expected:
            raise IdentityCheckError(
                "von Mangoldt degree sum misses q^l", counterexample=f"q={ctx.q}, l={l}, sum={s}"
            )
        rows.append((l, s, expected, True))
    return ["l", "lambda_sum", "expected", "ok"], rows


def run_mobius_sums(ctx, cfg, rng):
    rows = []
    nmax = cfg["nmax"]
    for n in range(1, nmax + 1):
        if ctx.q**n > cfg["budget"]:
            break
        sieve = _sieve.get_sieve(ctx, n)
        s = int(sieve.degree_slice(sieve.mu, n).astype(np.int64).sum())
        expected = -ctx.q if n == 1 else 0
        if s != expected:
            raise IdentityCheckError(
                "Mobius column sum off", counterexample=f"q={ctx.q}, n={n}, sum={s}"
            )
        rows.append((n, s, expected, True))
    return ["n", "mu_sum", "expected", "ok"], rows


def run_divisor_moments(ctx, cfg, rng):
    rows = []
    taus = {n: (m, r) for n, m, r in max_tau_report(ctx, min(cfg["nmax"], _budget_deg(ctx, cfg)), cfg["budget"])}
    for n in range(1, cfg["nmax"] + 1):
        if ctx.q**n > cfg["budget"]:
            break
        exact, brute, bound = divisor_second_moment(ctx, n, cfg["budget"])
        if exact != brute or exact > bound:
            raise IdentityCheckError(
                "divisor second moment mismatch",
                counterexample=f"q={ctx.q}, n={n}, series={exact}, brute={brute}",
            )
        mt, ratio = taus[n]
        rows.append(
            (n, exact.numerator, exact.denominator, brute.numerator, brute.denominator, bound, True, mt, ratio)
        )
    return (
        ["n", "mean_num", "mean_den", "brute_num", "brute_den", "bound", "ok", "max_tau", "tau_log_ratio"],
        rows,
    )


def _budget_deg(ctx, cfg) -> int:
    d = 1
    while ctx.q ** (d + 1) <= cfg["budget"]:
        d += 1
    return d


def _group_from_cfg(ctx, cfg):
    Q = Poly.parse(ctx, cfg["Q"])
    return build_group(ctx, cfg["l"], Q, budget=cfg["budget"])


def run_hayes_lfunc(ctx, cfg, rng):
    g = _group_from_cfg(ctx, cfg)
    nmax = cfg["nmax"] if cfg["nmax"] is not None else g.l + g.m + 2
    rows = []
    for char in g.characters():
        if char.is_principal:
            continue
        lp = l_polynomial(char, nmax, budget=cfg["budget"])
        for n, c in enumerate(lp.coeffs):
            rows.append((char.char_id, n, c.real, c.imag, abs(c)))
    return ["lambda_id", "n", "re_cn", "im_cn", "abs_cn"], rows


def run_rh_check(ctx, cfg, rng):
    g = _group_from_cfg(ctx, cfg)
    rows = []
    for char in g.characters():
        if char.is_principal:
            continue
        for root, modulus, label in rh_check(char, budget=cfg["budget"]):
            rows.append((char.char_id, root.real, root.imag, modulus, label))
    return ["lambda_id", "root_re", "root_im", "modulus", "class"], rows


def run_euler_check(ctx, cfg, rng):
    g = _group_from_cfg(ctx, cfg)
    nmax = cfg["nmax"] if cfg["nmax"] is not None else g.l + g.m + 2
    rows = []
    logq = np.log(ctx.q)
    for char in g.characters():
        if char.is_principal:
            continue
        for n, resid, s in euler_inverse_check(char, nmax, budget=cfg["budget"]):
            expo = float(np.log(abs(s)) / (n * logq)) if abs(s) > 0 and n > 0 else None
            rows.append((char.char_id, n, resid, abs(s), expo))
    return ["lambda_id", "n", "residual", "abs_mu_sum", "empirical_exponent"], rows


def run_principal_check(ctx, cfg, rng):
    Q = Poly.parse(ctx, cfg["Q"])
    nmax = cfg["nmax"] if cfg["nmax"] is not None else int(Q.deg) + 4
    rows = [
        (n, enum, series, True)
        for n, enum, series in principal_check(ctx, Q, nmax, budget=cfg["budget"])
    ]
    return ["n", "enum_sum", "series_coeff", "ok"], rows


def run_logderiv_check(ctx, cfg, rng):
    g = _group_from_cfg(ctx, cfg)
    rows = []
    for char in g.characters():
        if char.is_principal:
            continue
        for l, lhs, rhs, resid in log_deriv_check(char, cfg["lmax"], budget=cfg["budget"]):
            rows.append((char.char_id, l, lhs.real, lhs.imag, resid))
    return ["lambda_id", "l", "re_sum", "im_sum", "residual"], rows


def run_linear_corr(ctx, cfg, rng):
    n = cfg["n"]
    alpha = _parse_alpha(ctx, cfg["alpha"], rng, n + 1)
    rep = linear_corr(ctx, n, alpha, cfg["domain"], cfg["budget"], cfg["workers"])
    s = rep.sum(ctx)
    rows = [
        (
            n,
            cfg["domain"],
            rep.phase,
            s.real,
            s.imag,
            rep.abs(ctx),
            rep.empirical_exponent(ctx),
            rep.terms,
            ";".join(map(str, rep.hist)),
        )
    ]
    return ["n", "domain", "phase", "re_sum", "im_sum", "abs", "empirical_exponent", "terms", "hist"], rows


def run_quad_corr(ctx, cfg, rng):
    n = cfg["n"]
    rows = []
    for trial in range(cfg["trials"]):
        qp = _random_quad_phase(ctx, n, rng)
        rep = quad_corr(ctx, n, qp, cfg["budget"], cfg["workers"])
        s = rep.sum(ctx)
        rows.append((trial, n, rep.phase, s.real, s.imag, rep.abs(ctx), rep.empirical_exponent(ctx)))
    return ["trial", "n", "phase", "re_sum", "im_sum", "abs", "empirical_exponent"], rows


def run_hankel_corr(ctx, cfg, rng):
    n = cfg["n"]
    rows = []
    for trial in range(cfg["trials"]):
        alpha = _parse_alpha(ctx, cfg["alpha"], rng, 2 * n + 2)
        beta = _parse_alpha(ctx, cfg["beta"], rng, n + 1)
        rep = hankel_corr(ctx, n, alpha, beta, cfg["budget"], cfg["workers"])
        s = rep.sum(ctx)
        rows.append((trial, n, rep.phase, s.real, s.imag, rep.abs(ctx), rep.empirical_exponent(ctx)))
    return ["trial", "n", "phase", "re_sum", "im_sum", "abs", "empirical_exponent"], rows


def run_vaughan_audit(ctx, cfg, rng):
    n = cfg["n"]
    alpha = sample_torus(ctx, rng, n + 2)
    rep = vaughan_decompose(
        ctx, n, LinearPhase(alpha), cfg["u"], cfg["v"], cfg["budget"], cfg["workers"]
    )
    rows = [
        ("n", n),
        ("u", rep.u),
        ("v", rep.v),
        ("phase", f"linear:{alpha.format()}"),
        ("t1", fmt(rep.t1)),
        ("t2", fmt(rep.t2)),
        ("direct", fmt(rep.direct)),
        ("residual", fmt(rep.residual)),
        ("restricted_residual", fmt(rep.restricted_residual)),
        ("pass_degrees", ";".join(map(str, rep.pass_degrees))),
        ("fail_degrees", ";".join(map(str, rep.fail_degrees))),
        ("pointwise_failures", ";".join(p.format() for p in rep.pointwise_failures)),
        ("coefficient_bound_ok", fmt(rep.coefficient_bound_ok)),
    ]
    for k, ms in type_one_mean_square(
        ctx, n, LinearPhase(alpha), rep.u + rep.v, cfg["budget"], cfg["workers"]
    ):
        rows.append((f"t1_mean_square_k{k}", fmt(ms)))
    return ["item", "value"], rows


def run_gauss_sums(ctx, cfg, rng):
    if ctx.p == 2:
        raise CharacteristicError("gauss-sums requires odd characteristic (p > 2)")
    n = cfg["n"]
    rows = []
    for trial in range(cfg["trials"]):
        qp = _random_quad_phase(ctx, n, rng)
        pure = trial % 2 == 0
        if pure:
            qp = QuadPhase(ctx, qp.M, np.zeros(n, dtype=np.int64), qp.c, qp.r)
        mean = gauss_mean(qp, budget=cfg["budget"])
        bound = float(ctx.q) ** (-qp.effective_rank() / 2)
        rows.append((trial, n, qp.rank(), pure, abs(mean), bound, True))
    return ["trial", "n", "rank", "pure", "abs_mean", "bound", "ok"], rows


def run_isotropic(ctx, cfg, rng):
    n, r = cfg["n"], cfg["r"]
    rows = []
    for trial in range(cfg["trials"]):
        forms = []
        for _ in range(r):
            M = rng.integers(0, ctx.p, size=(n, n))
            M = np.triu(M)
            M = M + np.triu(M, 1).T
            forms.append(M % ctx.p)
        count, bound = isotropic_count(ctx, forms, n, budget=cfg["budget"])
        rows.append((trial, n, r, count, bound, True))
    return ["trial", "n", "r", "count", "bound", "ok"], rows


def run_rank_stats(ctx, cfg, rng):
    n, k, h = cfg["n"], cfg["k"], cfg["h"]
    alpha = sample_torus(ctx, rng, 2 * n + 2)
    M = hankel_matrix(alpha, n)
    rs = rank_stats(
        ctx, M, k, h, mode=cfg["mode"], samples=cfg["samples"], seed=cfg["seed"], budget=cfg["budget"]
    )
    hist = ";".join(f"{r}:{c}" for r, c in rs.histogram.items())
    rows = [
        (k, h, rs.density.numerator, rs.density.denominator, rs.total, rs.mode, alpha.format(), hist)
    ]
    return ["k", "h", "density_num", "density_den", "total", "mode", "alpha", "histogram"], rows


def run_exponent_sweep(ctx, cfg, rng):
    ns = range(cfg["nmin"], cfg["nmax"] + 1)
    rows = exponent_sweep(
        ctx, cfg["experiment"], ns, cfg["samples"], cfg["seed"], cfg["budget"], cfg["workers"]
    )
    return ["n", "samples", "max_abs", "mean_abs", "max_exponent"], rows


RUNNERS = {
    "pnt": run_pnt,
    "mobius-sums": run_mobius_sums,
    "divisor-moments": run_divisor_moments,
    "hayes-lfunc": run_hayes_lfunc,
    "rh-check": run_rh_check,
    "euler-check": run_euler_check,
    "principal-check": run_principal_check,
    "logderiv-check": run_logderiv_check,
    "linear-corr": run_linear_corr,
    "quad-corr": run_quad_corr,
    "hankel-corr": run_hankel_corr,
    "vaughan-audit": run_vaughan_audit,
    "gauss-sums": run_gauss_sums,
    "isotropic": run_isotropic,
    "rank-stats": run_rank_stats,
    "exponent-sweep": run_exponent_sweep,
}


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = resolve_config(args)
        ctx = parse_field(cfg["field"])
        rng = np.random.default_rng(cfg["seed"])
        columns, rows = RUNNERS[args.subcommand](ctx, cfg, rng)
        write_report(args.subcommand, cfg, columns, rows)
        return 0
    except IdentityCheckError as exc:
        print(f"identity violated: {exc}", file=sys.stderr)
        return 1
    except (BudgetExceeded, PrecisionExceeded, CharacteristicError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
