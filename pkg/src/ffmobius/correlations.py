"""Mobius correlation sums with linear, quadratic and Hankel phases.

Every sum is accumulated as an integer histogram of omega_p exponents
(signed by mu), so results are exact, order independent, and merge across
enumeration chunks by plain vector addition; the complex value is a single
dot product taken at the end.  Phases know how to evaluate themselves on a
block of coefficient vectors and how to compose with a dilation w -> d w,
which is what the Vaughan type I / type II decomposition needs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import log

import numpy as np

from .errors import (
    BudgetExceeded,
    CharacteristicError,
    IdentityCheckError,
    PrecisionExceeded,
)
from .fields import FieldCtx
from .hayes import class_of
from .laurent import LaurentSeries, dirichlet_approx, sample_torus
from .polys import Poly
from .quadform import QuadPhase, hankel_matrix, quad_exponents
from . import sieve as _sieve

__all__ = [
    "LinearPhase",
    "QuadraticPhase",
    "HankelPhase",
    "CorrelationReport",
    "VaughanReport",
    "linear_corr",
    "quad_corr",
    "hankel_corr",
    "linear_reduction_hists",
    "periodic_corr",
    "periodic_route_check",
    "vaughan_pointwise_audit",
    "vaughan_decompose",
    "type_one_mean_square",
    "exponent_sweep",
]

CHUNK = 1 << 15


# -- phases --------------------------------------------------------------------


class LinearPhase:
    """Phi(f) = e(alpha f)."""

    def __init__(self, alpha: LaurentSeries):
        self.alpha = alpha
        self.ctx = alpha.ctx

    def require_prec(self, ncoords: int):
        if self.alpha.prec < ncoords:
            raise PrecisionExceeded(
                f"linear phase needs precision >= {ncoords}, have {self.alpha.prec}"
            )

    def exponents(self, ncoords: int, codes: np.ndarray) -> np.ndarray:
        ctx, q = self.ctx, self.ctx.q
        self.require_prec(ncoords)
        acc = np.zeros(len(codes), dtype=np.int64)
        for i in range(ncoords):
            a = self.alpha.coefficient(-1 - i)
            if a:
                tab = ctx.TRACE[ctx.MUL[a]]
                acc += tab[(codes // q**i) % q]
        return acc % ctx.p

    def compose_dilation(self, d: Poly):
        return LinearPhase(self.alpha.mul_poly(d))

    def descriptor(self) -> str:
        return f"linear:{self.alpha.format()}"


class QuadraticPhase:
    """Phi(f) = chi_r(Q(f)) for a quadratic polynomial in the coefficients."""

    def __init__(self, qp: QuadPhase):
        self.qp = qp
        self.ctx = qp.ctx

    def require_prec(self, ncoords: int):
        if ncoords != self.qp.n:
            raise ValueError(
                f"phase is on {self.qp.n} coordinates, asked for {ncoords}"
            )

    def exponents(self, ncoords: int, codes: np.ndarray) -> np.ndarray:
        self.require_prec(ncoords)
        return quad_exponents(self.qp, codes)

    def compose_dilation(self, d: Poly):
        from .quadform import dilation_matrix, fq_matmul

        ctx = self.ctx
        n = self.qp.n
        k = max(int(d.deg), 0) if not d.is_zero() else 0
        L = dilation_matrix(ctx, d, n, k)
        M2 = fq_matmul(ctx, L.T, fq_matmul(ctx, self.qp.M, L))
        b2 = fq_matmul(ctx, self.qp.b[None, :], L)[0]
        return QuadraticPhase(QuadPhase(ctx, M2, b2, self.qp.c, self.qp.r))

    def descriptor(self) -> str:
        return f"quadratic:{self.qp.describe()}"


class HankelPhase:
    """Phi(f) = e(alpha f^2 + beta f), evaluated by squaring f.

    beta = None means an exactly zero linear part."""

    def __init__(self, alpha: LaurentSeries, beta: LaurentSeries | None = None):
        self.alpha = alpha
        self.ctx = alpha.ctx
        self.beta = beta

    def require_prec(self, ncoords: int):
        need_a = 2 * ncoords - 1
        if self.alpha.prec < need_a:
            raise PrecisionExceeded(
                f"hankel phase needs alpha precision >= {need_a}, have {self.alpha.prec}"
            )
        if self.beta is not None and self.beta.prec < ncoords:
            raise PrecisionExceeded(
                f"hankel phase needs beta precision >= {ncoords}, have {self.beta.prec}"
            )

    def exponents(self, ncoords: int, codes: np.ndarray) -> np.ndarray:
        ctx, q, p = self.ctx, self.ctx.q, self.ctx.p
        self.require_prec(ncoords)
        X = _sieve.codes_to_digits(ctx, codes, ncoords)
        wid = 2 * ncoords - 1
        # digits of f^2 by convolution of f with itself
        if ctx.s == 1:
            S = np.zeros((len(codes), wid), dtype=np.int64)
            for i in range(ncoords):
                xi = X[:, i].astype(np.int64)
                S[:, 2 * i] += xi * xi
                for j in range(i + 1, ncoords):
                    S[:, i + j] += 2 * xi * X[:, j]
            S %= p
        else:
            S = np.zeros((len(codes), wid), dtype=np.int16)
            for i in range(ncoords):
                prod = ctx.MUL[X[:, i], X[:, i]]
                S[:, 2 * i] = ctx.ADD[S[:, 2 * i], prod]
                if p != 2:
                    for j in range(i + 1, ncoords):
                        cross = ctx.MUL[X[:, i], X[:, j]]
                        two = ctx.ADD[cross, cross]
                        S[:, i + j] = ctx.ADD[S[:, i + j], two]
        acc = np.zeros(len(codes), dtype=np.int64)
        for k in range(wid):
            a = self.alpha.coefficient(-1 - k)
            if a:
                acc += ctx.TRACE[ctx.MUL[a]][S[:, k]]
        if self.beta is not None:
            for i in range(ncoords):
                b = self.beta.coefficient(-1 - i)
                if b:
                    acc += ctx.TRACE[ctx.MUL[b]][X[:, i]]
        return acc % p

    def compose_dilation(self, d: Poly):
        d2 = d * d
        beta = None if self.beta is None else self.beta.mul_poly(d)
        return HankelPhase(self.alpha.mul_poly(d2), beta)

    def descriptor(self) -> str:
        bfmt = self.beta.format() if self.beta is not None else "0"
        return f"hankel:{self.alpha.format()}|{bfmt}"


# -- histogram kernel -----------------------------------------------------------


def phase_hist(
    ctx: FieldCtx,
    phase,
    ncoords: int,
    lo: int,
    hi: int,
    weights: np.ndarray | None = None,
    workers: int = 1,
) -> np.ndarray:
    """Signed exponent histogram sum_{code in [lo, hi)} w(code) at the
    phase exponent of code.  weights is indexed by code; None means
    weight 1.  Deterministic for any worker count."""
    p = ctx.p

    def one_chunk(a: int, b: int) -> np.ndarray:
        codes = np.arange(a, b, dtype=np.int64)
        exps = phase.exponents(ncoords, codes)
        h = np.zeros(p, dtype=np.int64)
        if weights is None:
            np.add.at(h, exps, 1)
        else:
            w = weights[a:b]
            np.add.at(h, exps, w.astype(np.int64))
        return h

    spans = [(a, min(a + CHUNK, hi)) for a in range(lo, hi, CHUNK)]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hists = list(pool.map(lambda ab: one_chunk(*ab), spans))
    else:
        hists = [one_chunk(a, b) for a, b in spans]
    out = np.zeros(p, dtype=np.int64)
    for h in hists:
        out += h
    return out


def hist_to_complex(ctx: FieldCtx, hist: np.ndarray) -> complex:
    p = ctx.p
    if p == 2:
        return complex(int(hist[0]) - int(hist[1]))
    return complex(hist @ np.exp(2j * np.pi * np.arange(p) / p))


# -- reports ---------------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationReport:
    q: int
    n: int
    kind: str
    phase: str
    hist: tuple
    terms: int

    def sum(self, ctx: FieldCtx) -> complex:
        return hist_to_complex(ctx, np.array(self.hist, dtype=np.int64))

    def abs(self, ctx: FieldCtx) -> float:
        return abs(self.sum(ctx))

    def empirical_exponent(self, ctx: FieldCtx):
        a = self.abs(ctx)
        if a <= 0 or self.n == 0:
            return None
        return log(a) / (self.n * log(self.q))


def _report(ctx, n, kind, phase, hist) -> CorrelationReport:
    return CorrelationReport(
        q=ctx.q,
        n=n,
        kind=kind,
        phase=phase.descriptor(),
        hist=tuple(int(x) for x in hist),
        terms=ctx.q**n,
    )


# -- the three headline sums -----------------------------------------------------


def linear_corr(
    ctx: FieldCtx,
    n: int,
    alpha: LaurentSeries,
    domain: str = "G",
    budget: int = 1_200_000,
    workers: int = 1,
) -> CorrelationReport:
    """sum of mu(f) e(alpha f) over A_n or G_n."""
    q = ctx.q
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "correlation sweep")
    phase = LinearPhase(alpha)
    if domain == "G":
        mu = _sieve.mobius_over_g(ctx, n)
        hist = phase_hist(ctx, phase, n, 0, q**n, mu, workers)
    elif domain == "A":
        sieve = _sieve.get_sieve(ctx, max(n, 1))
        hist = phase_hist(ctx, phase, n + 1, q**n, 2 * q**n, sieve.mu, workers)
    else:
        raise ValueError("domain must be 'A' or 'G'")
    return _report(ctx, n, f"linear/{domain}", phase, hist)


def quad_corr(
    ctx: FieldCtx,
    n: int,
    qp: QuadPhase,
    budget: int = 1_200_000,
    workers: int = 1,
) -> CorrelationReport:
    """sum of mu(f) chi_r(Q(f)) over G_n; odd characteristic only."""
    if ctx.p == 2:
        raise CharacteristicError(
            "quadratic correlations require odd characteristic (p > 2)"
        )
    q = ctx.q
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "correlation sweep")
    if qp.n != n:
        raise ValueError("phase dimension must equal n")
    phase = QuadraticPhase(qp)
    mu = _sieve.mobius_over_g(ctx, n)
    hist = phase_hist(ctx, phase, n, 0, q**n, mu, workers)
    return _report(ctx, n, "quadratic", phase, hist)


def hankel_corr(
    ctx: FieldCtx,
    n: int,
    alpha: LaurentSeries,
    beta: LaurentSeries | None = None,
    budget: int = 1_200_000,
    workers: int = 1,
    cross_check: bool = True,
    tol: float = 1e-9,
) -> CorrelationReport:
    """sum of mu(f) e(alpha f^2 + beta f) over G_n, by explicit squaring.

    In odd characteristic the result is cross-validated against the
    quadratic route through the Hankel matrix of alpha; the two exponent
    histograms must agree bin by bin.
    """
    q = ctx.q
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "correlation sweep")
    phase = HankelPhase(alpha, beta)
    mu = _sieve.mobius_over_g(ctx, n)
    hist = phase_hist(ctx, phase, n, 0, q**n, mu, workers)
    report = _report(ctx, n, "hankel", phase, hist)
    if cross_check and ctx.p != 2:
        M = hankel_matrix(alpha, n)
        b = np.array(
            [beta.coefficient(-1 - i) if beta is not None else 0 for i in range(n)],
            dtype=np.int64,
        )
        qp = QuadPhase(ctx, M, b, 0, 1)
        hist2 = phase_hist(ctx, QuadraticPhase(qp), n, 0, q**n, mu, workers)
        s1, s2 = hist_to_complex(ctx, hist), hist_to_complex(ctx, hist2)
        if not np.array_equal(hist, hist2) and abs(s1 - s2) > tol:
            raise IdentityCheckError(
                "hankel and quadratic routes disagree",
                counterexample=f"n={n}, alpha={alpha.format()}, |diff|={abs(s1 - s2):.3g}",
            )
    return report


def linear_reduction_hists(ctx: FieldCtx, n: int, alpha: LaurentSeries, budget=1_200_000):
    """The G_n histogram and its reconstruction from A_k sums with alpha
    scaled by each unit; the two must be equal as integer vectors."""
    histG = np.array(linear_corr(ctx, n, alpha, "G", budget).hist, dtype=np.int64)
    acc = np.zeros(ctx.p, dtype=np.int64)
    for c in ctx.units():
        scaled = alpha.scale(c)
        for k in range(n):
            acc += np.array(
                linear_corr(ctx, k, scaled, "A", budget).hist, dtype=np.int64
            )
    return histG, acc


# -- periodic-function route ------------------------------------------------------


def periodic_corr(ctx: FieldCtx, n: int, l: int, Q: Poly, F, budget: int = 1_200_000):
    """sum over f in A_n of F(class of f) mu(f) for a function F given on
    the classes mod (l, Q); F is a dict keyed by HayesClass (complete over
    the classes met in A_n) or a callable on classes."""
    q = ctx.q
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "A_n sweep")
    sieve = _sieve.get_sieve(ctx, max(n, 1))
    lookup = F if callable(F) else F.__getitem__
    total = 0j
    for j in range(q**n):
        code = q**n + j
        m = int(sieve.mu[code])
        if not m:
            continue
        cls = class_of(Poly.from_code(ctx, code), l, Q)
        try:
            total += m * lookup(cls)
        except KeyError:
            raise ValueError(f"periodic table is missing the class {cls}") from None
    return total


def periodic_route_check(
    ctx: FieldCtx,
    n: int,
    alpha: LaurentSeries,
    budget: int = 1_200_000,
    tol: float = 1e-9,
):
    """Dirichlet-approximate alpha, audit that e(alpha f) only depends on the
    class of f mod (l, g) with l = n - floor(n/2) - deg g, then compare the
    periodic-function route against the direct linear sum.

    Returns (direct sum, periodic sum, l, g)."""
    ra = dirichlet_approx(alpha, n)
    g = ra.g
    l = n - n // 2 - int(g.deg)
    q = ctx.q
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "A_n sweep")
    phase = LinearPhase(alpha)
    table: dict = {}
    for j in range(q**n):
        f = Poly.from_code(ctx, q**n + j)
        cls = class_of(f, l, g)
        e = int(phase.exponents(n + 1, np.array([q**n + j], dtype=np.int64))[0])
        if cls in table and table[cls] != e:
            raise IdentityCheckError(
                "e(alpha f) is not constant on classes mod (l, g)",
                counterexample=f"alpha={alpha.format()}, f={f!r}, l={l}, g={g!r}",
            )
        table[cls] = e
    omega = np.exp(2j * np.pi / ctx.p)
    F = {cls: omega**e for cls, e in table.items()}
    periodic = periodic_corr(ctx, n, l, g, F, budget)
    direct = linear_corr(ctx, n, alpha, "A", budget).sum(ctx)
    if abs(direct - periodic) > tol:
        raise IdentityCheckError(
            "periodic route disagrees with the direct sum",
            counterexample=f"alpha={alpha.format()}, direct={direct}, periodic={periodic}",
        )
    return direct, periodic, l, g


# -- Vaughan decomposition ---------------------------------------------------------


@dataclass(frozen=True)
class VaughanAudit:
    u: int
    v: int
    max_deg: int
    fail_degrees: tuple  # degrees with at least one pointwise failure
    failures: tuple  # offending monic polynomials (possibly truncated)
    failure_count: int


_AUDIT_ARRAYS: dict[tuple, dict] = {}


def _audit_arrays(ctx: FieldCtx, D: int) -> dict:
    """Shared convolution arrays over monic codes of degree <= D.

    ones * mu, mu * mu and ones * (mu * mu) are computed by honest pairwise
    enumeration (no Mobius-inversion shortcuts), once per (field, D)."""
    key = (ctx, D)
    if key not in _AUDIT_ARRAYS:
        q = ctx.q
        sieve = _sieve.get_sieve(ctx, D)
        size = 2 * q**D
        mu = sieve.mu.astype(np.int64)[:size]
        ones = np.zeros(size, dtype=np.int64)
        for d in range(D + 1):
            ones[q**d : 2 * q**d] = 1
        full_s = _sieve.convolve_monic(ctx, D, ones, mu)  # sum of mu over divisors
        c2 = _sieve.convolve_monic(ctx, D, mu, mu)  # mu * mu
        f3 = _sieve.convolve_monic(ctx, D, ones, c2)  # mu * mu * 1
        _AUDIT_ARRAYS[key] = {"mu": mu, "ones": ones, "full_s": full_s, "c2": c2, "f3": f3}
    return _AUDIT_ARRAYS[key]


def _mu_truncated(ctx, mu, D, cutoff, above: bool):
    out = np.zeros_like(mu)
    q = ctx.q
    for d in range(D + 1):
        if (d > cutoff) == above:
            out[q**d : 2 * q**d] = mu[q**d : 2 * q**d]
    return out


def vaughan_rhs_arrays(ctx: FieldCtx, D: int, u: int, v: int):
    """Arrays A1 = (mu_u * mu_v * 1) and B = (mu_{>u} * mu_{>v} * 1) over
    monic codes of degree <= D, plus the type II coefficient array
    b_d = sum over divisors a of d with deg a > u of mu(a)."""
    arrays = _audit_arrays(ctx, D)
    mu, ones = arrays["mu"], arrays["ones"]
    mu_u = _mu_truncated(ctx, mu, D, u, above=False)
    mu_v = _mu_truncated(ctx, mu, D, v, above=False)
    w_uv = _sieve.convolve_monic(ctx, D, mu_u, mu_v)
    a1 = _sieve.convolve_monic(ctx, D, w_uv, ones)
    # r_u[g] = sum_{a | g, deg a > u} mu(a), via the honest full divisor sum
    r_u = arrays["full_s"] - _sieve.convolve_monic(ctx, D, mu_u, ones)
    r_v = arrays["full_s"] - _sieve.convolve_monic(ctx, D, mu_v, ones)
    m1 = _sieve.convolve_monic(ctx, D, mu_u, r_v)  # small a, large b
    m2 = _sieve.convolve_monic(ctx, D, mu_v, r_u)  # small b, large a
    b_arr = arrays["f3"] - a1 - m1 - m2
    return {"a1": a1, "b": b_arr, "w_uv": w_uv, "r_u": r_u}


def vaughan_pointwise_audit(
    ctx: FieldCtx, max_deg: int, u: int, v: int, budget: int = 1_200_000, max_examples: int = 64
) -> VaughanAudit:
    """Exhaustively test mu(f) = -A1(f) + B(f) for every monic f with
    deg f <= max_deg and record where it fails."""
    q = ctx.q
    if q**max_deg > budget:
        raise BudgetExceeded(q**max_deg, budget, "pointwise audit")
    arrays = _audit_arrays(ctx, max_deg)
    rhs = vaughan_rhs_arrays(ctx, max_deg, u, v)
    value = -rhs["a1"] + rhs["b"]
    mu = arrays["mu"]
    fail_degrees = []
    failures = []
    count = 0
    for d in range(max_deg + 1):
        lo, hi = q**d, 2 * q**d
        bad = np.nonzero(value[lo:hi] != mu[lo:hi])[0]
        if len(bad):
            fail_degrees.append(d)
            count += len(bad)
            for j in bad[: max(0, max_examples - len(failures))]:
                failures.append(Poly.from_code(ctx, lo + int(j)))
    return VaughanAudit(
        u=u,
        v=v,
        max_deg=max_deg,
        fail_degrees=tuple(fail_degrees),
        failures=tuple(failures),
        failure_count=count,
    )


@dataclass(frozen=True)
class VaughanReport:
    u: int
    v: int
    n: int
    t1: complex
    t2: complex
    direct: complex
    residual: float
    restricted_residual: float
    pass_degrees: tuple
    fail_degrees: tuple
    pointwise_failures: tuple
    coefficient_bound_ok: bool


def vaughan_decompose(
    ctx: FieldCtx,
    n: int,
    phase,
    u: int | None = None,
    v: int | None = None,
    budget: int = 1_200_000,
    workers: int = 1,
) -> VaughanReport:
    """Type I / type II split of sum over G_n of mu(f) Phi(f).

    T1 = sum over monic d of a_d sum over w in G_(n - deg d) of Phi(d w),
    with a_d = sum over factorizations d = a b, deg a <= u, deg b <= v, of
    mu(a) mu(b); T2 carries b_d = sum over divisors a of d with deg a > u of
    mu(a) against mu(w) over deg w > v.  Beside the full sums the report
    carries the pointwise audit and the same sums restricted to the degrees
    the audit clears, where direct = -T1 + T2 must hold exactly.
    """
    q = ctx.q
    if u is None:
        u = n // 18
    if v is None:
        v = n // 18
    if u + v >= n:
        raise ValueError("u + v < n required")
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "vaughan sweep")
    audit = vaughan_pointwise_audit(ctx, n, u, v, budget=budget)
    pass_degrees = tuple(d for d in range(n) if d not in audit.fail_degrees)
    sieve = _sieve.get_sieve(ctx, n)
    rhs = vaughan_rhs_arrays(ctx, n, u, v)

    # a_d table from the small double loop, with the tau bound checked
    a_d: dict[int, int] = {}
    for da in range(u + 1):
        for ja in range(q**da):
            ac = q**da + ja
            ma = int(sieve.mu[ac])
            if not ma:
                continue
            for db in range(v + 1):
                for jb in range(q**db):
                    bc = q**db + jb
                    mb = int(sieve.mu[bc])
                    if not mb:
                        continue
                    dc = (
                        Poly.from_code(ctx, ac) * Poly.from_code(ctx, bc)
                    ).code
                    a_d[dc] = a_d.get(dc, 0) + ma * mb
    for dc, val in a_d.items():
        if abs(val) > int(sieve.tau[dc]):
            raise IdentityCheckError(
                "type I coefficient exceeds tau",
                counterexample=f"d={Poly.from_code(ctx, dc)!r}, a_d={val}, tau={int(sieve.tau[dc])}",
            )
    b_arr = rhs["r_u"]
    for d in range(n):
        lo, hi = q**d, 2 * q**d
        if np.any(np.abs(b_arr[lo:hi]) > sieve.tau[lo:hi]):
            j = int(np.nonzero(np.abs(b_arr[lo:hi]) > sieve.tau[lo:hi])[0][0])
            raise IdentityCheckError(
                "type II coefficient exceeds tau",
                counterexample=f"d={Poly.from_code(ctx, lo + j)!r}",
            )

    p = ctx.p
    t1_full = np.zeros(p, dtype=np.int64)
    t1_restr = np.zeros(p, dtype=np.int64)
    for dc in sorted(a_d):
        coeff = a_d[dc]
        if not coeff:
            continue
        d_poly = Poly.from_code(ctx, dc)
        dd = int(d_poly.deg)
        m = n - dd
        phase_d = phase.compose_dilation(d_poly)
        zero_hist = phase_hist(ctx, phase_d, m, 0, 1, None, workers)
        t1_full += coeff * zero_hist
        for wd in range(m):
            lo, hi = (q**wd, q ** (wd + 1)) if wd else (1, q)
            h = phase_hist(ctx, phase_d, m, lo, hi, None, workers)
            t1_full += coeff * h
            if dd + wd in pass_degrees:
                t1_restr += coeff * h
        # w = 0 contributes Phi(0), outside every f-degree: full sum only
    t2_full = np.zeros(p, dtype=np.int64)
    t2_restr = np.zeros(p, dtype=np.int64)
    for dd in range(n):
        lo_d, hi_d = q**dd, 2 * q**dd
        nz = np.nonzero(b_arr[lo_d:hi_d])[0]
        for j in nz:
            dc = lo_d + int(j)
            coeff = int(b_arr[dc])
            d_poly = Poly.from_code(ctx, dc)
            m = n - dd
            phase_d = phase.compose_dilation(d_poly)
            mu_m = _sieve.mobius_over_g(ctx, m)
            for wd in range(v + 1, m):
                lo, hi = (q**wd, q ** (wd + 1)) if wd else (1, q)
                h = phase_hist(ctx, phase_d, m, lo, hi, mu_m, workers)
                t2_full += coeff * h
                if dd + wd in pass_degrees:
                    t2_restr += coeff * h
    mu_n = _sieve.mobius_over_g(ctx, n)
    direct_full = np.zeros(p, dtype=np.int64)
    direct_restr = np.zeros(p, dtype=np.int64)
    for wd in range(n):
        lo, hi = (q**wd, q ** (wd + 1)) if wd else (1, q)
        h = phase_hist(ctx, phase, n, lo, hi, mu_n, workers)
        direct_full += h
        if wd in pass_degrees:
            direct_restr += h
    t1c = hist_to_complex(ctx, t1_full)
    t2c = hist_to_complex(ctx, t2_full)
    dc_ = hist_to_complex(ctx, direct_full)
    residual = abs(dc_ - (-t1c + t2c))
    restr = abs(
        hist_to_complex(ctx, direct_restr)
        - (-hist_to_complex(ctx, t1_restr) + hist_to_complex(ctx, t2_restr))
    )
    return VaughanReport(
        u=u,
        v=v,
        n=n,
        t1=t1c,
        t2=t2c,
        direct=dc_,
        residual=residual,
        restricted_residual=restr,
        pass_degrees=pass_degrees,
        fail_degrees=audit.fail_degrees,
        pointwise_failures=audit.failures,
        coefficient_bound_ok=True,
    )


def type_one_mean_square(
    ctx: FieldCtx,
    n: int,
    phase,
    k_max: int | None = None,
    budget: int = 1_200_000,
    workers: int = 1,
):
    """Reported statistic: for each k, the mean over monic d of degree k of
    |mean over w in G_(n-k) of Phi(d w)|^2.  No threshold is asserted; this
    is the quantity whose largeness would push a phase into the low-rank
    regime."""
    q = ctx.q
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "type I sweep")
    if k_max is None:
        k_max = n - 1
    rows = []
    for k in range(min(k_max, n - 1) + 1):
        m = n - k
        total = 0.0
        for j in range(q**k):
            d = Poly.from_code(ctx, q**k + j)
            ph_d = phase.compose_dilation(d)
            h = phase_hist(ctx, ph_d, m, 0, q**m, None, workers)
            total += abs(hist_to_complex(ctx, h) / q**m) ** 2
        rows.append((k, total / q**k))
    return rows


# -- sampled sweeps -----------------------------------------------------------------


def exponent_sweep(
    ctx: FieldCtx,
    experiment: str,
    n_values,
    samples: int,
    seed: int,
    budget: int = 1_200_000,
    workers: int = 1,
    exhaustive: bool = False,
):
    """Sampled max/mean |sum| and empirical exponents per n for the linear,
    quadratic or hankel experiment.  Deterministic under the seed; the
    worker count never changes results."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in n_values:
        if ctx.q**n > budget:
            raise BudgetExceeded(ctx.q**n, budget, f"sweep at n={n}")
        abses = []
        if experiment == "linear" and exhaustive:
            phases = []
            for code in range(ctx.q ** (n + 1)):
                coeffs = [(code // ctx.q**i) % ctx.q for i in range(n + 1)]
                phases.append(LaurentSeries(ctx, -1, coeffs))
            for al in phases:
                abses.append(linear_corr(ctx, n, al, "G", budget, workers).abs(ctx))
        else:
            for _ in range(samples):
                if experiment == "linear":
                    al = sample_torus(ctx, rng, n + 1)
                    rep = linear_corr(ctx, n, al, "G", budget, workers)
                    abses.append(rep.abs(ctx))
                elif experiment == "quadratic":
                    qp = _random_quad_phase(ctx, n, rng)
                    rep = quad_corr(ctx, n, qp, budget, workers)
                    abses.append(rep.abs(ctx))
                elif experiment == "hankel":
                    al = sample_torus(ctx, rng, 2 * n + 2)
                    be = sample_torus(ctx, rng, n + 1)
                    rep = hankel_corr(ctx, n, al, be, budget, workers)
                    abses.append(rep.abs(ctx))
                else:
                    raise ValueError(f"unknown experiment {experiment!r}")
        if abses:
            mx, mean = max(abses), sum(abses) / len(abses)
            expo = log(mx) / (n * log(ctx.q)) if mx > 0 and n > 0 else None
            rows.append((n, len(abses), mx, mean, expo))
    return rows


def _random_quad_phase(ctx: FieldCtx, n: int, rng) -> QuadPhase:
    M = rng.integers(0, ctx.q, size=(n, n))
    M = np.triu(M)
    M = M + np.triu(M, 1).T  # symmetric with free diagonal
    b = rng.integers(0, ctx.q, size=n)
    c = int(rng.integers(0, ctx.q))
    r = int(rng.integers(1, ctx.q))
    return QuadPhase(ctx, M % ctx.q, b, c, r)
