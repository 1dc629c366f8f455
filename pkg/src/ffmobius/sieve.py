"""Vectorised sweep kernels over monic polynomials, indexed by code.

A polynomial sum c_i t^i with coefficient codes c_i in [0, q) is encoded as
the integer code sum c_i q^i, so the base-q digits of a code are the
coefficients, constant term first.  Monic polynomials of degree d occupy
exactly the code interval [q^d, 2 q^d), which lets whole-degree sweeps work
on contiguous numpy slices.

The central object is MonicSieve: flat arrays of mu, Lambda (von Mangoldt)
and tau over all monic codes up to a degree bound, built by marking
multiples of irreducibles in increasing order and then propagating the
multiplicative recursions along smallest-factor quotients.  The per-degree
irreducible lists produced on the way double as the irreducible enumerator,
and each list is checked against the necklace count (1/n) sum mu(d) q^(n/d).
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceeded
from .fields import FieldCtx

__all__ = [
    "necklace_count",
    "poly_times_monics",
    "MonicSieve",
    "get_sieve",
    "mobius_over_g",
    "convolve_monic",
]


def _int_mobius(n: int) -> int:
    m, res = n, 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            res = -res
        d += 1
    if m > 1:
        res = -res
    return res


def necklace_count(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n over F_q."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _int_mobius(d) * q ** (n // d)
    assert total % n == 0
    return total // n


# -- digit/code plumbing ------------------------------------------------------

_TAILS: dict[tuple, np.ndarray] = {}


def monic_tails(ctx: FieldCtx, m: int) -> np.ndarray:
    """(q^m, m) matrix whose row j holds the digits of j: all tails of A_m."""
    key = (ctx, m)
    if key not in _TAILS:
        q = ctx.q
        j = np.arange(q**m, dtype=np.int64)
        cols = [(j // q**i) % q for i in range(m)]
        _TAILS[key] = (
            np.stack(cols, axis=1).astype(np.int16)
            if m
            else np.zeros((1, 0), dtype=np.int16)
        )
    return _TAILS[key]


def codes_to_digits(ctx: FieldCtx, codes: np.ndarray, width: int) -> np.ndarray:
    q = ctx.q
    codes = np.asarray(codes, dtype=np.int64)
    return np.stack([(codes // q**i) % q for i in range(width)], axis=1).astype(
        np.int16
    )


def digits_to_codes(ctx: FieldCtx, digits: np.ndarray) -> np.ndarray:
    powers = ctx.q ** np.arange(digits.shape[1], dtype=np.int64)
    return digits.astype(np.int64) @ powers


def scale_digits(ctx: FieldCtx, c: int, digits: np.ndarray) -> np.ndarray:
    """Coefficientwise multiplication by the field element c."""
    if c == 1:
        return digits
    if ctx.s == 1:
        return (digits * c) % ctx.p
    return ctx.MUL[c][digits].astype(np.int16)


def poly_times_monics(ctx: FieldCtx, f_digits, m: int) -> np.ndarray:
    """Codes of f * (t^m + tail) for every tail in [0, q^m), in tail order.

    f_digits are the coefficient codes of a nonzero f, constant term first.
    """
    q, p = ctx.q, ctx.p
    f_digits = tuple(int(c) for c in f_digits)
    df = len(f_digits) - 1
    width = df + m + 1
    n_rows = q**m
    tails = monic_tails(ctx, m)
    if ctx.s == 1:
        out = np.zeros((n_rows, width), dtype=np.int32)
        for i, fi in enumerate(f_digits):
            if fi:
                out[:, i + m] += fi  # contribution of f * t^m
                if m:
                    out[:, i : i + m] += fi * tails.astype(np.int32)
        out %= p
    else:
        out = np.zeros((n_rows, width), dtype=np.int16)
        ADD = ctx.ADD
        for i, fi in enumerate(f_digits):
            if fi:
                out[:, i + m] = ADD[out[:, i + m], fi]
                if m:
                    out[:, i : i + m] = ADD[
                        out[:, i : i + m], scale_digits(ctx, fi, tails)
                    ]
    return digits_to_codes(ctx, out)


# -- the sieve ---------------------------------------------------------------


class MonicSieve:
    """mu / Lambda / tau and smallest-factor data over monic codes < 2 q^D."""

    def __init__(self, ctx: FieldCtx, max_deg: int):
        self.ctx = ctx
        self.max_deg = max_deg
        q = ctx.q
        size = 2 * q**max_deg
        self.mu = np.zeros(size, dtype=np.int8)
        self.mangoldt = np.zeros(size, dtype=np.int16)
        self.tau = np.zeros(size, dtype=np.int64)
        self.spf_code = np.zeros(size, dtype=np.int64)
        self.spf_deg = np.zeros(size, dtype=np.int16)
        self.quot = np.zeros(size, dtype=np.int64)
        self.irr_codes: dict[int, np.ndarray] = {}
        self._build()

    def _build(self):
        ctx, D = self.ctx, self.max_deg
        q = ctx.q
        marked = np.zeros(2 * q**D, dtype=bool)
        # discover irreducibles degree by degree, marking their multiples
        for d in range(1, D + 1):
            lo, hi = q**d, 2 * q**d
            cand = np.arange(lo, hi, dtype=np.int64)
            irr = cand[~marked[lo:hi]]
            assert len(irr) == necklace_count(q, d), "irreducible count mismatch"
            self.irr_codes[d] = irr
            for pc in irr:
                fd = [(int(pc) // q**i) % q for i in range(d + 1)]
                for m in range(1, D - d + 1):
                    codes = poly_times_monics(ctx, fd, m)
                    fresh = ~marked[codes]
                    sel = codes[fresh]
                    marked[sel] = True
                    self.spf_code[sel] = pc
                    self.spf_deg[sel] = d
                    self.quot[sel] = q**m + np.nonzero(fresh)[0]
        # multiplicative recursion along f = spf(f) * quot(f)
        mult = np.zeros(2 * q**D, dtype=np.int16)  # multiplicity of spf
        ipp = np.zeros(2 * q**D, dtype=bool)  # is a prime power
        self.mu[1] = 1
        self.tau[1] = 1
        for d in range(1, D + 1):
            lo, hi = q**d, 2 * q**d
            idx = np.arange(lo, hi, dtype=np.int64)
            is_comp = marked[lo:hi]
            irr = idx[~is_comp]
            self.mu[irr] = -1
            self.tau[irr] = 2
            self.mangoldt[irr] = d
            self.spf_code[irr] = irr
            self.spf_deg[irr] = d
            self.quot[irr] = 1
            mult[irr] = 1
            ipp[irr] = True
            comp = idx[is_comp]
            if len(comp) == 0:
                continue
            h = self.quot[comp]
            same = self.spf_code[h] == self.spf_code[comp]
            eh = mult[h]
            mult[comp] = np.where(same, eh + 1, 1)
            self.mu[comp] = np.where(same, 0, -self.mu[h])
            self.tau[comp] = np.where(
                same, self.tau[h] // (eh + 1) * (eh + 2), self.tau[h] * 2
            )
            ipp[comp] = (h == 1) | (ipp[h] & same)
            self.mangoldt[comp] = np.where(ipp[comp], self.spf_deg[comp], 0)

    def degree_slice(self, arr: np.ndarray, d: int) -> np.ndarray:
        q = self.ctx.q
        return arr[q**d : 2 * q**d]


_SIEVES: dict[FieldCtx, MonicSieve] = {}


def get_sieve(ctx: FieldCtx, max_deg: int, budget: int | None = None) -> MonicSieve:
    """Cached sieve covering monic degrees <= max_deg (grows on demand)."""
    if budget is not None and ctx.q**max_deg > budget:
        raise BudgetExceeded(ctx.q**max_deg, budget, f"sieve to degree {max_deg}")
    cur = _SIEVES.get(ctx)
    if cur is None or cur.max_deg < max_deg:
        cur = MonicSieve(ctx, max_deg)
        _SIEVES[ctx] = cur
    return cur


_MU_G: dict[tuple, np.ndarray] = {}


def mobius_over_g(ctx: FieldCtx, n: int, budget: int | None = None) -> np.ndarray:
    """mu over all of G_n as an int8 array indexed by code in [0, q^n).

    mu is extended off monics by unit invariance: mu(c f) = mu(f) for units c
    and mu(0) = 0.
    """
    key = (ctx, n)
    if key in _MU_G:
        return _MU_G[key]
    if budget is not None and ctx.q**n > budget:
        raise BudgetExceeded(ctx.q**n, budget, "G_n mobius table")
    q = ctx.q
    sieve = get_sieve(ctx, max(n - 1, 1))
    out = np.zeros(q**n, dtype=np.int8)
    for d in range(n):
        lo, hi = q**d, 2 * q**d
        vals = sieve.mu[lo:hi]
        out[lo:hi] = vals
        if d > 0:
            digits = monic_digit_matrix(ctx, d)
            for c in range(2, q):
                codes = digits_to_codes(ctx, scale_digits(ctx, c, digits))
                out[codes] = vals
        else:
            for c in range(2, q):
                out[c] = 1
    _MU_G[key] = out
    return out


_MONIC_DIGITS: dict[tuple, np.ndarray] = {}


def monic_digit_matrix(ctx: FieldCtx, d: int) -> np.ndarray:
    """(q^d, d+1) digits of every monic polynomial of degree d."""
    key = (ctx, d)
    if key not in _MONIC_DIGITS:
        tails = monic_tails(ctx, d)
        lead = np.ones((tails.shape[0], 1), dtype=np.int16)
        _MONIC_DIGITS[key] = np.hstack([tails, lead])
    return _MONIC_DIGITS[key]


def convolve_monic(ctx: FieldCtx, max_deg: int, wa: np.ndarray, wb: np.ndarray) -> np.ndarray:
    """Dirichlet convolution over monics: out[f] = sum_{g h = f} wa[g] wb[h].

    wa, wb are int arrays indexed by monic code.  The double sum is organised
    per degree pair, looping python-side over the smaller factor set and
    scattering vectorised products of the larger one.
    """
    q = ctx.q
    out = np.zeros(2 * q**max_deg, dtype=np.int64)
    for da in range(max_deg + 1):
        for db in range(max_deg + 1 - da):
            wa_sl = wa[q**da : 2 * q**da]
            wb_sl = wb[q**db : 2 * q**db]
            if not (np.any(wa_sl) and np.any(wb_sl)):
                continue
            # loop over the smaller side
            if q**da <= q**db:
                loop_deg, loop_w, vec_deg, vec_w = da, wa_sl, db, wb_sl
            else:
                loop_deg, loop_w, vec_deg, vec_w = db, wb_sl, da, wa_sl
            base = q**loop_deg
            for j in np.nonzero(loop_w)[0]:
                g = base + int(j)
                fd = [(g // q**i) % q for i in range(loop_deg + 1)]
                codes = poly_times_monics(ctx, fd, vec_deg)
                np.add.at(out, codes, int(loop_w[j]) * vec_w)
    return out
