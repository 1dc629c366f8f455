"""Quadratic phases over F_q^n: ranks, Gauss sums, isotropic counting,
Hankel matrices of Laurent series, and dilation compressions.

A phase is chi_r(x^T M x + b.x + c) with M symmetric; its rank is the rank
of M.  Everything is exact: matrices hold field codes, elimination uses the
field tables, and exponential means are assembled from integer exponent
histograms.  The symmetrised compression (L_a^T M L_b + L_b^T M L_a)/2
needs odd characteristic; for Hankel matrices the single product
L_a^T M L_b is already symmetric and is used instead, which keeps the
characteristic-2 case available where it makes sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, CharacteristicError, IdentityCheckError
from .fields import FieldCtx
from .laurent import LaurentSeries
from .polys import Poly
from . import sieve as _sieve

__all__ = [
    "QuadPhase",
    "RankStats",
    "rank",
    "fq_matmul",
    "quad_exponents",
    "gauss_mean",
    "isotropic_count",
    "hankel_matrix",
    "dilation_matrix",
    "m_ab",
    "is_hankel",
    "matrix_to_csv",
    "matrix_from_csv",
    "rank_stats",
]


def _as_matrix(ctx: FieldCtx, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.size and (M.min() < 0 or M.max() >= ctx.q):
        raise ValueError("matrix entries must be field codes")
    return M


@dataclass(frozen=True)
class QuadPhase:
    """chi_r(x^T M x + b.x + c) on F_q^n."""

    ctx: FieldCtx
    M: np.ndarray
    b: np.ndarray
    c: int = 0
    r: int = 1

    def __post_init__(self):
        M = _as_matrix(self.ctx, self.M)
        b = _as_matrix(self.ctx, self.b)
        if M.shape[0] != M.shape[1] or not np.array_equal(M, M.T):
            raise ValueError("M must be symmetric")
        if b.shape != (M.shape[0],):
            raise ValueError("b must be a vector of matching length")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.M.shape[0]

    def rank(self) -> int:
        return rank(self.ctx, self.M)

    def effective_rank(self) -> int:
        """Rank of the form actually seen by chi_r (zero when r = 0)."""
        return self.rank() if self.r else 0

    def describe(self) -> str:
        mm = ";".join(",".join(str(int(x)) for x in row) for row in self.M)
        bb = ",".join(str(int(x)) for x in self.b)
        return f"M[{mm}]+b[{bb}]+c{self.c}|r{self.r}"


def rank(ctx: FieldCtx, M) -> int:
    """Rank over F_q by exact Gaussian elimination."""
    A = _as_matrix(ctx, M).copy()
    if A.size == 0:
        return 0
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        inv = ctx.inv(int(A[r, c]))
        A[r] = ctx.MUL[inv][A[r]]
        below = A[r + 1 :, c] != 0
        if below.any():
            factors = A[r + 1 :, c][below]
            prods = ctx.MUL[factors[:, None], A[r][None, :]]
            A[r + 1 :][below] = ctx.SUB[A[r + 1 :][below], prods]
        r += 1
        if r == rows:
            break
    return r


def fq_matmul(ctx: FieldCtx, A, B) -> np.ndarray:
    """Matrix product over F_q (codes in, codes out)."""
    A = _as_matrix(ctx, A)
    B = _as_matrix(ctx, B)
    if ctx.s == 1:
        return (A @ B) % ctx.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = ctx.ADD[out, ctx.MUL[A[:, k][:, None], B[k, :][None, :]]]
    return out


def quad_exponents(phase: QuadPhase, codes: np.ndarray) -> np.ndarray:
    """omega_p exponents Tr(r (x^T M x + b.x + c)) for the coefficient
    vectors of the given codes."""
    ctx = phase.ctx
    n = phase.n
    X = _sieve.codes_to_digits(ctx, codes, n)
    if ctx.s == 1:
        p = ctx.p
        r = phase.r % p
        Xl = X.astype(np.int64)
        v = ((Xl @ ((r * phase.M) % p)) * Xl).sum(axis=1)
        v += Xl @ ((r * phase.b) % p)
        v += r * phase.c
        return (v % p).astype(np.int64)
    rM = ctx.MUL[phase.r][phase.M]
    rb = ctx.MUL[phase.r][phase.b]
    rc = ctx.mul(phase.r, phase.c)
    acc = np.full(len(codes), rc, dtype=np.int64)
    for i in range(n):
        row = np.zeros(len(codes), dtype=np.int64)
        for j in range(n):
            m = int(rM[i, j])
            if m:
                row = ctx.ADD[row, ctx.MUL[m][X[:, j]]]
        if int(rb[i]):
            row = ctx.ADD[row, rb[i]]
        acc = ctx.ADD[acc, ctx.MUL[X[:, i], row]]
    return ctx.TRACE[acc]


def gauss_mean(phase: QuadPhase, budget: int = 1_200_000, tol: float = 1e-9) -> complex:
    """E over x in F_q^n of the phase, by exhaustive summation.

    Asserts the Gauss-sum bound |E| <= q^(-rank/2) and, for a pure form
    (b = 0, r != 0), equality.  Odd characteristic only: the bound's proof
    halves a bilinear form.
    """
    ctx = phase.ctx
    if ctx.p == 2:
        raise CharacteristicError("gauss_mean requires p > 2")
    q, n = ctx.q, phase.n
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "F_q^n sweep")
    exps = quad_exponents(phase, np.arange(q**n, dtype=np.int64))
    hist = np.bincount(exps, minlength=ctx.p).astype(np.int64)
    omega = np.exp(2j * np.pi * np.arange(ctx.p) / ctx.p)
    mean = complex(hist @ omega) / q**n
    bound = float(q) ** (-phase.effective_rank() / 2)
    if abs(mean) > bound + tol:
        raise IdentityCheckError(
            "Gauss mean exceeds q^(-rank/2)",
            counterexample=f"phase {phase.describe()}, |E|={abs(mean):.12g}, bound={bound:.12g}",
        )
    if phase.r and not phase.b.any() and abs(abs(mean) - bound) > tol:
        raise IdentityCheckError(
            "pure quadratic Gauss mean misses the equality case",
            counterexample=f"phase {phase.describe()}, |E|={abs(mean):.12g}, expected {bound:.12g}",
        )
    return mean


def isotropic_count(ctx: FieldCtx, forms, n: int, budget: int = 1_200_000):
    """Common zeros of pure quadratic forms over F_p^n, with the lower bound
    (1 - p^(-1/2)) p^(n - 2 r (r+1)).  Returns (count, bound)."""
    if ctx.s != 1:
        raise ValueError("isotropic counting is over prime fields")
    p = ctx.p
    if p**n > budget:
        raise BudgetExceeded(p**n, budget, "F_p^n sweep")
    X = _sieve.monic_tails(ctx, n).astype(np.int64)
    ok = np.ones(p**n, dtype=bool)
    r = 0
    for M in forms:
        M = _as_matrix(ctx, M)
        vals = ((X @ M) * X).sum(axis=1) % p
        ok &= vals == 0
        r += 1
    count = int(ok.sum())
    bound = (1 - p**-0.5) * float(p) ** (n - 2 * r * (r + 1))
    if count < bound:
        raise IdentityCheckError(
            "isotropic count below the guaranteed bound",
            counterexample=f"p={p}, n={n}, r={r}, count={count}, bound={bound:.6g}",
        )
    return count, bound


def hankel_matrix(alpha: LaurentSeries, n: int) -> np.ndarray:
    """Matrix of f -> (alpha f^2)_{-1} on G_n: entries alpha_(-1-i-j)."""
    ctx = alpha.ctx
    M = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            v = alpha.coefficient(-1 - i - j)
            M[i, j] = M[j, i] = v
    return M


def is_hankel(M: np.ndarray) -> bool:
    n = M.shape[0]
    for s in range(2 * n - 1):
        vals = {int(M[i, s - i]) for i in range(max(0, s - n + 1), min(n, s + 1))}
        if len(vals) > 1:
            return False
    return True


def dilation_matrix(ctx: FieldCtx, a: Poly, n: int, k: int) -> np.ndarray:
    """Coordinate matrix of w -> a w from G_(n-k) to G_n: L[i,j] = a_(i-j)."""
    if not a.is_zero() and a.deg > k:
        raise ValueError("deg a must be <= k")
    L = np.zeros((n, n - k), dtype=np.int64)
    for j in range(n - k):
        for i in range(n):
            L[i, j] = a.coefficient(i - j)
    return L


def m_ab(ctx: FieldCtx, M: np.ndarray, a: Poly, b: Poly, k: int) -> np.ndarray:
    """Symmetrised compression (L_a^T M L_b + L_b^T M L_a) / 2.

    In characteristic 2 the average is unavailable; for Hankel M the single
    product L_a^T M L_b is symmetric and equals it, so that is returned.
    """
    n = M.shape[0]
    La = dilation_matrix(ctx, a, n, k)
    Lb = dilation_matrix(ctx, b, n, k)
    AB = fq_matmul(ctx, La.T, fq_matmul(ctx, M, Lb))
    if ctx.p == 2:
        if not is_hankel(M):
            raise CharacteristicError(
                "symmetrised compression requires p > 2 for general M"
            )
        return AB
    BA = fq_matmul(ctx, Lb.T, fq_matmul(ctx, M, La))
    half = ctx.inv(2 % ctx.q)
    return ctx.MUL[half][ctx.ADD[AB, BA]]


def matrix_to_csv(M: np.ndarray) -> str:
    """Matrix text format: first line n, then n rows of coefficient codes."""
    n = M.shape[0]
    lines = [str(n)]
    for i in range(n):
        lines.append(",".join(str(int(x)) for x in M[i]))
    return "\n".join(lines)


def matrix_from_csv(text: str) -> np.ndarray:
    lines = [ln for ln in text.strip().split("\n") if ln.strip()]
    n = int(lines[0])
    rows = [[int(x) for x in ln.split(",")] for ln in lines[1 : n + 1]]
    M = np.array(rows, dtype=np.int64)
    if M.shape != (n, n):
        raise ValueError("matrix text does not match its declared size")
    return M


@dataclass
class RankStats:
    k: int
    h: int
    density: Fraction
    histogram: dict = field(default_factory=dict)
    total: int = 0
    mode: str = "exhaustive"


def rank_stats(
    ctx: FieldCtx,
    M: np.ndarray,
    k: int,
    h: int,
    mode: str = "exhaustive",
    samples: int = 0,
    seed: int = 0,
    budget: int = 1_200_000,
) -> RankStats:
    """Distribution of rank(M_{a,b}) over pairs (a, b) in G_(k+1)^2 and the
    density of pairs with rank <= h."""
    q = ctx.q
    total_space = q ** (2 * (k + 1))
    if mode == "exhaustive":
        if total_space > budget:
            raise BudgetExceeded(total_space, budget, "rank_stats pairs")
        pairs = (
            (ac, bc) for ac in range(q ** (k + 1)) for bc in range(q ** (k + 1))
        )
        total = total_space
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        draws = rng.integers(0, q ** (k + 1), size=(samples, 2))
        pairs = ((int(x), int(y)) for x, y in draws)
        total = samples
    else:
        raise ValueError("mode must be exhaustive or sampled")
    hist: dict[int, int] = {}
    low = 0
    for ac, bc in pairs:
        a = Poly.from_code(ctx, ac)
        b = Poly.from_code(ctx, bc)
        r = rank(ctx, m_ab(ctx, M, a, b, k))
        hist[r] = hist.get(r, 0) + 1
        if r <= h:
            low += 1
    return RankStats(
        k=k,
        h=h,
        density=Fraction(low, total),
        histogram=dict(sorted(hist.items())),
        total=total,
        mode=mode,
    )
