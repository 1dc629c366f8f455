"""Finite fields F_q, q = p^s, with elements as integer codes.

An element code c in [0, q) encodes the power-basis coordinates of the
element as the base-p digits of c (constant coordinate first).  All
arithmetic is table driven, so kernels elsewhere can vectorise field
operations with numpy fancy indexing.

The modulus for s > 1 is the lexicographically smallest monic irreducible
of degree s over F_p, smallest meaning lowest code with the constant
coefficient as the fastest-varying digit.  This makes field construction
deterministic and table free.
"""

from __future__ import annotations

import numpy as np

__all__ = ["FieldCtx", "get_field", "parse_field"]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- tiny F_p[x] helpers used only for modulus construction ------------------

def _fp_mul(a: tuple, b: tuple, p: int) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _fp_mod(a: tuple, m: tuple, p: int) -> tuple:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        while a and a[-1] == 0:
            a.pop()
    return tuple(a)


def _monic_fp_polys(p: int, deg: int):
    """Monic degree-`deg` polynomials over F_p in code order (constant fastest)."""
    for code in range(p**deg):
        coeffs = []
        c = code
        for _ in range(deg):
            coeffs.append(c % p)
            c //= p
        coeffs.append(1)
        yield tuple(coeffs)


def _fp_irreducible(f: tuple, p: int) -> bool:
    """Trial division by every lower-degree monic polynomial."""
    deg = len(f) - 1
    if deg <= 0:
        return False
    for d in range(1, deg):
        for g in _monic_fp_polys(p, d):
            if not _fp_mod(f, g, p):
                return False
    return True


def _smallest_irreducible(p: int, s: int) -> tuple:
    for f in _monic_fp_polys(p, s):
        if _fp_irreducible(f, p):
            return f
    raise RuntimeError(f"no irreducible of degree {s} over F_{p}")  # unreachable


class FieldCtx:
    """Immutable context for F_q with precomputed operation tables.

    Equality is identity; use get_field() so contexts are interned and can
    serve as cache keys.
    """

    def __init__(self, p: int, s: int = 1, modulus: tuple | None = None):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if s < 1:
            raise ValueError("extension degree s must be >= 1")
        self.p = p
        self.s = s
        self.q = p**s
        if modulus is None:
            modulus = _smallest_irreducible(p, s)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != s + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree s")
        if s > 1 and not _fp_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._build_tables()

    # identity-based equality/hash: contexts are interned through get_field
    __hash__ = object.__hash__

    def __repr__(self):
        return f"FieldCtx(q={self.q})" if self.s > 1 else f"FieldCtx(p={self.p})"

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.s}" if self.s > 1 else str(self.p)

    def _digits(self, code: int) -> tuple:
        out = []
        for _ in range(self.s):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def _code(self, digits) -> int:
        c = 0
        for d in reversed(list(digits)):
            c = c * self.p + d
        return c

    def _build_tables(self):
        p, s, q = self.p, self.s, self.q
        dig = [self._digits(a) for a in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                ab = self._code((x + y) % p for x, y in zip(dig[a], dig[b]))
                add[a, b] = add[b, a] = ab
                prod = _fp_mod(_fp_mul(dig[a], dig[b], p), self.modulus, p)
                mcode = self._code(prod + (0,) * (s - len(prod)))
                mul[a, b] = mul[b, a] = mcode
        neg = np.array(
            [self._code((-x) % p for x in dig[a]) for a in range(q)], dtype=np.int64
        )
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            for b in range(1, q):
                if mul[a, b] == 1:
                    inv[a] = b
                    break
        sub = add[:, neg]
        # Tr(a) = a + a^p + ... + a^(p^(s-1)); lands in the prime subfield,
        # whose elements are exactly the codes 0..p-1.
        trace = np.zeros(q, dtype=np.int64)
        for a in range(q):
            x, acc = a, a
            for _ in range(s - 1):
                x = self._pow_raw(x, p, mul)
                acc = add[acc, x]
            assert acc < p, "trace outside prime subfield"
            trace[a] = acc
        self.ADD, self.SUB, self.MUL = add, sub, mul
        self.NEG, self.INV, self.TRACE = neg, inv, trace

    @staticmethod
    def _pow_raw(a: int, e: int, mul) -> int:
        r = 1
        while e:
            if e & 1:
                r = mul[r, a]
            a = mul[a, a]
            e >>= 1
        return int(r)

    # -- scalar operations ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.ADD[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.SUB[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.MUL[a, b])

    def neg(self, a: int) -> int:
        return int(self.NEG[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return int(self.INV[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 0 if e else 1
        return self._pow_raw(a, e % (self.q - 1) if e else 0, self.MUL)

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, returned as an integer in [0, p)."""
        return int(self.TRACE[a])

    def eq_exponent(self, a: int) -> int:
        """Exponent k with e_q(a) = exp(2*pi*i*k/p), i.e. k = Tr(a) mod p."""
        return int(self.TRACE[a])

    def units(self):
        return range(1, self.q)

    def omega(self) -> complex:
        """Primitive p-th root of unity used by the additive character."""
        return np.exp(2j * np.pi / self.p)


_FIELDS: dict[tuple[int, int], FieldCtx] = {}


def get_field(p: int, s: int = 1) -> FieldCtx:
    """Interned field context; repeated calls return the same object."""
    key = (p, s)
    if key not in _FIELDS:
        _FIELDS[key] = FieldCtx(p, s)
    return _FIELDS[key]


def parse_field(spec: str) -> FieldCtx:
    """Parse a field spec string: "2", "3", "2^2", ..."""
    spec = spec.strip()
    if "^" in spec:
        ps, ss = spec.split("^", 1)
        return get_field(int(ps), int(ss))
    return get_field(int(spec))
