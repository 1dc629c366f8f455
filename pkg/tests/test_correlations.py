import numpy as np
import pytest

from ffmobius import Poly, get_field, mobius
from ffmobius.errors import CharacteristicError, PrecisionExceeded
from ffmobius.hayes import build_group, class_of, l_polynomial
from ffmobius.laurent import LaurentSeries, sample_torus
from ffmobius.polys import enumerate_polys
from ffmobius.quadform import QuadPhase, hankel_matrix
from ffmobius.correlations import (
    HankelPhase,
    LinearPhase,
    exponent_sweep,
    hankel_corr,
    hist_to_complex,
    linear_corr,
    linear_reduction_hists,
    periodic_corr,
    periodic_route_check,
    phase_hist,
    quad_corr,
)


def safe_mobius(f):
    return 0 if f.is_zero() else mobius(f)


def test_linear_alpha_zero(F2, F3):
    # sum over G_n of mu is -(q-1)^2 for n >= 2
    for ctx in (F2, F3):
        z = LaurentSeries.zero(ctx, 12)
        for n in (2, 4, 6):
            assert linear_corr(ctx, n, z, "G").sum(ctx) == -((ctx.q - 1) ** 2)


def test_linear_deep_alpha_a_domain(F2):
    # alpha of norm < q^(-n-1): every phase is 1, the A_n sum vanishes
    for n in (2, 3, 5):
        al = LaurentSeries.from_coeff_map(F2, {-(n + 3): 1}, n + 5)
        assert linear_corr(F2, n, al, "A").sum(F2) == 0


def test_linear_against_direct_loop_oracle(F2):
    # independent oracle: plain loop, complex arithmetic, no histogram
    alpha = LaurentSeries.from_coeff_map(F2, {-1: 1}, 12)
    for n in (4, 6, 8):
        oracle = 0
        for f in enumerate_polys(F2, "A", n):
            m = safe_mobius(f)
            if m:
                oracle += m * (-1) ** f.coefficient(0)
        assert linear_corr(F2, n, alpha, "A").sum(F2) == oracle


def test_linear_oracle_random_alphas(F3):
    rng = np.random.default_rng(6)
    for _ in range(5):
        n = int(rng.integers(2, 6))
        alpha = sample_torus(F3, rng, n + 2)
        phase = LinearPhase(alpha)
        oracle = 0j
        omega = np.exp(2j * np.pi / 3)
        for f in enumerate_polys(F3, "G", n):
            m = safe_mobius(f)
            if m and not f.is_zero():
                oracle += m * omega ** alpha.mul_poly(f).e_exponent()
        rep = linear_corr(F3, n, alpha, "G")
        assert abs(rep.sum(F3) - oracle) < 1e-9


def test_linear_oracle_extension_field(F4):
    # s > 1: exponent tables must route through the trace
    rng = np.random.default_rng(44)
    n = 4
    alpha = sample_torus(F4, rng, n + 2)
    omega = np.exp(2j * np.pi / 2)
    oracle = 0j
    for f in enumerate_polys(F4, "G", n):
        m = safe_mobius(f)
        if m and not f.is_zero():
            oracle += m * omega ** alpha.mul_poly(f).e_exponent()
    rep = linear_corr(F4, n, alpha, "G")
    assert abs(rep.sum(F4) - oracle) < 1e-9


def test_precision_guard(F2):
    al = LaurentSeries.zero(F2, 3)
    with pytest.raises(PrecisionExceeded):
        linear_corr(F2, 6, al, "G")


def test_g_to_a_reduction_exact(F2, F3, F4):
    for ctx, n, seed in ((F2, 6, 5), (F2, 8, 1), (F3, 4, 2), (F4, 3, 7)):
        alpha = sample_torus(ctx, seed, n + 2)
        hg, ha = linear_reduction_hists(ctx, n, alpha)
        assert np.array_equal(hg, ha)


def test_histogram_order_independence(F2):
    # permuting enumeration order (chunk split) changes no output bit
    alpha = sample_torus(F2, 3, 10)
    phase = LinearPhase(alpha)
    from ffmobius.sieve import mobius_over_g

    mu = mobius_over_g(F2, 8)
    whole = phase_hist(F2, phase, 8, 0, 256, mu)
    parts = sum(
        phase_hist(F2, phase, 8, lo, min(lo + 37, 256), mu) for lo in range(0, 256, 37)
    )
    assert np.array_equal(whole, parts)
    threaded = phase_hist(F2, phase, 8, 0, 256, mu, workers=4)
    assert np.array_equal(whole, threaded)


def test_quad_zero_phase(F3):
    qp = QuadPhase(F3, np.zeros((4, 4), dtype=int), np.zeros(4, dtype=int), 0, 1)
    assert quad_corr(F3, 4, qp).sum(F3) == -4


def test_quad_rejects_char2(F2):
    qp = QuadPhase(F2, np.zeros((3, 3), dtype=int), np.zeros(3, dtype=int), 0, 1)
    with pytest.raises(CharacteristicError):
        quad_corr(F2, 3, qp)


def test_quad_rank0_matches_linear(F3):
    # zero quadratic part with linear part b: equals the linear phase with
    # alpha carrying the codes of b
    rng = np.random.default_rng(12)
    n = 5
    b = rng.integers(0, 3, size=n)
    qp = QuadPhase(F3, np.zeros((n, n), dtype=int), b, 0, 1)
    alpha = LaurentSeries.from_coeff_map(
        F3, {-(i + 1): int(b[i]) for i in range(n)}, n + 1
    )
    r1 = quad_corr(F3, n, qp)
    r2 = linear_corr(F3, n, alpha, "G")
    assert r1.hist == r2.hist


def test_hankel_zero(F3):
    a0 = LaurentSeries.zero(F3, 20)
    assert hankel_corr(F3, 4, a0, None).sum(F3) == -4


def test_hankel_beta_only_matches_linear(F3):
    beta = sample_torus(F3, 31, 8)
    a0 = LaurentSeries.zero(F3, 20)
    r1 = hankel_corr(F3, 5, a0, beta)
    r2 = linear_corr(F3, 5, beta, "G")
    assert r1.hist == r2.hist


def test_hankel_dual_route(F3, F5):
    # explicit squaring route vs quadratic form through the Hankel matrix
    rng = np.random.default_rng(14)
    for ctx in (F3, F5):
        for _ in range(4):
            n = int(rng.integers(2, 6))
            alpha = sample_torus(ctx, rng, 2 * n + 2)
            beta = sample_torus(ctx, rng, n + 1)
            rep = hankel_corr(ctx, n, alpha, beta)  # raises on disagreement
            M = hankel_matrix(alpha, n)
            b = np.array([beta.coefficient(-1 - i) for i in range(n)])
            qp = QuadPhase(ctx, M, b, 0, 1)
            rep2 = quad_corr(ctx, n, qp)
            assert rep.hist == rep2.hist


def test_hankel_char2_works_without_crosscheck(F2):
    alpha = sample_torus(F2, 8, 30)
    beta = sample_torus(F2, 9, 10)
    rep = hankel_corr(F2, 6, alpha, beta)
    assert rep.terms == 64


def test_hankel_squaring_against_poly_squaring(F4):
    # extension field: exponent of e(alpha f^2 + beta f) matches Poly math
    rng = np.random.default_rng(3)
    n = 3
    alpha = sample_torus(F4, rng, 2 * n + 2)
    beta = sample_torus(F4, rng, n + 1)
    ph = HankelPhase(alpha, beta)
    exps = ph.exponents(n, np.arange(4**n, dtype=np.int64))
    for code in range(1, 4**n):
        f = Poly.from_code(F4, code)
        val = alpha.mul_poly(f * f) + beta.mul_poly(f)
        assert int(exps[code]) == val.e_exponent()


def test_periodic_constant_function(F2):
    F = lambda cls: 1.0
    assert abs(periodic_corr(F2, 4, 1, Poly.t(F2), F)) < 1e-12
    # n = 1: sum of mu over A_1 is -q
    assert abs(periodic_corr(F2, 1, 1, Poly.t(F2), F) + 2) < 1e-12


def test_periodic_character_matches_lpoly(F2):
    # F = a Hayes character: the sum follows the 1/L coefficient route
    g = build_group(F2, 1, Poly.t(F2))
    lam = list(g.characters())[1]
    L = g.exponent_lcm

    def Fv(cls):
        idx = g.index.get(cls)
        if idx is None:
            return 0j
        return np.exp(2j * np.pi * lam.exponent_on_index(idx) / L)

    for n in (1, 2, 3, 4):
        s = periodic_corr(F2, n, 1, Poly.t(F2), Fv)
        assert abs(s - 1) < 1e-9  # 1/(1-z) coefficients


def test_periodic_table_incomplete(F2):
    with pytest.raises(ValueError):
        periodic_corr(F2, 3, 1, Poly.t(F2), {})


def test_periodic_route_random(F2):
    for seed in (1, 2, 3, 4, 5):
        alpha = sample_torus(F2, seed, 12)
        direct, periodic, l, g = periodic_route_check(F2, 8, alpha)
        assert abs(direct - periodic) < 1e-9
        assert l == 8 - 4 - int(g.deg)


def test_exponent_sweep_deterministic(F2):
    rows1 = exponent_sweep(F2, "linear", range(3, 7), 5, seed=42)
    rows2 = exponent_sweep(F2, "linear", range(3, 7), 5, seed=42)
    assert rows1 == rows2
    rows3 = exponent_sweep(F2, "linear", range(3, 7), 5, seed=43)
    assert rows3 != rows1


def test_exponent_sweep_empty(F2):
    assert exponent_sweep(F2, "linear", range(3, 5), 0, seed=0) == []


def test_exponent_sweep_triangle_bound(F3):
    rows = exponent_sweep(F3, "hankel", range(2, 5), 4, seed=7)
    for n, samples, mx, mean, expo in rows:
        assert mx <= 3**n
        assert mean <= mx


def test_exponent_sweep_exhaustive_mode(F2):
    rows = exponent_sweep(F2, "linear", [4], 0, seed=0, exhaustive=True)
    assert rows[0][1] == 2**5  # all alphas at precision n+1
