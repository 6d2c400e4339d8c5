import cmath
import random

import numpy as np
import pytest

from cubicmoments.characters import MU3, ZERO, mu_conj, mu_pow, symbol
from cubicmoments.gauss import (TSV_HEADER, HayesCtx, cube_decomposition, gauss_series, gauss_sum,
                                gauss_sum_degree_total, hayes_e, perron_coeff, rho,
                                root_number_candidates, tau_chi3)
from cubicmoments.poly import (factor_raw, padd, pgcd, pmul, primes_upto, random_monic_raw)


def rand_sqfree(rng, K, d):
    while True:
        F = random_monic_raw(rng, K.size, d)
        if all(e == 1 for _, e in factor_raw(K, F)):
            return F


def test_psi_additive_and_nontrivial(ctx):
    H = HayesCtx(ctx)
    K = ctx.Fq2
    assert any(abs(H.psi(a) - 1) > 0.1 for a in range(25))
    for a in range(25):
        for b in range(0, 25, 4):
            assert abs(H.psi(K.add(a, b)) - H.psi(a) * H.psi(b)) < 1e-12


def test_hayes_examples(ctx):
    H = HayesCtx(ctx)
    K = ctx.Fq2
    F = (3, 1, 1)
    assert hayes_e(H, pmul(K, F, (4, 7)), F) == 1
    assert hayes_e(H, (6,), F) == 1  # residue has degree 0 < deg F - 1
    with pytest.raises(ValueError):
        hayes_e(H, (1,), ())


def test_hayes_additive_in_v(ctx):
    H = HayesCtx(ctx)
    K = ctx.Fq2
    rng = random.Random(0)
    for _ in range(100):
        F = random_monic_raw(rng, 25, rng.randint(1, 3))
        V1 = random_monic_raw(rng, 25, rng.randint(0, 4))
        V2 = random_monic_raw(rng, 25, rng.randint(0, 4))
        lhs = hayes_e(H, V1, F) * hayes_e(H, V2, F)
        assert abs(lhs - hayes_e(H, padd(K, V1, V2), F)) < 1e-12


def test_gauss_trivial_modulus(ctx):
    assert gauss_sum(ctx, (3, 1), (1,)).value == 1


def test_gauss_prime_modulus_norm(ctx):
    for P in primes_upto(ctx.Fq2, 2)[::7]:
        G = gauss_sum(ctx, (1,), P).value
        assert abs(abs(G) - 25 ** ((len(P) - 1) / 2)) < 1e-9


def test_methods_agree(ctx):
    rng = random.Random(1)
    for _ in range(15):
        F = random_monic_raw(rng, 25, rng.randint(1, 3))
        V = random_monic_raw(rng, 25, rng.randint(0, 3))
        a = gauss_sum(ctx, V, F, "brute").value
        b = gauss_sum(ctx, V, F, "multiplicative").value
        assert abs(a - b) < 1e-9


def test_bad_inputs(ctx):
    with pytest.raises(ValueError):
        gauss_sum(ctx, (1,), (1, 2))
    with pytest.raises(ValueError):
        gauss_sum(ctx, (1,), (1, 1), level="q")
    with pytest.raises(ValueError):
        gauss_sum(ctx, (1,), (1, 1), method="fft")
    with pytest.raises(ValueError):
        gauss_sum(ctx, (1,), (1, 0, 0, 0, 0, 1), "brute")  # 25^5 residues


def test_twisting_law(ctx):
    K = ctx.Fq2
    rng = random.Random(2)
    n = 0
    while n < 60:
        F = random_monic_raw(rng, 25, rng.randint(1, 2))
        A = random_monic_raw(rng, 25, rng.randint(0, 3))
        if len(pgcd(K, A, F)) > 1:
            continue
        V = random_monic_raw(rng, 25, rng.randint(0, 2))
        chi_bar = mu_conj(symbol(ctx, F, A))
        lhs = gauss_sum(ctx, pmul(K, A, V), F).value
        assert abs(lhs - MU3[chi_bar] * gauss_sum(ctx, V, F).value) < 1e-9
        n += 1


def test_multiplicativity(ctx):
    K = ctx.Fq2
    rng = random.Random(3)
    n = 0
    while n < 40:
        F1 = random_monic_raw(rng, 25, 1)
        F2 = random_monic_raw(rng, 25, rng.randint(1, 2))
        if len(pgcd(K, F1, F2)) > 1:
            continue
        V = random_monic_raw(rng, 25, rng.randint(0, 2))
        t = mu_pow(symbol(ctx, F1, F2), 2)
        lhs = gauss_sum(ctx, V, pmul(K, F1, F2)).value
        rhs = (0 if t == ZERO else MU3[t]) * gauss_sum(ctx, V, F1).value * gauss_sum(ctx, V, F2).value
        assert abs(lhs - rhs) < 1e-9
        n += 1


def test_fq_moduli_real_phase(ctx):
    rng = random.Random(4)
    for _ in range(20):
        F = rand_sqfree(rng, ctx.Fq, rng.randint(1, 2))
        G = gauss_sum(ctx, (1,), F, "multiplicative").value
        assert abs(G - 5 ** (2 * (len(F) - 1) / 2) * cmath.exp(0j)) < 1e-8


def test_perron(ctx):
    ones = [1] * 10
    assert perron_coeff(ones, 7, "up_to_n") == 8
    geo = [5 ** n for n in range(6)]
    assert perron_coeff(geo, 4) == 625
    for n in range(1, 6):
        assert perron_coeff(geo, n, "up_to_n") == perron_coeff(geo, n - 1, "up_to_n") + perron_coeff(geo, n)
    with pytest.raises(ValueError):
        perron_coeff(ones, 10)
    with pytest.raises(ValueError):
        perron_coeff(ones, 2, "contour")


def test_series_coefficient_two_is_brute_sum(ctx):
    K = ctx.Fq2
    f = (1, 1)
    series = gauss_series(ctx, f, 2)
    from cubicmoments.poly import enumerate_monic_raw
    direct = sum(gauss_sum(ctx, f, F).value for F in enumerate_monic_raw(25, 2)
                 if len(pgcd(K, F, f)) == 1)
    assert abs(perron_coeff(series, 2) - direct) < 1e-8


def test_cube_decomposition(ctx):
    K = ctx.Fq2
    P, Q, R = (1, 1), (2, 1), (3, 1)
    f = pmul(K, pmul(K, P, pmul(K, Q, Q)), pmul(K, R, pmul(K, R, R)))
    f1, f2, f3, _ = cube_decomposition(K, f)
    assert (f1, f2, f3) == (P, Q, R)


def test_main_term_pieces(ctx):
    assert rho(ctx, 2) == 0
    assert rho(ctx, 0) == 1
    assert abs(abs(tau_chi3(ctx)) - 5) < 1e-9
    K = ctx.Fq2
    rep = gauss_sum_degree_total(ctx, pmul(K, (1, 1), (1, 1)), 1)
    assert rep.f2 == (1, 1) and rep.main == 0
    assert np.isnan(rep.ratio)
    assert len(rep.tsv_row().split("\t")) == len(TSV_HEADER.split("\t"))


def test_root_number_candidates_include_modulus_form(ctx, fam2, data2):
    from cubicmoments.lseries import family_l_polynomials, root_number
    Ls = family_l_polynomials(fam2, data2.coeffs)
    for i in range(0, len(fam2), 97):
        cand = root_number_candidates(ctx, fam2.moduli[i])
        assert abs(cand["fq2_modulus"] - root_number(Ls[i]).value) < 1e-9
