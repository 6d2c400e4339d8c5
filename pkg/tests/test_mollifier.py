import functools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cubicmoments.arith import nu_trunc_exponents
from cubicmoments.constants import eta_const
from cubicmoments.family import enumerate_family
from cubicmoments.fields import FieldCtx
from cubicmoments.mollifier import (IntervalSchedule, PrimeTable, check_schedule, d_factor, e_trunc,
                                    e_trunc_gap, exponent_vectors, linear_term_check, mollifier_eval,
                                    mollifier_poly, mollifier_support, nu_trunc_bounds,
                                    power_identity_check, prime_sum, prime_sum_bound, prop_cases_check,
                                    s_factor, weight_a, weight_b)


@pytest.fixture(scope="module")
def pt2(fam2):
    return PrimeTable.of_family(fam2)


def test_desk_schedule_values():
    s = IntervalSchedule.desk(2)
    assert [round(t, 4) for t in s.thetas] == [0.0677, 0.1839, 0.5]
    assert s.ells == (22, 8, 2)
    assert s.degrees(0) == [] and s.degrees(1) == [] and s.degrees(2) == [1, 2]
    s4 = IntervalSchedule.desk(4)
    assert s4.degrees(1) == [1] and s4.degrees(2) == [2, 3]


def test_desk_hypothesis_flagged():
    rep = check_schedule(IntervalSchedule.desk(4))
    assert rep.value == pytest.approx(11.88, abs=0.01)
    assert not rep.holds


def test_schedule_validation():
    with pytest.raises(ValueError):
        IntervalSchedule(2, (0.5, 0.2), (2, 2))
    with pytest.raises(ValueError):
        IntervalSchedule(2, (0.5,), (3,))
    with pytest.raises(ValueError):
        IntervalSchedule(2, (0.5,), (2,), b=1.5)


def test_paper_schedule():
    s = IntervalSchedule.paper(100)
    assert all(t2 > t1 for t1, t2 in zip(s.thetas, s.thetas[1:]))
    assert all(e % 2 == 0 for e in s.ells)
    assert s.thetas[-1] <= 0.5 < s.thetas[-1] * math.e
    # θ_j = e^j/(log g)^1000 on the kept indices
    L = 1000 * math.log(math.log(100))
    j = s.first_index + 5
    assert s.thetas[5] == pytest.approx(math.exp(j - L))
    # every low interval is empty; only the last few carry primes
    nonempty = [j for j in range(s.J + 1) if s.degrees(j)]
    assert nonempty and min(nonempty) > s.J - 5
    assert not check_schedule(s).holds
    with pytest.raises(ValueError):
        IntervalSchedule.paper(2)


def test_weight_a():
    s = IntervalSchedule(2, (1.0,), (2,))  # N = 4
    assert weight_a(4, 0, s, 5) == 0
    vals = [weight_a(d, 0, s, 5) for d in (1, 2, 3, 4)]
    assert all(0 <= v < 1 for v in vals)
    assert vals == sorted(vals, reverse=True)
    with pytest.raises(ValueError):
        weight_a(5, 0, s, 5)


def test_weight_b_bounded():
    s = IntervalSchedule(2, (1.0,), (2,))
    assert weight_b(2, 0, s, 5) == 0
    assert 0 < weight_b(1, 0, s, 5) <= 0.5
    with pytest.raises(ValueError):
        weight_b(3, 0, s, 5)


def test_e_trunc_values():
    assert e_trunc(2, 0.0) == 1
    assert e_trunc(2, 1.0) == 2.5
    assert math.e <= (1 + math.exp(-1)) * 2.5
    with pytest.raises(ValueError):
        e_trunc(3, 1.0)


@pytest.mark.parametrize("ell", range(2, 42, 2))
def test_e_trunc_inequality_grid(ell):
    t = np.linspace(-10, ell / math.e ** 2, 400)
    gaps = np.array([e_trunc_gap(ell, x) for x in t])
    assert np.all(gaps >= -1e-12 * np.exp(t))
    assert np.all(e_trunc(ell, np.linspace(-60, 60, 241)) > 0)


@given(st.floats(-50, 50), st.sampled_from([2, 4, 6, 8]))
def test_e_trunc_positive(t, ell):
    assert e_trunc(ell, t) > 0


def test_prime_sum_triangle(pt2):
    s = IntervalSchedule.desk(2)
    v = prime_sum(pt2, 2, 2, s)
    assert np.all(np.abs(v) <= prime_sum_bound(pt2, 2, 2, s) + 1e-12)


def test_empty_interval_factors(pt2):
    s = IntervalSchedule(2, (0.1, 0.2), (2, 4))  # N = 0.4, 0.8: no degrees
    d = d_factor(pt2, 1, 1.0, s)
    assert np.allclose(d, (1 + math.exp(-1)) * (1 + math.exp(-2)))
    assert np.allclose(s_factor(pt2, 1, 1.0, s), 1.0)
    assert np.allclose(mollifier_eval(pt2, s).M, 1.0)


def test_s_factor_conjugate_symmetric(fam2, pt2):
    s = IntervalSchedule(2, (1.0,), (2,))
    v = s_factor(pt2, 0, 2.0, s)
    assert np.all(v > 0)
    assert np.allclose(v[fam2.conj_index], v)


def _sums_by_omega(a, ell):
    out = []
    for m in range(ell + 1):
        E = exponent_vectors(len(a), m, exact=True)
        nu = 1 / np.prod([[math.factorial(x) for x in row] for row in E], axis=1) if len(E[0]) else np.ones(len(E))
        mono = np.prod(np.where(E > 0, a[None, :] ** E, 1), axis=1)
        out.append(np.sum(mono * nu))
    return out


def test_d_factor_dirichlet_expansion(fam2, pt2):
    # ℓ ≤ 4: E_ℓ(k Re P) = Σ_{Ω(f)+Ω(h)≤ℓ} (k/2)^{Ω(fh)} a(f)ā(h)ν(f)ν(h)
    s = IntervalSchedule(2, (0.4, 1.0), (4, 2))
    k = 1.5
    got = d_factor(pt2, 1, k, s)
    for i in range(0, len(fam2), 53):
        total = 1.0
        for r in range(2):
            cols = pt2.select(s.degrees(r))
            deg = pt2.degrees[cols]
            a = np.array([weight_a(int(d), 1, s, 5) * 5 ** (-d / 2) for d in deg]) * pt2.values(cols)[i]
            S = _sums_by_omega(a, s.ells[r])
            ell = s.ells[r]
            val = sum((k / 2) ** (m + n) * S[m] * np.conj(S[n])
                      for m in range(ell + 1) for n in range(ell + 1 - m))
            total *= (1 + math.exp(-ell / 2)) * val.real
        assert got[i] == pytest.approx(total, rel=1e-10)


def test_mollifier_routes_agree(pt2):
    s = IntervalSchedule.desk(2)
    a = mollifier_eval(pt2, s, route="exp")
    b = mollifier_eval(pt2, s, route="dirichlet")
    assert np.max(np.abs(a.M - b.M)) < 1e-10
    with pytest.raises(ValueError):
        mollifier_eval(pt2, s, route="fft")
    with pytest.raises(ValueError):
        mollifier_eval(pt2, s, kappa=0)


def test_single_interval_hand_expansion(pt2):
    s = IntervalSchedule(2, (0.5,), (2,))
    for kappa in (1.0, 3.0):
        P = prime_sum(pt2, 0, 0, s)
        M = mollifier_eval(pt2, s, kappa).M
        assert np.allclose(M, 1 - P / kappa + P ** 2 / (2 * kappa ** 2), atol=1e-12)


def test_support_expansion_matches_product(pt2):
    s = IntervalSchedule(2, (0.25, 0.5), (2, 2))
    cols, E, coeff = mollifier_support(pt2, s)
    from cubicmoments.mollifier import char_on_support
    direct = char_on_support(pt2, cols, E) @ coeff
    assert np.allclose(direct, mollifier_eval(pt2, s, 1.0).M, atol=1e-12)


@pytest.mark.parametrize("n", [1, 3, 5, 8])
def test_power_identity(n):
    rng = np.random.default_rng(n)
    for s in range(7):
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        assert power_identity_check(a * 0.3, s).ok
    with pytest.raises(ValueError):
        power_identity_check(np.ones(9), 2)


@pytest.mark.parametrize("k,kappa", [(2, 1), (4, 1), (1, 2), (2, 2)])
def test_linear_term_independent_of_kappa(k, kappa):
    for z in (0.3 + 0.1j, -0.2 + 0.4j):
        lin, poly, target = linear_term_check(z, 4, k, kappa)
        assert abs(lin - target) < 1e-12
        assert abs(poly - target) < 1e-12


def test_linear_term_odd_raises():
    with pytest.raises(ValueError):
        linear_term_check(0.1, 2, 1, 1.0)


def test_nu_trunc_termwise_bound():
    for exps in [(1,), (2, 1), (3,), (2, 2, 1)]:
        for n in (1, 2, 3):
            for ell in (1, 2, 4):
                t, full = nu_trunc_bounds(exps, n, ell)
                assert t <= full


@pytest.mark.parametrize("kappa", [1.0, 2.0])
def test_mj_power_expansion(pt2, kappa):
    # |M_j|^4 = |Σ λ(f)a(f)ν_2(f;ℓ)χ(f)/(κ^Ω √|f|)|^2, kκ = 4
    s = IntervalSchedule(2, (0.3,), (2,))
    M = mollifier_eval(pt2, s, kappa, route="dirichlet").Mj[:, 0]
    cols = pt2.select(s.degrees(0))
    E = exponent_vectors(len(cols), 4)
    a = np.array([weight_a(int(d), 0, s, 5) for d in pt2.degrees[cols]])
    omega = E.sum(axis=1)
    nu2 = np.array([float(nu_trunc_exponents([x for x in row if x], 2, 2)) for row in E])
    coeff = np.prod(a[None, :] ** E, axis=1) * (-1.0) ** omega * nu2 / kappa ** omega * 5.0 ** (-(E @ pt2.degrees[cols]) / 2)
    from cubicmoments.mollifier import char_on_support
    sq = char_on_support(pt2, cols, E) @ coeff
    assert np.allclose(sq, M ** 2, atol=1e-12)
    assert np.allclose(np.abs(sq) ** 2, np.abs(M) ** 4, atol=1e-12)


def test_prop_cases_holds_on_family(data2):
    s = IntervalSchedule.desk(2)
    rep = prop_cases_check(data2.pt, np.abs(data2.L), 1.0, s)
    assert rep.holds
    assert sum(rep.counts().values()) == 480


def test_prop_cases_empty_schedule(data2):
    s = IntervalSchedule(2, (0.2,), (2,))
    rep = prop_cases_check(data2.pt, np.abs(data2.L), 1.0, s)
    assert np.all(rep.case == 2)
    assert np.allclose(rep.bound, math.exp(1 / 0.2 + eta_const()) * (1 + math.exp(-1)))
    assert rep.holds


def test_prop_cases_odd_s_raises(data2):
    s = IntervalSchedule.desk(2)
    with pytest.raises(ValueError):
        prop_cases_check(data2.pt, np.abs(data2.L), 1.0, s, s=[2, 3, 2])


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 1.0), st.sampled_from([2, 4, 6]))
def test_mollifier_routes_property(theta, ell):
    # routes agree for any single-interval schedule at g = 0 (table degree 2)
    pt = PrimeTable.of_family(_fam0())
    s = IntervalSchedule(0, (theta,), (ell,))
    a = mollifier_eval(pt, s, route="exp").M
    b = mollifier_eval(pt, s, route="dirichlet").M
    assert np.allclose(a, b, atol=1e-10)


@functools.lru_cache(maxsize=1)
def _fam0():
    return enumerate_family(FieldCtx(5), 0)
