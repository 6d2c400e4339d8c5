import math

import pytest
from hypothesis import given, strategies as st

from cubicmoments.constants import (a_nk, c3, dk_const, eta_const, first_moment_constant,
                                    headline_constants, log_dk_const, optimize_section7, s_k_const,
                                    s_k_series, zeta_q)
from cubicmoments.mollifier import IntervalSchedule
from cubicmoments.poly import primes_upto


@pytest.fixture(scope="module")
def sec7():
    return optimize_section7()


def test_zeta_values():
    assert zeta_q(2, 5) == pytest.approx(1.25)
    assert zeta_q(3, 5) == pytest.approx(25 / 24)
    # geometric series oracle Σ_d q^d q^{-sd}
    assert zeta_q(2, 5) == pytest.approx(sum(5.0 ** (-d) for d in range(200)))
    with pytest.raises(ValueError):
        zeta_q(1, 5)


def test_eta():
    assert eta_const() == pytest.approx(1.676972, abs=1e-6)


def test_s2():
    assert s_k_const(2) == pytest.approx(3967.15, abs=0.01)
    # the unsimplified series it bounds
    assert s_k_series(2) <= s_k_const(2)


def test_c3_range_and_bound():
    v = c3(5, 8)
    assert 0.76 < v.value < 0.79
    assert v.value <= 1 / zeta_q(2, 5)
    assert round(c3(5, 8).value, 3) == round(c3(5, 12).value, 3)


def test_c3_against_prime_enumeration(ctx):
    # product over explicitly enumerated primes, D = 4; even-degree primes split over F_25
    prod = 1.0
    for P in primes_upto(ctx.Fq, 4):
        n = 5.0 ** (len(P) - 1)
        prod *= 1 - 3 / n ** 2 + 2 / n ** 3 if (len(P) - 1) % 2 == 0 else 1 - 1 / n ** 2
    assert c3(5, 4).value == pytest.approx(prod, rel=1e-12)


def test_euler_tail_bounds():
    for f in (lambda d: c3(5, d), lambda d: a_nk(5 ** -2, 5 ** -1.5, 5, d)):
        lo, hi = f(6), f(8)
        assert abs(lo.value - hi.value) <= lo.tail
        assert hi.tail <= lo.tail


def test_a_nk():
    assert a_nk(0.0, 0.3, 5).value == 1
    v = a_nk(5 ** -2, 5 ** -1.5, 5)
    assert v.value >= zeta_q(2, 5) ** -2
    with pytest.raises(ValueError):
        a_nk(0.3, 0.1, 5)


def test_dk_limit():
    assert dk_const(2, IntervalSchedule(2, (0.1, 0.2), (10 ** 6, 10 ** 6))) == pytest.approx(1.0)
    assert log_dk_const(1, [2, 2]) > 0


def test_section7_values(sec7):
    assert sec7.d == pytest.approx(8.15, abs=0.01)
    assert sec7.b == pytest.approx(0.91, abs=0.005)
    assert sec7.c == pytest.approx(1.96, abs=0.005)
    assert sec7.log_inv_theta_J == pytest.approx(92.65, abs=0.1)
    assert 181 <= sec7.exponent <= 183


def test_section7_constraints(sec7):
    c = sec7.constraints
    assert c["a>2"] and c["d>8"] and c["4ad*theta_J^(1-b)<=1"] and c["c=2-4/a"] and c["R1>0"]
    assert c["theta_J_chain_rel_gap"] < 1e-3


def test_section7_boundary_raises():
    with pytest.raises(ArithmeticError):
        optimize_section7(lo=8.0, hi=8.1)


def test_headline_floors(sec7):
    h = headline_constants(5, sec7)
    assert h["first_moment_floor"] == pytest.approx((1 - 1 / 5) ** 2 * (1 - 1 / 25))
    assert h["first_moment_floor"] >= 0.6143 and h["first_moment_floor_ok"]
    assert h["proportion_floor"] == pytest.approx((1 - 1 / 5) ** 3 * (1 - 1 / 25) ** 2)
    assert h["proportion_floor"] >= 0.4718 and h["proportion_floor_ok"]
    assert h["count_floor_ok"]
    assert 181 <= h["exponent"] <= 183


def test_first_moment_constant_empty_schedule():
    s = IntervalSchedule.empty(2)
    fm = first_moment_constant(5, s)
    assert fm.U_closed == 1 and fm.U_series == 1
    assert fm.A == pytest.approx(zeta_q(1.5, 5) / zeta_q(3, 5) * fm.A_nk.value)


@pytest.mark.parametrize("g", [2, 4, 6])
def test_u_routes_and_floor(g):
    fm = first_moment_constant(5, IntervalSchedule.desk(g))
    assert fm.U_series == pytest.approx(fm.U_closed, rel=1e-12)
    assert fm.U_closed >= fm.U_floor


@given(st.floats(0.0, 0.19), st.floats(-0.5, 0.5))
def test_a_nk_positive(x, u):
    assert a_nk(x, u, 5, 6).value > 0
