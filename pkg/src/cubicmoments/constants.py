"""Zeta values, truncated Euler products and the explicit constants."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .mollifier import IntervalSchedule, exponent_vectors, weight_a
from .poly import prime_count

EULER_GAMMA = 0.57721566490153286061
XI = complex(-0.5, math.sqrt(3) / 2)


def zeta_q(s: float, q: int) -> float:
    """ζ_q(s) = (1 - q^{1-s})^{-1}."""
    if s <= 1:
        raise ValueError("ζ_q(s) has a pole at s = 1 and no Euler product for s ≤ 1")
    return 1.0 / (1.0 - q ** (1.0 - s))


@dataclass(frozen=True)
class EulerProductTrunc:
    """A product over F_q-primes of degree ≤ d_max, with a bound on the remaining factors."""

    value: float
    d_max: int
    tail: float  # bound on |full - value|

    @property
    def interval(self) -> tuple[float, float]:
        return self.value - self.tail, self.value + self.tail


def _euler(q: int, d_max: int, log_factor, dev_bound, tail_terms: int = 400) -> EulerProductTrunc:
    """∏_{n ≤ d_max} factor(n)^{π(n)}; tail from π(n) ≤ q^n/n and |log f| ≤ 2·dev for dev ≤ 1/2."""
    logv = sum(prime_count(n, q) * log_factor(n) for n in range(1, d_max + 1))
    tail = 0.0
    for n in range(d_max + 1, d_max + 1 + tail_terms):
        dev = dev_bound(n)
        if dev > 0.5:
            return EulerProductTrunc(math.exp(logv), d_max, math.inf)
        step = (q ** n / n) * 2 * dev
        tail += step
        if step < 1e-18 * max(tail, 1e-300):
            break
    v = math.exp(logv)
    return EulerProductTrunc(v, d_max, v * math.expm1(tail) if tail < 700 else math.inf)


def a_nk(x: float, u: float, q: int, d_max: int = 8) -> EulerProductTrunc:
    """𝒜_nK(x,u): odd-degree factors 1/(1+x^n), even ones (1+2y(1-u^n))/(1+y)^2 with y = x^{n/2}."""
    if not abs(x) < 1 / q:
        raise ValueError("𝒜_nK needs |x| < 1/q")

    def logf(n):
        if n % 2:
            return -math.log1p(x ** n)
        y = x ** (n / 2)
        return math.log1p(2 * y * (1 - u ** n)) - 2 * math.log1p(y)

    def dev(n):
        if n % 2:
            return abs(x) ** n
        y = abs(x) ** (n / 2)
        return y * y + 2 * y * abs(u) ** n + 2 * y * y

    return _euler(q, d_max, logf, dev)


def m_r(deg: int, x: float, u: float) -> float:
    """M_R(x,u) = 1/(1 + 2x^{deg R/2}(1 - u^{deg R})), R of even degree."""
    return 1.0 / (1.0 + 2 * x ** (deg / 2) * (1 - u ** deg))


def c3(q: int, d_max: int = 8) -> EulerProductTrunc:
    """∏_odd (1 - |R|^{-2}) ∏_even (1 - 3|R|^{-2} + 2|R|^{-3})."""
    if d_max < 2:
        raise ValueError("c3 needs d_max ≥ 2")

    def logf(n):
        r = float(q) ** -n
        return math.log1p(-r * r) if n % 2 else math.log1p(-3 * r * r + 2 * r ** 3)

    return _euler(q, d_max, logf, lambda n: 3.0 * float(q) ** (-2 * n))


def eta_const(terms: int = 2000) -> float:
    """η = 2Σ_{h≥3} 5^{-h/6}/√h."""
    return 2 * math.fsum(5 ** (-h / 6) / math.sqrt(h) for h in range(3, terms))


def s_k_const(k: int) -> float:
    """𝒮_k = e^{3k} + (4·k!·e^{k(γ+2)}/3)(25/9)^k."""
    return math.exp(3 * k) + 4 * math.factorial(k) * math.exp(k * (EULER_GAMMA + 2)) / 3 * (25 / 9) ** k


def s_k_series(k: int, q: int = 5, beta: float = 2.0, terms: int = 400) -> float:
    """The unsimplified bound exp(k + 2k/(β-1)) + (3e^{k(γ+1)}/4)Σ_m exp(k log m + 2k/(β^m(β-1))) β^{4m}/q^{2m}."""
    tot = math.exp(k + 2 * k / (beta - 1))
    acc = math.fsum(math.exp(k * math.log(m) + 2 * k / (beta ** m * (beta - 1))) * (beta ** 4 / float(q) ** 2) ** m
                    for m in range(1, terms))
    return tot + 0.75 * math.exp(k * (EULER_GAMMA + 1)) * acc


def log_dk_const(k: float, ells) -> float:
    """log 𝒟_k, 𝒟_k = (1+e^{-ℓ_0/2})^2 ∏_{r≥1}(1+e^{-ℓ_r/2})^2(1 + e^{16k^2}/2^{ℓ_r})."""
    ells = list(ells)
    out = 2 * math.log1p(math.exp(-ells[0] / 2))
    for ell in ells[1:]:
        out += 2 * math.log1p(math.exp(-ell / 2))
        t = 16 * k * k - ell * math.log(2)
        out += t + math.log1p(math.exp(-t)) if t > 0 else math.log1p(math.exp(t))
    return out


def dk_const(k: float, sched: IntervalSchedule) -> float:
    return math.exp(log_dk_const(k, sched.ells))


# ---- explicit optimization ------------------------------------------------------

def golden_section(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 500) -> float:
    inv = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            return (a + b) / 2
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    raise ArithmeticError("golden-section search did not converge")


def _x(d: float) -> float:
    e = math.e
    return math.log(40 * d * e / ((d - 8) * (e - 1)))


def section7_objective(d: float) -> float:
    """(de + x)/(1 - (d-8)(e-1)/(5e)), minimized over d > 8."""
    e = math.e
    return (d * e + _x(d)) / (1 - (d - 8) * (e - 1) / (5 * e))


@dataclass
class Section7Result:
    k: float
    kappa: float
    a: float
    b: float
    c: float
    d: float
    x: float
    log_inv_theta_J: float
    theta_J: float
    alpha: float
    F: float
    R1: float
    R2: float
    log_CJ: float
    log_bound: float
    exponent: float
    constraints: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def optimize_section7(k: float = 2, kappa: float = 1, lo: float = 8.0, hi: float = 20.0,
                      tol: float = 1e-10) -> Section7Result:
    """Golden-section minimization on d ∈ (8, 20] and the parameter chain it determines."""
    e = math.e
    d = golden_section(section7_objective, lo + 1e-9, hi, tol)
    if not lo < d < hi - 1e-6:
        raise ArithmeticError(f"optimum d = {d} sits on the search boundary")
    c = 2 - 2 * (d - 8) * (e - 1) / (5 * e)
    x = _x(d)
    b = 1 - c * x / (6 * (d * e + x))
    a = 4 / (2 - c)
    alpha = 2 * b - 2 + c / 3
    lt = 2 * d * e / alpha
    theta_chain = ((d - 8) / (40 * d) * (1 - 1 / e)) ** (1 / (1 - b))
    theta = math.exp(-lt)
    F = k ** 2 * math.exp(2 + c / 3) * 5 ** (c / 3) / (4 * d ** (2 - c / 3) * c ** (c / 3))
    R1 = k * e - alpha / (2 * d) * lt + math.log(F) / (2 * d)
    R2 = alpha / (2 * d)
    big = math.log(R2) + R1 / R2 - 1 + lt  # log of R2 e^{R1/R2-1}/θ_J
    X = math.exp(big)
    r = 4 * R1 / R2
    log_cj = X + math.log(r * (r + 1)) + k * k * R1 / (2 * R2)  # e^{-4R1/R2} is negligible next to this
    eta = eta_const()
    # schedule ℓ_r = 2⌊θ_r^{-b}⌋, θ_r = θ_J e^{r-J}: all but the last few ℓ_r are astronomically large
    ells = []
    for back in range(0, 200):
        t = theta * math.exp(-back)
        ells.append(2 * math.floor(min(t ** -b, 1e300)))
    log_dk = log_dk_const(k, list(reversed(ells)))
    log_sk = math.log(s_k_const(int(k)))
    inner = np.logaddexp(k / theta, 0.25 * math.log(24 / c) + log_cj)
    log_bound = 0.5 * log_dk + 0.5 * log_sk + 1.5 * k * k + (1 + eta) * k + float(inner)
    constraints = {
        "a>2": a > 2,
        "d>8": d > 8,
        "4ad*theta_J^(1-b)<=1": 4 * a * d * theta ** (1 - b) <= 1 + 1e-9,
        "c=2-4/a": abs(c - (2 - 4 / a)) < 1e-12,
        "theta_J_chain_rel_gap": abs(math.log(theta_chain) + lt) / lt,
        "R1>0": R1 > 0,
    }
    return Section7Result(k, kappa, a, b, c, d, x, lt, theta, alpha, F, R1, R2, log_cj,
                          log_bound, math.log(log_bound), constraints)


def headline_constants(q: int = 5, res: Section7Result | None = None) -> dict:
    res = optimize_section7() if res is None else res
    z2, z3 = zeta_q(2, q), zeta_q(3, q)
    # 1 - e^{-e^84} is 1 in double precision; kept symbolic in the report
    floor = 1 / (z2 ** 2 * z3)
    ratio_floor = 1 / (z2 ** 3 * z3 ** 2)
    return {
        "exponent": res.exponent,
        "exponent_dominant": math.log(res.R2) + res.R1 / res.R2 - 1 + res.log_inv_theta_J,
        "first_moment_floor": floor,
        "first_moment_floor_ok": floor >= 0.6143,
        "proportion_floor": ratio_floor,
        "proportion_floor_ok": ratio_floor >= 0.4718,
        "count_floor": floor ** 2,
        "count_floor_ok": floor ** 2 >= 0.3773,
        "one_minus_exp_exp84": 1.0 - math.exp(-math.exp(84.0)),
    }


# ---- first-moment constant ---------------------------------------------------------

def _u_local_series(a: float, norm: float, n_p: float, terms: int = 60) -> float:
    """1 + N_P Σ_{e≥1} (-a)^e/e! |P|^{-(3/2)⌈e/3⌉}."""
    s = math.fsum((-a) ** e / math.factorial(e) * norm ** (-1.5 * math.ceil(e / 3)) for e in range(1, terms))
    return 1 + n_p * s


def _u_local_closed(a: float, norm: float, n_p: float) -> float:
    """Roots-of-unity filter of the same series."""
    z = norm ** -0.5
    tot = 0j
    for j in range(3):
        w = XI ** j
        tot += (1 + w * z + w * w * z * z) * np.exp(-w * a * z)
    return 1 + (tot.real / 3 - 1) * n_p


def n_p(deg: int, q: int) -> float:
    return m_r(deg, q ** -2.0, q ** -1.5) if deg % 2 == 0 else 1.0


@dataclass
class FirstMomentConstant:
    A: float
    U_series: float
    U_closed: float
    A_nk: EulerProductTrunc
    T_exact: float
    A_exact: float
    U_floor: float
    zeta_32: float
    zeta_3: float


def u_product(q: int, sched: IntervalSchedule, route: str = "closed") -> float:
    local = _u_local_closed if route == "closed" else _u_local_series
    out = 1.0
    for j in range(sched.J + 1):
        for d in sched.degrees(j):
            a = weight_a(d, sched.J, sched, q)
            out *= local(a, float(q) ** d, n_p(d, q)) ** prime_count(d, q)
    return out


def t_exact(q: int, sched: IntervalSchedule) -> float:
    """∏_r T(r): the Ω(h_r) ≤ ℓ_r truncated sums, computed by a generating polynomial in Ω."""
    out = 1.0
    for j in range(sched.J + 1):
        ell = sched.ells[j]
        poly = np.zeros(ell + 1)
        poly[0] = 1.0
        for d in sched.degrees(j):
            a = weight_a(d, sched.J, sched, q)
            norm = float(q) ** d
            local = np.zeros(ell + 1)
            local[0] = 1.0
            for e in range(1, ell + 1):
                local[e] = n_p(d, q) * (-a) ** e / math.factorial(e) * norm ** (-1.5 * math.ceil(e / 3))
            for _ in range(prime_count(d, q)):
                poly = np.convolve(poly, local)[: ell + 1]
        out *= float(poly.sum())
    return out


def first_moment_constant(q: int, sched: IntervalSchedule, d_max: int = 10) -> FirstMomentConstant:
    """A = ζ_q(3/2)ζ_q(3)^{-1}𝒜_nK(q^{-2}, q^{-3/2})𝒰, with 𝒰 over deg P ≤ (g+2)θ_J."""
    anka = a_nk(q ** -2.0, q ** -1.5, q, d_max)
    z32, z3 = zeta_q(1.5, q), zeta_q(3, q)
    us = u_product(q, sched, "series")
    uc = u_product(q, sched, "closed")
    base = z32 / z3 * anka.value
    te = t_exact(q, sched)
    return FirstMomentConstant(base * uc, us, uc, anka, te, base * te, 1 / z32, z32, z3)
