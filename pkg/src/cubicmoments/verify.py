"""The identity suites behind ``cubicmoments verify``.

Each suite returns a :class:`SuiteResult`; a suite passes when it records no
failures.  Randomness comes from one seeded ``random.Random`` per suite.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass

import numpy as np

from .characters import XI, check_reciprocity, symbol
from .gauss import gauss_sum, root_number_candidates
from .lseries import afe_check, family_l_polynomials, root_number, rh_check
from .mollifier import e_trunc, linear_term_check, nu_trunc_bounds, power_identity_check
from .moments import FamilyData, orthogonality_check, sound_inequality_check
from .poly import factor_raw, pgcd, pmul, ppow, random_monic_raw

SUITES = ("afe", "rh", "root-number", "reciprocity", "gauss-laws", "orthogonality", "combinatorics", "log-bound")

ANCHORS = {
    "afe": "approximate functional equation for primitive cubic characters",
    "rh": "curve zeta polynomial: trivial zero at u=1 and zeros on |u| = q^{-1/2}",
    "root-number": "functional-equation root number is unimodular and equals a normalized Gauss sum",
    "reciprocity": "cubic reciprocity for monic coprime pairs over F_{q^2}",
    "gauss-laws": "Gauss-sum twisting law and twisted multiplicativity",
    "orthogonality": "sum over monic R of degree g/2+1 of chi_R(c)",
    "combinatorics": "power expansions of prime sums, truncated exponential inequality, kappa-independent linear term",
    "log-bound": "upper bound for log|L(1/2,chi)| by a short prime sum, all N <= g+2",
}


@dataclass
class SuiteResult:
    name: str
    checked: int
    failures: int
    max_error: float
    seconds: float
    anchor: str
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        d["ok"] = self.ok
        return d

    def row(self) -> str:
        return "\t".join([self.name, "PASS" if self.ok else "FAIL", str(self.checked), str(self.failures),
                          f"{self.max_error:.3e}"])


def _finish(name, t0, checked, failures, err, note=""):
    return SuiteResult(name, checked, failures, float(err), time.perf_counter() - t0, ANCHORS[name], note)


def _random_squarefree(rng, K, d):
    while True:
        f = random_monic_raw(rng, K.size, d)
        if all(e == 1 for _, e in factor_raw(K, f)):
            return f


def suite_afe(data: FamilyData, tol: float = 1e-9) -> SuiteResult:
    t0 = time.perf_counter()
    worst, bad, n = 0.0, 0, 0
    for L in family_l_polynomials(data.fam, data.coeffs):
        for X in range(data.g + 1):
            r = afe_check(L, X)
            worst = max(worst, r)
            bad += r >= tol
            n += 1
    return _finish("afe", t0, n, bad, worst)


def suite_rh(data: FamilyData, tol: float = 1e-6) -> SuiteResult:
    t0 = time.perf_counter()
    worst, bad = 0.0, 0
    memo: dict[tuple, float] = {}
    polys = family_l_polynomials(data.fam, data.coeffs)
    for L in polys:
        if L.at_one() != (0, 0):
            bad += 1
            continue
        key = L.coeffs
        if key not in memo:
            z = rh_check(L)
            memo[key] = z.max_radius_error
            memo[L.conj().coeffs] = z.max_radius_error
        worst = max(worst, memo[key])
        bad += memo[key] >= tol
    return _finish("rh", t0, len(polys), bad, worst)


def suite_root_number(data: FamilyData, samples: int = 20, seed: int = 0, tol: float = 1e-9) -> SuiteResult:
    t0 = time.perf_counter()
    polys = family_l_polynomials(data.fam, data.coeffs)
    worst, bad = 0.0, 0
    for L in polys:
        err = root_number(L).modulus_error
        worst = max(worst, err)
        bad += err >= tol
    rng = random.Random(seed)
    picks = rng.sample(range(len(polys)), min(samples, len(polys)))
    for i in picks:
        w = root_number(polys[i]).value
        cand = root_number_candidates(data.ctx, data.fam.moduli[i])["fq2_modulus"]
        err = abs(w - cand)
        worst = max(worst, err)
        bad += err >= tol
    return _finish("root-number", t0, len(polys) + len(picks), bad, worst,
                   "omega = q^{-g/2-1} G(1,F) over F_{q^2} on sampled members")


def suite_reciprocity(ctx, pairs: int = 1000, max_deg: int = 4, seed: int = 0) -> SuiteResult:
    t0 = time.perf_counter()
    rng = random.Random(seed)
    K = ctx.Fq2
    bad = n = 0
    while n < pairs:
        a = random_monic_raw(rng, K.size, rng.randint(1, max_deg))
        b = random_monic_raw(rng, K.size, rng.randint(1, max_deg))
        if len(pgcd(K, a, b)) > 1:
            continue
        bad += not check_reciprocity(ctx, a, b)
        n += 1
    return _finish("reciprocity", t0, n, bad, 0.0)


def suite_gauss_laws(ctx, twists: int = 500, products: int = 200, seed: int = 0, tol: float = 1e-9) -> SuiteResult:
    """G(AV,F) = χ̄_F(A)G(V,F) and G(V,F₁F₂) = χ_{F₁}(F₂)²G(V,F₁)G(V,F₂)."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    K = ctx.Fq2
    lut = np.array([1, XI, XI * XI, 0])
    worst, bad = 0.0, 0
    n = 0
    while n < twists:
        F = _random_squarefree(rng, K, rng.randint(1, 2))
        A = random_monic_raw(rng, K.size, rng.randint(0, 3))
        V = random_monic_raw(rng, K.size, rng.randint(0, 3))
        if len(pgcd(K, A, F)) > 1:
            continue
        lhs = gauss_sum(ctx, pmul(K, A, V), F).value
        chi = lut[symbol(ctx, F, A)]
        err = abs(lhs - np.conj(chi) * gauss_sum(ctx, V, F).value)
        worst, bad, n = max(worst, err), bad + (err >= tol), n + 1
    m = 0
    while m < products:
        F1 = _random_squarefree(rng, K, 1)
        F2 = _random_squarefree(rng, K, rng.randint(1, 2))
        V = random_monic_raw(rng, K.size, rng.randint(0, 2))
        if len(pgcd(K, F1, F2)) > 1:
            continue
        lhs = gauss_sum(ctx, V, pmul(K, F1, F2)).value
        chi = lut[symbol(ctx, F1, F2)]
        err = abs(lhs - chi ** 2 * gauss_sum(ctx, V, F1).value * gauss_sum(ctx, V, F2).value)
        worst, bad, m = max(worst, err), bad + (err >= tol), m + 1
    return _finish("gauss-laws", t0, n + m, bad, worst)


def suite_orthogonality(ctx, g: int, count: int = 100, seed: int = 0) -> SuiteResult:
    t0 = time.perf_counter()
    rng = random.Random(seed)
    K = ctx.Fq2
    n = g // 2 + 1
    bad = cubes = 0
    worst = 0.0
    for i in range(count):
        if i % 2 == 0:
            c = ppow(K, random_monic_raw(rng, K.size, rng.randint(0, n)), 3)
        else:
            c = random_monic_raw(rng, K.size, rng.randint(1, n))
        r = orthogonality_check(ctx, g, c)
        cubes += r.is_cube
        worst = max(worst, r.residual)
        bad += not r.ok
    return _finish("orthogonality", t0, count, bad, worst, f"{cubes} cubes")


def suite_combinatorics(seed: int = 0, tol: float = 1e-10) -> SuiteResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    bad = n = 0
    worst = 0.0
    for s in range(7):
        for n_primes in (1, 3, 5, 8):
            a = rng.normal(size=n_primes) + 1j * rng.normal(size=n_primes)
            r = power_identity_check(a * 0.5, s)
            worst = max(worst, r.err_power, r.err_real)
            bad += not r.ok
            n += 1
    for kk in (2, 4):
        for kappa in (1.0, 2.0):
            for z in (0.3 + 0.1j, -0.2 + 0.5j):
                k = kk / kappa
                lin, eps, target = linear_term_check(z, 4, k, kappa)
                err = max(abs(lin - target), abs(eps - target))
                worst = max(worst, err)
                bad += err >= tol
                n += 1
    for ell in range(2, 42, 2):
        for t in np.linspace(-10, ell / math.e ** 2, 200):
            slack = (1 + math.exp(-ell / 2)) * e_trunc(ell, float(t)) - math.exp(t)
            bad += slack < -1e-12 * math.exp(t)
            n += 1
    for ex in ((1,), (2,), (1, 1), (3, 1), (2, 2, 1)):
        for nn in (1, 2):
            for ell in (1, 2, 4):
                tr, full = nu_trunc_bounds(list(ex), nn, ell)
                bad += tr > full
                n += 1
    return _finish("combinatorics", t0, n, bad, worst)


def suite_log_bound(data: FamilyData) -> SuiteResult:
    t0 = time.perf_counter()
    bad = n = 0
    worst = -math.inf
    for N in range(1, data.g + 3):
        r = sound_inequality_check(data, N)
        bad += len(r.violations)
        n += r.checked
        worst = max(worst, r.max_excess)
    return _finish("log-bound", t0, n, bad, max(worst, 0.0), f"max(lhs - rhs) = {worst:.4g}")


def run_suites(data: FamilyData, seed: int = 0, only=None) -> list[SuiteResult]:
    ctx = data.ctx
    table = {
        "afe": lambda: suite_afe(data),
        "rh": lambda: suite_rh(data),
        "root-number": lambda: suite_root_number(data, seed=seed),
        "reciprocity": lambda: suite_reciprocity(ctx, seed=seed),
        "gauss-laws": lambda: suite_gauss_laws(ctx, seed=seed),
        "orthogonality": lambda: suite_orthogonality(ctx, data.g, seed=seed),
        "combinatorics": lambda: suite_combinatorics(seed=seed),
        "log-bound": lambda: suite_log_bound(data),
    }
    names = SUITES if only is None else only
    return [table[name]() for name in names]
