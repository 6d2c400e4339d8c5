"""Interval schedule, prime sums, truncated exponentials and the mollifier.

All family-level functions take a :class:`PrimeTable`: a list of F_q-primes,
their degrees, and χ on them for a stack of characters.  A :class:`FamilyCg`
is one; :meth:`PrimeTable.of_character` wraps a single character.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .arith import nu_trunc_exponents
from .characters import MU3, ZERO, CubicCharacter
from .poly import primes_upto

_LUT = np.array(list(MU3) + [0j])


# ---- schedule ----------------------------------------------------------------

@dataclass(frozen=True)
class IntervalSchedule:
    """I_j = ((g+2)θ_{j-1}, (g+2)θ_j] with truncation lengths ℓ_j."""

    g: int
    thetas: tuple[float, ...]
    ells: tuple[int, ...]
    b: float = 0.91
    mode: str = "desk"
    kappa: float = 1.0
    first_index: int = 0  # paper mode drops leading θ_j below double range

    def __post_init__(self):
        if len(self.thetas) != len(self.ells) or not self.thetas:
            raise ValueError("schedule needs matching, non-empty θ and ℓ lists")
        if any(t2 <= t1 for t1, t2 in zip(self.thetas, self.thetas[1:])):
            raise ValueError("θ_j must be strictly increasing")
        if any(ell < 2 or ell % 2 for ell in self.ells):
            raise ValueError("ℓ_j must be even and at least 2")
        if not 0 < self.b < 1:
            raise ValueError("b must lie in (0, 1)")
        if self.kappa <= 0:
            raise ValueError("κ must be positive")

    @classmethod
    def desk(cls, g: int, theta_J: float = 0.5, J: int = 2, b: float = 0.91,
             kappa: float = 1.0) -> "IntervalSchedule":
        thetas = tuple(theta_J * math.exp(j - J) for j in range(J + 1))
        ells = tuple(2 * math.floor(t ** -b) for t in thetas)
        return cls(g, thetas, ells, b, "desk", kappa)

    @classmethod
    def paper(cls, g: int, theta_J: float = 0.5, b: float = 0.91, kappa: float = 1.0) -> "IntervalSchedule":
        """θ_j = e^j/(log g)^1000 for j ≤ J, J the largest index with θ_J at most ``theta_J``.

        Indices with θ_j < e^{-690} are dropped (``first_index`` records how
        many): they are not representable and their intervals hold no degree
        for any g below e^{e^{600}}.
        """
        if g < 3:
            raise ValueError("the paper schedule needs g ≥ 3")
        L = 1000 * math.log(math.log(g))
        J = math.floor(L + math.log(theta_J))
        if J < 0:
            raise ValueError("θ_J is below θ_0 for this g")
        j0 = max(0, math.ceil(L - 690))
        if (g + 2) * math.exp(j0 - L) >= 1 and j0 > 0:
            raise ValueError("dropped paper intervals would contain primes")
        js = range(min(j0, J), J + 1)
        thetas = tuple(math.exp(j - L) for j in js)
        ells = tuple(2 * math.floor(math.exp(-b * (j - L))) for j in js)
        return cls(g, thetas, ells, b, "paper", kappa, js.start)

    @classmethod
    def empty(cls, g: int) -> "IntervalSchedule":
        """A one-interval schedule containing no degree at all (M ≡ 1)."""
        return cls(g, (1e-9 / (g + 2),), (2,), 0.91, "desk", 1.0)

    @property
    def J(self) -> int:
        return len(self.thetas) - 1

    def N(self, j: int) -> float:
        return (self.g + 2) * self.thetas[j]

    def bounds(self, j: int) -> tuple[float, float]:
        lo = 0.0 if j == 0 else self.N(j - 1)
        return lo, self.N(j)

    def degrees(self, j: int) -> list[int]:
        lo, hi = self.bounds(j)
        return [d for d in range(1, math.floor(hi + 1e-12) + 1) if d > lo + 1e-12]

    @property
    def max_degree(self) -> int:
        return math.floor(self.N(self.J) + 1e-12)

    def is_empty(self) -> bool:
        return all(not self.degrees(j) for j in range(self.J + 1))

    def hypothesis_sum(self, s: Sequence[int] | None = None) -> float:
        """2Σθ_j s_j + 3Σθ_j ℓ_j, which the averaging lemma needs at most 1/2."""
        s = [0] * (self.J + 1) if s is None else list(s)
        return (2 * sum(t * x for t, x in zip(self.thetas, s))
                + 3 * sum(t * ell for t, ell in zip(self.thetas, self.ells)))

    def to_config(self) -> dict[str, str]:
        return {"mode": self.mode, "J": str(self.J), "theta_J": repr(self.thetas[-1]),
                "b": repr(self.b), "kappa": repr(self.kappa)}


@dataclass(frozen=True)
class HypothesisReport:
    value: float
    holds: bool
    s: tuple[int, ...]
    constants_ok: bool | None = None


def check_schedule(sched: IntervalSchedule, s: Sequence[int] | None = None,
                   a: float | None = None, d: float | None = None) -> HypothesisReport:
    """Flags the averaging-lemma condition, and 4adθ_J^{1-b} ≤ 1 when a, d are given."""
    s = tuple([0] * (sched.J + 1) if s is None else s)
    v = sched.hypothesis_sum(s)
    ok = None
    if a is not None and d is not None:
        ok = a > 2 and d > 8 and 4 * a * d * sched.thetas[-1] ** (1 - sched.b) <= 1
    return HypothesisReport(v, v <= 0.5, s, ok)


# ---- weights -----------------------------------------------------------------

def weight_a(deg: int, u: int, sched: IntervalSchedule, q: int) -> float:
    """a(P;u) = |P|^{-1/(N log q)}(1 - deg P/N), N = (g+2)θ_u."""
    N = sched.N(u)
    if deg < 1 or deg > N + 1e-12:
        raise ValueError(f"degree {deg} outside (0, {N:g}]")
    return q ** (-deg / (N * math.log(q))) * (1 - deg / N)


def weight_a_multi(degs: Sequence[int], u: int, sched: IntervalSchedule, q: int) -> float:
    """Completely multiplicative extension: a(f;u) over the prime degrees of f (with repeats)."""
    out = 1.0
    for d in degs:
        out *= weight_a(d, u, sched, q)
    return out


def weight_b(deg: int, j: int, sched: IntervalSchedule, q: int) -> float:
    """b(P;j) = |P|^{-2/(N log q)}(1 - 2 deg P/N)/2."""
    N = sched.N(j)
    if deg < 1 or 2 * deg > N + 1e-12:
        raise ValueError(f"degree {deg} outside (0, {N / 2:g}]")
    return 0.5 * q ** (-2 * deg / (N * math.log(q))) * (1 - 2 * deg / N)


def e_trunc(ell: int, t):
    """E_ℓ(t) = Σ_{s≤ℓ} t^s/s! for even ℓ (scalar or array t)."""
    if ell % 2 or ell < 0:
        raise ValueError("E_ℓ needs an even ℓ ≥ 0")
    t = np.asarray(t)
    acc = np.ones_like(t, dtype=np.result_type(t, float))
    if not np.any(t):
        return acc if acc.ndim else acc.item()
    term = np.ones_like(acc)
    for s in range(1, ell + 1):
        term = term * t / s
        acc = acc + term
    return acc if acc.ndim else acc.item()


def e_trunc_gap(ell: int, t: float) -> float:
    """(1+e^{-ℓ/2})E_ℓ(t) - e^t; non-negative for t ≤ ℓ/e²."""
    return (1 + math.exp(-ell / 2)) * e_trunc(ell, t) - math.exp(t)


# ---- prime tables ------------------------------------------------------------

@dataclass
class PrimeTable:
    q: int
    primes: list
    degrees: np.ndarray
    table: np.ndarray

    @classmethod
    def of_family(cls, fam) -> "PrimeTable":
        return cls(fam.q, list(fam.fq_primes), np.asarray(fam.fq_degrees), fam.table)

    @classmethod
    def of_character(cls, chi: CubicCharacter, D: int) -> "PrimeTable":
        primes = primes_upto(chi.ctx.Fq, D)
        row = np.array([[chi.value_on_prime(P) for P in primes]], dtype=np.int8)
        return cls(chi.ctx.q, primes, np.array([len(P) - 1 for P in primes]), row)

    def __len__(self) -> int:
        return self.table.shape[0]

    def select(self, degs: Sequence[int]) -> np.ndarray:
        return np.flatnonzero(np.isin(self.degrees, list(degs)))

    def values(self, cols: np.ndarray) -> np.ndarray:
        return _LUT[self.table[:, cols]]

    def check_degree(self, D: float):
        if len(self.degrees) and math.floor(D + 1e-12) > int(self.degrees.max()):
            raise ValueError(f"prime table stops at degree {int(self.degrees.max())}, need {D:g}")


def prime_sum(pt: PrimeTable, j: int, u: int, sched: IntervalSchedule) -> np.ndarray:
    """P_{I_j}(χ;u) = Σ_{P∈I_j} a(P;u)χ(P)/√|P| for every character of the table."""
    degs = sched.degrees(j)
    pt.check_degree(sched.N(j))
    cols = pt.select(degs)
    if not len(cols):
        return np.zeros(len(pt), dtype=complex)
    w = np.array([weight_a(int(d), u, sched, pt.q) * pt.q ** (-d / 2) for d in pt.degrees[cols]])
    return pt.values(cols) @ w


def prime_sum_bound(pt: PrimeTable, j: int, u: int, sched: IntervalSchedule) -> float:
    """Σ_{P∈I_j} a(P;u)/√|P|, the triangle-inequality bound on |P_{I_j}|."""
    cols = pt.select(sched.degrees(j))
    return float(sum(weight_a(int(d), u, sched, pt.q) * pt.q ** (-d / 2) for d in pt.degrees[cols]))


def d_factor(pt: PrimeTable, j: int, k: float, sched: IntervalSchedule) -> np.ndarray:
    """D_{j,k} = ∏_{r≤j}(1+e^{-ℓ_r/2}) E_{ℓ_r}(k Re P_{I_r}(χ;j))."""
    out = np.ones(len(pt))
    for r in range(j + 1):
        ell = sched.ells[r]
        out = out * (1 + math.exp(-ell / 2)) * e_trunc(ell, k * prime_sum(pt, r, j, sched).real)
    return out


def square_prime_sum(pt: PrimeTable, j: int, sched: IntervalSchedule) -> np.ndarray:
    """Σ_{deg P ≤ N_j/2} χ(P) b(P;j)/|P|."""
    half = sched.N(j) / 2
    degs = [d for d in range(1, math.floor(half + 1e-12) + 1)]
    cols = pt.select(degs)
    if not len(cols):
        return np.zeros(len(pt), dtype=complex)
    w = np.array([weight_b(int(d), j, sched, pt.q) * float(pt.q) ** -int(d) for d in pt.degrees[cols]])
    return pt.values(cols) @ w


def s_factor(pt: PrimeTable, j: int, k: float, sched: IntervalSchedule) -> np.ndarray:
    """S_{j,k} = exp(k Re Σ χ(P)b(P;j)/|P|)."""
    return np.exp(k * square_prime_sum(pt, j, sched).real)


# ---- Dirichlet-polynomial supports ------------------------------------------

@lru_cache(maxsize=64)
def exponent_vectors(n: int, max_omega: int, exact: bool = False) -> np.ndarray:
    """All exponent vectors over n primes with total Ω ≤ max_omega (or = when exact)."""
    rows = []
    for total in range(0 if not exact else max_omega, max_omega + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            v = [0] * n
            for i in combo:
                v[i] += 1
            rows.append(v)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def char_on_support(pt: PrimeTable, cols: np.ndarray, E: np.ndarray) -> np.ndarray:
    """χ(f) (complex) for f = ∏ P_i^{E[m,i]} over the primes ``cols``; shape (chars, supports)."""
    V = pt.table[:, cols].astype(np.int64)
    Z = V == ZERO
    expo = (np.where(Z, 0, V) @ E.T) % 3
    dead = (Z.astype(np.int64) @ (E > 0).T.astype(np.int64)) > 0
    return np.where(dead, 0j, _LUT[expo])


def _nu(E: np.ndarray) -> np.ndarray:
    fac = np.array([math.factorial(i) for i in range(int(E.max(initial=0)) + 1)], dtype=float)
    return 1.0 / np.prod(fac[E], axis=1)


@dataclass(frozen=True)
class DirichletPoly:
    """Σ_m coeff[m]·χ(f_m) on the primes ``cols`` with exponents ``E``."""

    cols: np.ndarray
    E: np.ndarray
    coeff: np.ndarray

    def evaluate(self, pt: PrimeTable) -> np.ndarray:
        if not len(self.coeff):
            return np.zeros(len(pt), dtype=complex)
        return char_on_support(pt, self.cols, self.E) @ self.coeff


def mollifier_poly(pt: PrimeTable, j: int, sched: IntervalSchedule, kappa: float | None = None) -> DirichletPoly:
    """M_j(χ;1/κ) = Σ_{Ω(f)≤ℓ_j} a(f;J)χ(f)λ(f)ν(f)/(κ^{Ω(f)}√|f|) on I_j."""
    kappa = sched.kappa if kappa is None else kappa
    cols = pt.select(sched.degrees(j))
    E = exponent_vectors(len(cols), sched.ells[j])
    degs = pt.degrees[cols].astype(float)
    a = np.array([weight_a(int(d), sched.J, sched, pt.q) for d in degs])
    omega = E.sum(axis=1)
    coeff = (np.prod(a[None, :] ** E, axis=1) * (-1.0) ** omega * _nu(E) / kappa ** omega
             * float(pt.q) ** (-(E @ degs) / 2))
    return DirichletPoly(cols, E, coeff)


@dataclass
class MollifierValue:
    kappa: float
    Mj: np.ndarray
    M: np.ndarray
    route: str


def mollifier_eval(pt: PrimeTable, sched: IntervalSchedule, kappa: float | None = None,
                   route: str = "exp") -> MollifierValue:
    """M_j(χ;1/κ) = E_{ℓ_j}(-P_{I_j}(χ;J)/κ) and M = ∏ M_j.

    ``route="dirichlet"`` evaluates the expanded Dirichlet polynomial instead.
    """
    kappa = sched.kappa if kappa is None else kappa
    if kappa <= 0:
        raise ValueError("κ must be positive")
    cols = []
    for j in range(sched.J + 1):
        if route == "exp":
            cols.append(e_trunc(sched.ells[j], -prime_sum(pt, j, sched.J, sched) / kappa))
        elif route == "dirichlet":
            cols.append(mollifier_poly(pt, j, sched, kappa).evaluate(pt))
        else:
            raise ValueError(f"unknown route {route!r}")
    Mj = np.stack(cols, axis=1) if cols else np.ones((len(pt), 0), dtype=complex)
    return MollifierValue(kappa, Mj, np.prod(Mj, axis=1), route)


def mollifier_support(pt: PrimeTable, sched: IntervalSchedule) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Expansion of M(χ;1) = Σ_h c(h)χ(h) over all primes of the schedule.

    Returns (cols, E, coeff) with E exponent vectors over ``cols``; the intervals
    are disjoint so the product of the per-interval expansions has no collisions.
    """
    parts = [mollifier_poly(pt, j, sched, 1.0) for j in range(sched.J + 1)]
    cols = np.concatenate([p.cols for p in parts]) if parts else np.zeros(0, dtype=np.int64)
    E = np.zeros((1, 0), dtype=np.int64)
    coeff = np.ones(1)
    for p in parts:
        E = np.concatenate([np.repeat(E, len(p.E), axis=0), np.tile(p.E, (len(E), 1))], axis=1)
        coeff = np.outer(coeff, p.coeff).ravel()
    return cols, E, coeff


# ---- combinatorial identities --------------------------------------------------

@dataclass(frozen=True)
class PowerIdentityResult:
    s: int
    err_power: float
    err_real: float

    @property
    def ok(self) -> bool:
        return self.err_power < 1e-10 and self.err_real < 1e-10


def power_identity_check(a: Sequence[complex], s: int) -> PowerIdentityResult:
    """P^s = s!Σ_{Ω(f)=s} a(f)ν(f) and (Re P)^s = (s!/2^s)Σ_{Ω(fh)=s} a(f)ā(h)ν(f)ν(h)."""
    a = np.asarray(a, dtype=complex)
    if len(a) > 8 or s > 6 or s < 0:
        raise ValueError("brute force needs s ≤ 6 and at most 8 primes")
    P = a.sum()
    fs = math.factorial(s)

    def mono(E):
        return np.prod(np.where(E > 0, a[None, :] ** E, 1), axis=1) if len(a) else np.ones(len(E))

    E = exponent_vectors(len(a), s, exact=True)
    rhs = fs * np.sum(mono(E) * _nu(E))
    err1 = abs(P ** s - rhs)
    total = 0j
    for r in range(s + 1):
        Ef = exponent_vectors(len(a), r, exact=True)
        Eh = exponent_vectors(len(a), s - r, exact=True)
        vf = mono(Ef) * _nu(Ef)
        vh = np.conj(mono(Eh)) * _nu(Eh)
        total += vf.sum() * vh.sum()
    err2 = abs(P.real ** s - fs / 2 ** s * total)
    scale = max(1.0, abs(P) ** s)
    return PowerIdentityResult(s, err1 / scale, err2 / scale)


def linear_term_check(z: complex, ell: int, k: int, kappa: float) -> tuple[complex, complex, complex]:
    """Coefficient of a single prime P in |M_j(χ;1/κ)|^{kκ}, M_j built on one prime term z = a χ(P)/√|P|.

    Returns (expansion via ν_{kκ/2}(·;ℓ), polynomial-in-ε route, -(k/2)(z + z̄)).
    """
    n2 = k * kappa
    if abs(n2 - round(n2)) > 1e-12 or round(n2) % 2:
        raise ValueError("kκ must be an even integer")
    n = round(n2) // 2
    # terms (f,h) = (P,1) and (1,P) of the expanded Dirichlet series
    nu_p = nu_trunc_exponents([1], n, ell)
    nu_1 = nu_trunc_exponents([], n, ell)
    lin = float(nu_p * nu_1) * (-z / kappa - np.conj(z) / kappa)
    # route two: E_ℓ(-εz/κ)E_ℓ(-εz̄/κ) raised to the n, coefficient of ε
    cz = np.array([(-z / kappa) ** s / math.factorial(s) for s in range(ell + 1)])
    cw = np.array([(-np.conj(z) / kappa) ** s / math.factorial(s) for s in range(ell + 1)])
    base = np.convolve(cz, cw)
    acc = np.array([1.0 + 0j])
    for _ in range(n):
        acc = np.convolve(acc, base)
    return complex(lin), complex(acc[1]), complex(-(k / 2) * (z + np.conj(z)))


def nu_trunc_bounds(exponents: Sequence[int], n: int, ell: int) -> tuple[Fraction, Fraction]:
    """(ν_n(f;ℓ), ν_n(f)) for the termwise bound ν_n(f;ℓ) ≤ ν_n(f)."""
    full = Fraction(1)
    for e in exponents:
        full *= Fraction(n ** e, math.factorial(e))
    return nu_trunc_exponents(exponents, n, ell), full


# ---- case split for |L|^k ------------------------------------------------------

@dataclass
class PropCasesReport:
    """Per character: case (1, 2 or 3), the bound for cases 2 and 3 (inf for case 1), and |L|^k."""

    k: float
    s: tuple[int, ...]
    case: np.ndarray
    bound: np.ndarray
    lhs: np.ndarray
    in_T: np.ndarray  # shape (chars, J+1)

    @property
    def violations(self) -> np.ndarray:
        return np.flatnonzero(self.lhs > self.bound * (1 + 1e-9) + 1e-12)

    @property
    def holds(self) -> bool:
        return len(self.violations) == 0

    def counts(self) -> dict[int, int]:
        return {c: int(np.sum(self.case == c)) for c in (1, 2, 3)}


def prop_cases_check(pt: PrimeTable, L_abs: np.ndarray, k: float, sched: IntervalSchedule,
                     s: Sequence[int] | None = None, eta: float | None = None) -> PropCasesReport:
    """Classify by membership in 𝒯_r = {max_{r≤u≤J} |Re P_{I_r}(χ;u)| ≤ ℓ_r/(ke²)} and evaluate the bound.

    Case 1 (χ ∉ 𝒯_0) carries no bound.  Case 2 (χ in every 𝒯_r) is bounded by
    exp(k(1/θ_J+η))D_{J,k}S_{J,k}.  Case 3 uses the sum over 0 ≤ j < J, j < u ≤ J
    of exp(k(1/θ_j+η))D_{j,k}S_{j,k}(e²k Re P_{I_{j+1}}(χ;u)/ℓ_{j+1})^{s_{j+1}}.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    J = sched.J
    s = tuple([2] * (J + 1) if s is None else s)
    if len(s) != J + 1:
        raise ValueError(f"need {J + 1} exponents s_j")
    if any(x % 2 or x < 0 for x in s):
        raise ValueError("every s_j must be an even non-negative integer")
    if eta is None:
        from .constants import eta_const
        eta = eta_const()
    n = len(pt)
    e2 = math.e ** 2
    re_p = {(r, u): prime_sum(pt, r, u, sched).real for r in range(J + 1) for u in range(r, J + 1)}
    in_T = np.stack([np.max(np.abs(np.stack([re_p[(r, u)] for u in range(r, J + 1)])), axis=0)
                     <= sched.ells[r] / (k * e2) for r in range(J + 1)], axis=1)
    case = np.where(~in_T[:, 0], 1, np.where(in_T.all(axis=1), 2, 3))

    def piece(j):
        return math.exp(k * (1 / sched.thetas[j] + eta)) * d_factor(pt, j, k, sched) * s_factor(pt, j, k, sched)

    bound2 = piece(J)
    bound3 = np.zeros(n)
    for j in range(J):
        base = piece(j)
        for u in range(j + 1, J + 1):
            bound3 = bound3 + base * (e2 * k * re_p[(j + 1, u)] / sched.ells[j + 1]) ** s[j + 1]
    bound = np.where(case == 1, np.inf, np.where(case == 2, bound2, bound3))
    return PropCasesReport(k, s, case, bound, np.asarray(L_abs, dtype=float) ** k, in_T)
