"""L-polynomials of the family, central values, root numbers and the curve zeta check.

Coefficients are exact elements of ℤ[ω] (ω = ξ₃) stored as integer pairs
``(a, b)`` meaning ``a + b ω``.  Floating complex values appear only when a
polynomial is evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import MU3, XI, ZERO, CubicCharacter
from .family import FamilyCg
from .fields import FieldCtx
from .poly import Raw, enumerate_monic_raw, factor_raw

Zw = tuple[int, int]


def zw_mul(x: Zw, y: Zw) -> Zw:
    a, b = x
    c, d = y
    return (a * c - b * d, a * d + b * c - b * d)


def zw_conj(x: Zw) -> Zw:
    a, b = x
    return (a - b, -b)


def zw_complex(x: Zw) -> complex:
    return x[0] + x[1] * XI


def zw_unit(e: int) -> Zw:
    """ω^e as a pair (0 for ZERO)."""
    return ((1, 0), (0, 1), (-1, -1), (0, 0))[e]


@dataclass(frozen=True)
class LPolynomial:
    """𝓛(u, χ) = Σ_d c_d u^d with exact ℤ[ω] coefficients."""

    q: int
    coeffs: tuple[Zw, ...]

    @property
    def genus(self) -> int:
        return len(self.coeffs) - 2

    @property
    def values(self) -> np.ndarray:
        return np.array([zw_complex(c) for c in self.coeffs], dtype=complex)

    def __call__(self, u: complex) -> complex:
        acc = 0j
        for c in reversed(self.values):
            acc = acc * u + c
        return acc

    def direct(self, u: complex) -> complex:
        """Evaluation as an explicit power sum (independent of Horner order)."""
        return complex(sum(zw_complex(c) * u ** d for d, c in enumerate(self.coeffs)))

    def conj(self) -> "LPolynomial":
        return LPolynomial(self.q, tuple(zw_conj(c) for c in self.coeffs))

    def at_one(self) -> Zw:
        return (sum(a for a, _ in self.coeffs), sum(b for _, b in self.coeffs))


# ---- coefficient computation -------------------------------------------

def family_l_coefficients(fam: FamilyCg) -> np.ndarray:
    """c_d for every character, via the Euler product over F_q-primes.

    Returns int64 array of shape (len(fam), g+2, 2).  Each prime P of degree
    d multiplies the truncated series by 1/(1 - χ(P) u^d).
    """
    n_coef = fam.g + 2
    a = np.zeros((len(fam), n_coef), dtype=np.int64)
    b = np.zeros_like(a)
    a[:, 0] = 1
    for j, P in enumerate(fam.fq_primes):
        d = len(P) - 1
        if d >= n_coef:
            break
        e = fam.table[:, j]
        for k in range(d, n_coef):
            xa, xb = a[:, k - d], b[:, k - d]
            ra = np.select([e == 0, e == 1, e == 2], [xa, -xb, xb - xa], 0)
            rb = np.select([e == 0, e == 1, e == 2], [xb, xa - xb, -xa], 0)
            a[:, k] += ra
            b[:, k] += rb
    return np.stack([a, b], axis=-1)


@lru_cache(maxsize=8)
def _factor_table(ctx: FieldCtx, d: int) -> tuple[tuple[tuple[Raw, int], ...], ...]:
    return tuple(tuple(factor_raw(ctx.Fq, f)) for f in enumerate_monic_raw(ctx.q, d))


def l_polynomial(chi: CubicCharacter, degree: int | None = None) -> LPolynomial:
    """c_d by iterating the monics of each degree and multiplying prime values."""
    n = chi.conductor_degree() if degree is None else degree
    coeffs = []
    for d in range(n):
        counts = [0, 0, 0]
        for parts in _factor_table(chi.ctx, d):
            e = 0
            for P, k in parts:
                v = chi.value_on_prime(P)
                if v == ZERO:
                    e = ZERO
                    break
                e = (e + v * k) % 3
            if e != ZERO:
                counts[e] += 1
        # n0 + n1 ω + n2 ω² = (n0 - n2) + (n1 - n2) ω
        coeffs.append((counts[0] - counts[2], counts[1] - counts[2]))
    return LPolynomial(chi.ctx.q, tuple(coeffs))


def family_l_polynomials(fam: FamilyCg, coeffs: np.ndarray | None = None) -> list[LPolynomial]:
    arr = family_l_coefficients(fam) if coeffs is None else coeffs
    return [LPolynomial(fam.q, tuple((int(x), int(y)) for x, y in row)) for row in arr]


# ---- central values, root numbers, AFE ----------------------------------

def eval_central(L: LPolynomial) -> complex:
    return L(L.q ** -0.5)


def central_values(coeffs: np.ndarray, q: int) -> np.ndarray:
    """L(1/2, χ) for a stack of coefficient arrays (shape (n, g+2, 2))."""
    w = q ** (-0.5 * np.arange(coeffs.shape[1]))
    c = coeffs[..., 0] + coeffs[..., 1] * XI
    return c @ w


@dataclass(frozen=True)
class RootNumber:
    value: complex

    @property
    def modulus_error(self) -> float:
        return abs(abs(self.value) - 1.0)


def root_number(L: LPolynomial) -> RootNumber:
    """ω(χ) = -q^{-g/2} c_{g+1}, the conductor having degree g+2."""
    g = L.genus
    return RootNumber(-(L.q ** (-g / 2)) * zw_complex(L.coeffs[g + 1]))


def afe_check(L: LPolynomial, X: int) -> float:
    """|LHS - RHS| of the four-sum approximate functional equation at cut X."""
    g = L.genus
    if X < 0 or X > g:
        raise ValueError(f"cut X={X} must lie in 0..{g}")
    q = L.q
    c = L.values
    cb = L.conj().values
    w = q ** (-0.5 * np.arange(len(c)))
    om = root_number(L).value

    def part(vals, lo, hi):
        if hi < lo:
            return 0j
        return complex(np.sum(vals[lo: hi + 1] * w[lo: hi + 1]))

    lhs = eval_central(L)
    sq = math.sqrt(q)
    rhs = (part(c, 0, X) + om * part(cb, 0, g - X - 1)
           + part(c, X + 1, X + 1) / (1 - sq) + om * part(cb, g - X, g - X) / (1 - sq))
    return abs(lhs - rhs)


# ---- curve zeta ----------------------------------------------------------

@dataclass(frozen=True)
class CurveZeta:
    """𝒫_C(u) = 𝓛(u,χ)𝓛(u,χ̄)/(1-u)^2 with integer coefficients, and its zeros."""

    q: int
    coeffs: tuple[int, ...]
    zeros: np.ndarray

    @property
    def max_radius_error(self) -> float:
        if len(self.zeros) == 0:
            return 0.0
        return float(np.max(np.abs(np.abs(self.zeros) - self.q ** -0.5)))


def _divide_one_minus_u(c: list[Zw]) -> list[Zw]:
    """Exact quotient by (1 - u); raises if the remainder is nonzero."""
    out = []
    acc = (0, 0)
    for x in c[:-1]:
        acc = (acc[0] + x[0], acc[1] + x[1])
        out.append(acc)
    rem = (acc[0] + c[-1][0], acc[1] + c[-1][1])
    if rem != (0, 0):
        raise ArithmeticError("L-polynomial does not vanish at u = 1")
    return out


def _qdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Division of rational polynomials (lowest degree first, b without trailing zeros)."""
    a = list(a)
    out = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        out[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return out, a


def _qgcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        a, b = b, _qdivmod(a, b)[1]
    return [x / a[-1] for x in a]


def squarefree_parts(coeffs: tuple[int, ...]) -> list[tuple[list[Fraction], int]]:
    """Yun's decomposition of an integer polynomial (lowest degree first)."""
    f = [Fraction(c) for c in coeffs]
    if len(f) <= 1:
        return []
    df = [i * c for i, c in enumerate(f)][1:]
    a = _qgcd(f, df)
    b = _qdivmod(f, a)[0]
    c = _qdivmod(df, a)[0]
    out = []
    i = 1
    while len(b) > 1:
        db = [k * x for k, x in enumerate(b)][1:]
        d = [x - y for x, y in zip(c + [Fraction(0)] * (len(db) - len(c)), db + [Fraction(0)] * (len(c) - len(db)))]
        while d and d[-1] == 0:
            d.pop()
        a = _qgcd(b, d) if d else b
        if len(a) > 1:
            out.append((a, i))
        b = _qdivmod(b, a)[0]
        c = _qdivmod(d, a)[0] if d else []
        i += 1
    return out


def _zeros(coeffs: tuple[int, ...]) -> np.ndarray:
    """Zero multiset: companion-matrix eigenvalues of each square-free part."""
    found = []
    for part, mult in squarefree_parts(coeffs):
        r = np.roots([float(x) for x in reversed(part)])
        found.extend(list(r) * mult)
    return np.array(found, dtype=complex)


def rh_check(L: LPolynomial) -> CurveZeta:
    a = _divide_one_minus_u(list(L.coeffs))
    b = [zw_conj(x) for x in a]
    prod = [(0, 0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            z = zw_mul(x, y)
            prod[i + j] = (prod[i + j][0] + z[0], prod[i + j][1] + z[1])
    if any(y != 0 for _, y in prod):
        raise ArithmeticError("curve polynomial is not rational")
    ints = tuple(x for x, _ in prod)
    zeros = _zeros(ints)
    if len(zeros) != len(ints) - 1:
        raise ArithmeticError("zero count does not match the degree")
    return CurveZeta(L.q, ints, zeros)


# ---- exact zero test -------------------------------------------------------

def central_value_is_zero(L: LPolynomial) -> bool:
    """Exact test of 𝓛(q^{-1/2}) = 0.

    q^{(g+1)/2} 𝓛(q^{-1/2}) = Σ c_d q^{(g+1-d)/2} = A + B√q with A, B ∈ ℤ[ω].
    Since q is not a square, 1 and √q are independent over ℚ(ω), so the value
    vanishes iff A = B = 0.
    """
    n = len(L.coeffs) - 1
    A = [0, 0]
    B = [0, 0]
    for d, (x, y) in enumerate(L.coeffs):
        k = n - d
        scale = L.q ** (k // 2)
        tgt = A if k % 2 == 0 else B
        tgt[0] += x * scale
        tgt[1] += y * scale
    return A == [0, 0] and B == [0, 0]


def mu3_complex(e: np.ndarray) -> np.ndarray:
    """Vectorized exponent → complex value, ZERO ↦ 0."""
    lut = np.array(list(MU3) + [0j])
    return lut[e]
