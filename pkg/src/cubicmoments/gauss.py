"""Hayes exponential, cubic Gauss sums over F_{q^2}[T], and Perron extraction."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .characters import MU3, ZERO, mu_pow, symbol
from .family import primes_with_roots
from .fields import FieldCtx, GaloisField
from .poly import Raw, enumerate_monic_raw, factor_raw, pgcd, pmap, pmod, pmul, ppow, trim

BRUTE_LIMIT = 10 ** 6


@dataclass(frozen=True)
class HayesCtx:
    """Additive character ψ(a) = exp(2πi Tr(a)/p) on a field level."""

    ctx: FieldCtx
    level: str = "q2"

    @property
    def field(self) -> GaloisField:
        return self.ctx.Fq2 if self.level == "q2" else self.ctx.Fq

    def psi(self, a: int) -> complex:
        return cmath.exp(2j * math.pi * self.field.trace(a) / self.ctx.p)

    @property
    def psi_table(self) -> np.ndarray:
        K = self.field
        t = np.array(K.trace_table)
        return np.exp(2j * np.pi * t / self.ctx.p)


def hayes_e(H: HayesCtx, V: Raw, F: Raw) -> complex:
    """e(V/F) = ψ(coefficient of T^{deg F - 1} in V mod F), F monic."""
    F = tuple(F)
    if not F:
        raise ValueError("e(V/F) needs F nonzero")
    if F[-1] != 1:
        raise ValueError("e(V/F) needs F monic")
    n = len(F) - 1
    if n == 0:
        return 1.0 + 0j
    r = pmod(H.field, tuple(V), F)
    top = r[n - 1] if len(r) >= n else 0
    return H.psi(top)


@lru_cache(maxsize=None)
def _root_lookup(ctx: FieldCtx, m: int) -> dict[Raw, int]:
    return dict(primes_with_roots(ctx, m))


def _eval_residues(ctx: FieldCtx, m: int, beta: int, U: np.ndarray) -> np.ndarray:
    """u(β) in F_{q^{2m}} for every row u of U (coefficients lowest first, in F_{q^2})."""
    E = ctx.ext(m)
    acc = np.zeros(U.shape[0], dtype=np.int64)
    b = np.full(U.shape[0], beta, dtype=np.int64)
    for k in range(U.shape[1] - 1, -1, -1):
        acc = E.vmul(acc, b)
        acc = E.vadd(acc, U[:, k]) if m == 1 else E.vadd_base(acc, U[:, k])
    return acc


def residues(K: GaloisField, n: int) -> np.ndarray:
    """All coefficient vectors of length n over K, as rows (lowest degree first)."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    codes = np.arange(K.size ** n, dtype=np.int64)
    return np.stack([(codes // K.size ** i) % K.size for i in range(n)], axis=1)


def char_table(ctx: FieldCtx, F: Raw, U: np.ndarray,
               parts: Sequence[tuple[Raw, int]] | None = None) -> np.ndarray:
    """χ_F(u) exponents for the rows of U, F any monic over F_{q^2}."""
    parts = factor_raw(ctx.Fq2, F) if parts is None else parts
    out = np.zeros(U.shape[0], dtype=np.int64)
    zero = np.zeros(U.shape[0], dtype=bool)
    for P, e in parts:
        m = len(P) - 1
        beta = _root_lookup(ctx, m)[P]
        val = _eval_residues(ctx, m, beta, U)
        s = ctx.ext_orientation(m)
        E = ctx.ext(m)
        zero |= val == 0
        out = (out + e * s * E.log_np[val]) % 3
    return np.where(zero, ZERO, out)


@dataclass(frozen=True)
class GaussValue:
    value: complex
    level: str
    method: str


def _gauss_brute(ctx: FieldCtx, V: Raw, F: Raw, parts=None) -> complex:
    K = ctx.Fq2
    n = len(F) - 1
    if n == 0:
        return 1.0 + 0j
    if K.size ** n > BRUTE_LIMIT:
        raise ValueError(f"modulus has {K.size ** n} residues, above the brute-force limit")
    U = residues(K, n)
    chi = char_table(ctx, F, U, parts)
    # coefficient of T^{n-1} in u V mod F is linear in u: Σ u_i w_i
    w = []
    for i in range(n):
        r = pmod(K, pmul(K, (0,) * i + (1,), tuple(V)), F)
        w.append(r[n - 1] if len(r) >= n else 0)
    acc = np.zeros(U.shape[0], dtype=np.int64)
    for i, wi in enumerate(w):
        acc = K.vadd(acc, K.vmul_const(U[:, i], wi))
    psi = HayesCtx(ctx).psi_table[acc]
    lut = np.array(list(MU3) + [0j])
    return complex(np.sum(lut[chi] * psi))


def gauss_sum(ctx: FieldCtx, V: Raw, F: Raw, method: str = "brute", level: str = "q2") -> GaussValue:
    """G(V,F) = Σ_{u mod F} χ_F(u) e(uV/F) over F_{q^2}[T]; G(V,1) = 1."""
    if level != "q2":
        raise ValueError("cubic Gauss sums need cube roots of unity; only the F_q^2 level has them")
    F = trim(tuple(F))
    if not F or F[-1] != 1:
        raise ValueError("Gauss sums need a monic modulus")
    V = trim(tuple(V))
    if method == "brute":
        return GaussValue(_gauss_brute(ctx, V, F), level, method)
    if method != "multiplicative":
        raise ValueError(f"unknown method {method!r}")
    K = ctx.Fq2
    value = 1.0 + 0j
    acc: Raw = (1,)
    for P, e in factor_raw(K, F):
        block = ppow(K, P, e)
        g_block = _gauss_brute(ctx, V, block, [(P, e)])
        # G(V, AB) = χ_A(B)^2 G(V,A) G(V,B) for coprime A, B
        twist = mu_pow(symbol(ctx, acc, block), 2) if len(acc) > 1 else 0
        value *= (0j if twist == ZERO else MU3[twist]) * g_block
        acc = pmul(K, acc, block)
    return GaussValue(value, level, method)


# ---- Prop. 2.3 main term ---------------------------------------------------

def cube_decomposition(K: GaloisField, f: Raw) -> tuple[Raw, Raw, Raw, list[tuple[Raw, int]]]:
    """f = f1 f2^2 f3^3 with f1, f2 square-free and coprime; also returns the factorization."""
    parts = factor_raw(K, f)
    f1: Raw = (1,)
    f2: Raw = (1,)
    f3: Raw = (1,)
    for P, e in parts:
        if e % 3 == 1:
            f1 = pmul(K, f1, P)
        elif e % 3 == 2:
            f2 = pmul(K, f2, P)
        f3 = pmul(K, f3, ppow(K, P, e // 3))
    return f1, f2, f3, parts


def tau_chi3(ctx: FieldCtx) -> complex:
    """τ(χ₃) = Σ_{a≠0} χ₃(a) ψ(a) over F_{q^2}."""
    H = HayesCtx(ctx)
    return sum(MU3[ctx.cube_class(a)] * H.psi(a) for a in range(1, ctx.Fq2.size))


def rho(ctx: FieldCtx, a: int) -> complex:
    if a == 0:
        return 1.0 + 0j
    if a == 1:
        return tau_chi3(ctx) * ctx.Fq2.size
    return 0j


@dataclass
class MainTermReport:
    f: Raw
    d: int
    lhs: complex
    main: complex
    f1: Raw
    f2: Raw
    f3: Raw
    f3_star: tuple[Raw, ...]
    rho: complex
    tau: complex

    @property
    def ratio(self) -> float | complex:
        if self.main == 0:
            return math.nan
        return self.lhs / self.main

    def tsv_row(self) -> str:
        r = self.ratio
        rs = "nan" if isinstance(r, float) else f"{r.real:.12g}"
        return "\t".join([str(list(self.f)), str(self.d), f"{self.lhs.real:.12g}", f"{self.lhs.imag:.12g}",
                          f"{self.main.real:.12g}", f"{self.main.imag:.12g}", rs])


TSV_HEADER = "f\td\tlhs_re\tlhs_im\tmain_re\tmain_im\tratio"


def gauss_series(ctx: FieldCtx, f: Raw, D: int) -> list[complex]:
    """Coefficients of Ψ̃(f,u) = Σ_{(F,f)=1} G(f,F) u^{deg F} up to degree D (brute force)."""
    K = ctx.Fq2
    out = []
    for d in range(D + 1):
        total = 0j
        for F in enumerate_monic_raw(K.size, d):
            if len(pgcd(K, F, f)) > 1:
                continue
            total += _gauss_brute(ctx, f, F)
        out.append(total)
    return out


def gauss_sum_degree_total(ctx: FieldCtx, f: Raw, d: int) -> MainTermReport:
    """Σ_{F ∈ ℳ_d, (F,f)=1} G(f,F) at level F_{q^2}, with the stated main term."""
    K = ctx.Fq2
    Q = K.size
    f = trim(tuple(f))
    lhs = gauss_series(ctx, f, d)[d] if d <= 2 else _degree_total(ctx, f, d)
    f1, f2, f3, parts = cube_decomposition(K, f)
    in_f12 = {P for P, e in parts if e % 3}
    f3_star = tuple(P for P, e in parts if e >= 3 and P not in in_f12)
    a = (d + len(f1) - 1) % 3
    if len(f2) > 1:
        main = 0j
    else:
        norm_f1 = Q ** (len(f1) - 1)
        zeta2 = 1.0 / (1.0 - 1.0 / Q)
        g1 = gauss_sum(ctx, (1,), f1).value
        prod = 1.0
        for P, e in parts:
            if e % 3 == 1 or P in f3_star:
                prod /= 1.0 + Q ** -(len(P) - 1)
        main = (Q ** (4 * d / 3 - 4 * a / 3) / (zeta2 * norm_f1 ** (2 / 3))
                * g1.conjugate() * rho(ctx, a) * prod)
    return MainTermReport(f, d, lhs, main, f1, f2, f3, f3_star, rho(ctx, a), tau_chi3(ctx))


def _degree_total(ctx: FieldCtx, f: Raw, d: int) -> complex:
    K = ctx.Fq2
    total = 0j
    for F in enumerate_monic_raw(K.size, d):
        if len(pgcd(K, F, f)) == 1:
            total += gauss_sum(ctx, f, F, method="multiplicative").value
    return total


def perron_coeff(series: Sequence[complex | float | int], n: int, mode: str = "exact_n"):
    """Coefficient extraction: the n-th coefficient, or the partial sum up to n."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if len(series) <= n:
        raise ValueError(f"series has {len(series)} coefficients, need {n + 1}")
    if mode == "exact_n":
        return series[n]
    if mode == "up_to_n":
        return sum(series[: n + 1])
    raise ValueError(f"unknown mode {mode!r}")


# ---- root-number normalizations ------------------------------------------

def restricted_gauss_sum(ctx: FieldCtx, F: Raw, V: Raw = (1,)) -> complex:
    """Gauss sum over F_q[T] of χ_F restricted to F_q[T], modulo N = F·F̃ ∈ F_q[T]."""
    K, k = ctx.Fq2, ctx.Fq
    N = pmul(K, F, pmap(K, F, ctx.q))
    if not all(ctx.in_Fq(c) for c in N):
        raise ArithmeticError("norm of the modulus left F_q")
    n = len(N) - 1
    if k.size ** n > BRUTE_LIMIT:
        raise ValueError(f"modulus has {k.size ** n} residues, above the brute-force limit")
    U = residues(k, n)
    chi = char_table(ctx, F, U)
    acc = np.zeros(U.shape[0], dtype=np.int64)
    for i in range(n):
        r = pmod(K, pmul(K, (0,) * i + (1,), tuple(V)), N)
        wi = r[n - 1] if len(r) >= n else 0
        acc = k.vadd(acc, k.vmul_const(U[:, i], wi))
    psi = HayesCtx(ctx, "q").psi_table[acc]
    lut = np.array(list(MU3) + [0j])
    return complex(np.sum(lut[chi] * psi))


def root_number_candidates(ctx: FieldCtx, F: Raw) -> dict[str, complex]:
    """Normalized Gauss sums that could equal ω(χ_F), for F in the family of genus g.

    ``fq2_modulus``  q^{-g/2-1} G_{q^2}(1, F)
    ``fq2_norm``     q^{-(g+2)} G_{q^2}(1, F F̃)
    ``fq_norm``      q^{-(g+2)/2} G_q(1, F F̃), the sum over F_q[T]
    """
    K = ctx.Fq2
    q = ctx.q
    n = len(F) - 1
    g = 2 * n - 2
    N = pmul(K, F, pmap(K, F, q))
    out = {"fq2_modulus": gauss_sum(ctx, (1,), F, "multiplicative").value / q ** (g / 2 + 1)}
    try:
        out["fq2_norm"] = gauss_sum(ctx, (1,), N, "multiplicative").value / q ** (g + 2)
    except ValueError:
        out["fq2_norm"] = complex("nan")
    out["fq_norm"] = restricted_gauss_sum(ctx, F) / q ** ((g + 2) / 2)
    return out
