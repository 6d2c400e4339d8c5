"""Family-wide sums: first, twisted, mollified and second moments, the orthogonality
identity, the log|L| inequality, squares-of-primes averages and the census.

Every family total goes through :func:`csum`, which sums real and imaginary
parts with ``math.fsum``.  That sum is correctly rounded, so it does not
depend on the order of the characters.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import ZERO
from .constants import a_nk, eta_const, first_moment_constant, m_r, s_k_const, zeta_q
from .family import FamilyCg, enumerate_family, primes_with_roots
from .fields import FieldCtx
from .gauss import cube_decomposition
from .lseries import central_values, family_l_coefficients
from .mollifier import (IntervalSchedule, PrimeTable, char_on_support, mollifier_eval, mollifier_poly,
                        mollifier_support, prop_cases_check, s_factor)
from .poly import Raw, factor_raw, pmonic, pmul, ppow, trim

COROLLARY_FLOOR = 0.6143
SUPPORT_CAP = 400_000
_CHUNK = 4096


def csum(z) -> complex:
    """Order-independent sum of a complex array."""
    z = np.asarray(z, dtype=complex).ravel()
    return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))


def rsum(x) -> float:
    return math.fsum(np.asarray(x, dtype=float).ravel().tolist())


# ---- the family with its L-data ------------------------------------------------

def exact_zero_mask(coeffs: np.ndarray, q: int) -> np.ndarray:
    """L(1/2,χ) = 0, decided on q^{(g+1)/2}𝓛(q^{-1/2}) = A + B√q with A, B ∈ ℤ[ω]."""
    n = coeffs.shape[1] - 1
    if n > 60:
        raise OverflowError("exact zero test is limited to genus ≤ 58 in int64")
    A = np.zeros(coeffs.shape[:1] + (2,), dtype=np.int64)
    B = np.zeros_like(A)
    for d in range(n + 1):
        k = n - d
        term = coeffs[:, d, :] * q ** (k // 2)
        if k % 2:
            B += term
        else:
            A += term
    return ~(A.any(axis=1) | B.any(axis=1))


@dataclass
class FamilyData:
    """𝒞(g) with L-coefficients, central values and the exact zero mask."""

    fam: FamilyCg
    coeffs: np.ndarray
    L: np.ndarray
    zero: np.ndarray

    @classmethod
    def from_family(cls, fam: FamilyCg, coeffs: np.ndarray | None = None) -> "FamilyData":
        coeffs = family_l_coefficients(fam) if coeffs is None else coeffs
        return cls(fam, coeffs, central_values(coeffs, fam.q), exact_zero_mask(coeffs, fam.q))

    @property
    def ctx(self) -> FieldCtx:
        return self.fam.ctx

    @property
    def q(self) -> int:
        return self.fam.q

    @property
    def g(self) -> int:
        return self.fam.g

    @property
    def size(self) -> int:
        return len(self.fam)

    @property
    def scale(self) -> int:
        return self.q ** (self.g + 2)

    @property
    def pt(self) -> PrimeTable:
        return PrimeTable.of_family(self.fam)


@lru_cache(maxsize=16)
def _ctx(q: int) -> FieldCtx:
    return FieldCtx(q)


def family_data(q: int, g: int, table_degree: int | None = None) -> FamilyData:
    """Build 𝒞(g) in memory (see :mod:`cubicmoments.cache` for the on-disk version)."""
    return FamilyData.from_family(enumerate_family(_ctx(q), g, table_degree))


# ---- reports -----------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


@dataclass
class MomentReport:
    q: int
    g: int
    kind: str
    value: complex
    prediction: float | None
    count: int
    runtime: float
    exact: list | None = None  # per-degree ℤ[ω] sums (a, b) = a + bω when available
    meta: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float | None:
        if self.prediction in (None, 0):
            return None
        return self.value.real / self.prediction

    @property
    def is_real(self) -> bool:
        return abs(self.value.imag) < 1e-9 * max(1.0, abs(self.value))

    @property
    def normalized(self) -> float:
        return self.value.real / self.q ** (self.g + 2)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["ratio"] = self.ratio
        d["normalized"] = self.normalized
        d.pop("runtime")
        return _jsonable(d)


# ---- first moments -------------------------------------------------------------------

@dataclass(frozen=True)
class HDecomposition:
    """h = C S² E³ over F_q with C, S square-free and coprime."""

    C: Raw
    S: Raw
    E: Raw
    parts: tuple[tuple[Raw, int], ...]

    @property
    def degrees(self) -> tuple[int, int, int]:
        return len(self.C) - 1, len(self.S) - 1, len(self.E) - 1


def h_decomposition(ctx: FieldCtx, h: Raw) -> HDecomposition:
    h = trim(tuple(h))
    if not h:
        raise ValueError("h must be nonzero")
    C, S, E, parts = cube_decomposition(ctx.Fq, pmonic(ctx.Fq, h))
    return HDecomposition(C, S, E, tuple(parts))


def char_column(data: FamilyData, parts) -> np.ndarray:
    """χ(h) exponents over the family from the F_q-factorization of h (constants are cubes in F_q)."""
    out = np.zeros(data.size, dtype=np.int64)
    dead = np.zeros(data.size, dtype=bool)
    for P, e in parts:
        v = data.fam.column(P).astype(np.int64)
        dead |= v == ZERO
        out = (out + e * v) % 3
    return np.where(dead, ZERO, out)


def _rotate(a: np.ndarray, b: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(a + bω)·ω^t elementwise, t ∈ {0,1,2,ZERO}."""
    t = t[:, None]
    ra = np.select([t == 0, t == 1, t == 2], [a, -b, b - a], 0)
    rb = np.select([t == 0, t == 1, t == 2], [b, a - b, -a], 0)
    return ra, rb


def first_moment_prediction(q: int, g: int, dec: HDecomposition, d_max: int = 10) -> float:
    """q^{g+2}ζ_q(3/2)/(ζ_q(3)|C|√|S|)·𝒜_nK(q^{-2},q^{-3/2})·∏_{R|h, deg R even} M_R."""
    x, u = float(q) ** -2, float(q) ** -1.5
    dC, dS, _ = dec.degrees
    main = q ** (g + 2) * zeta_q(1.5, q) / zeta_q(3, q) * float(q) ** (-dC - dS / 2)
    main *= a_nk(x, u, q, d_max).value
    for P, _ in dec.parts:
        d = len(P) - 1
        if d % 2 == 0:
            main *= m_r(d, x, u)
    return main


def twisted_first_moment(data: FamilyData, h: Raw = (1,)) -> MomentReport:
    """Σ_χ χ(h)L(1/2,χ), exactly as per-degree ℤ[ω] sums and as a float."""
    t0 = time.perf_counter()
    dec = h_decomposition(data.ctx, h)
    deg_h = sum((len(P) - 1) * e for P, e in dec.parts)
    if deg_h and deg_h >= data.g / 10:
        warnings.warn(f"deg h = {deg_h} is outside the range deg h < g/10 where the main term is proven",
                      stacklevel=2)
    t = char_column(data, dec.parts)
    a, b = _rotate(data.coeffs[..., 0], data.coeffs[..., 1], t)
    exact = [(int(x), int(y)) for x, y in zip(a.sum(axis=0), b.sum(axis=0))]
    chi = np.where(t == ZERO, 0j, np.exp(2j * np.pi * np.where(t == ZERO, 0, t) / 3))
    value = csum(chi * data.L)
    pred = first_moment_prediction(data.q, data.g, dec)
    meta = {"h": list(trim(tuple(h))), "C": list(dec.C), "S": list(dec.S), "E": list(dec.E), "deg_h": deg_h,
            "exact_imaginary_zero": all(y == 0 for _, y in exact)}
    return MomentReport(data.q, data.g, "twisted-first", value, pred, data.size, time.perf_counter() - t0,
                        exact, meta)


def first_moment(data: FamilyData) -> MomentReport:
    rep = twisted_first_moment(data, (1,))
    rep.kind = "first"
    return rep


def exact_value(exact: list, q: int) -> complex:
    """Σ_d (a_d + b_d ω) q^{-d/2}."""
    w = complex(-0.5, math.sqrt(3) / 2)
    return complex(sum((a + b * w) * q ** (-d / 2) for d, (a, b) in enumerate(exact)))


# ---- mollified moments ---------------------------------------------------------------

def _check_sched(data: FamilyData, sched: IntervalSchedule):
    if sched.g != data.g:
        raise ValueError(f"schedule built for g={sched.g}, family has g={data.g}")


def support_size(pt: PrimeTable, sched: IntervalSchedule) -> int:
    n = 1
    for j in range(sched.J + 1):
        n *= len(mollifier_poly(pt, j, sched, 1.0).coeff)
    return n


def twisted_sums_on_support(data: FamilyData, cols: np.ndarray, E: np.ndarray) -> np.ndarray:
    """T(h) = Σ_χ χ(h)L(1/2,χ) for every support vector (rows of E)."""
    pt = data.pt
    out = np.empty(len(E), dtype=complex)
    for lo in range(0, len(E), _CHUNK):
        X = char_on_support(pt, cols, E[lo: lo + _CHUNK])
        out[lo: lo + _CHUNK] = data.L @ X
    return out


def support_polynomial(data: FamilyData, cols: np.ndarray, e: np.ndarray) -> Raw:
    """The F_q polynomial ∏ P^e of one support vector."""
    K = data.ctx.Fq
    f: Raw = (1,)
    for c, x in zip(cols, e):
        if x:
            f = pmul(K, f, ppow(K, data.fam.fq_primes[int(c)], int(x)))
    return f


def mollified_first_moment(data: FamilyData, sched: IntervalSchedule,
                           support_cap: int = SUPPORT_CAP) -> MomentReport:
    """Σ_χ L(1/2,χ)M(χ;1), directly (path a) and by the twisted-moment expansion (path b).

    Path b is skipped (recorded as None) when the expanded support exceeds ``support_cap``.
    """
    _check_sched(data, sched)
    if sched.kappa != 1:
        raise ValueError("the mollified first moment is taken with κ = 1")
    t0 = time.perf_counter()
    pt = data.pt
    M = mollifier_eval(pt, sched, 1.0, route="exp").M
    path_a = csum(data.L * M)
    size = support_size(pt, sched)
    path_b = None
    if size <= support_cap:
        cols, E, coeff = mollifier_support(pt, sched)
        T = twisted_sums_on_support(data, cols, E)
        path_b = csum(coeff * T)
    fmc = first_moment_constant(data.q, sched)
    pred = fmc.A * data.scale
    meta = {
        "path_a": path_a, "path_b": path_b,
        "path_gap": None if path_b is None else abs(path_a - path_b),
        "support_size": size, "A": float(fmc.A), "U": float(fmc.U_closed),
        "floor": COROLLARY_FLOOR * data.scale,
        "schedule": sched.to_config(),
    }
    return MomentReport(data.q, data.g, "mollified-first", path_a, pred, data.size, time.perf_counter() - t0,
                        None, meta)


def second_moment(data: FamilyData, k: float = 1) -> MomentReport:
    """Σ_χ |L(1/2,χ)|^{2k}."""
    t0 = time.perf_counter()
    if k < 0:
        raise ValueError("k must be non-negative")
    vals = np.abs(data.L) ** (2 * k)
    value = complex(rsum(vals))
    meta = {"k": k, "per_g_k2": None if data.g == 0 else value.real / (data.scale * data.g ** (k * k))}
    return MomentReport(data.q, data.g, "second" if k == 1 else f"moment-2k(k={k:g})", value, None, data.size,
                        time.perf_counter() - t0, None, meta)


def mollified_second_moment(data: FamilyData, k: float, kappa: float,
                            sched: IntervalSchedule) -> MomentReport:
    """Σ_χ |L(1/2,χ)|^k |M(χ;1/κ)|^{kκ}."""
    _check_sched(data, sched)
    kk = k * kappa
    if abs(kk - round(kk)) > 1e-12 or round(kk) % 2:
        raise ValueError("kκ must be an even integer")
    t0 = time.perf_counter()
    M = mollifier_eval(data.pt, sched, kappa).M
    vals = np.abs(data.L) ** k * np.abs(M) ** round(kk)
    value = complex(rsum(vals))
    return MomentReport(data.q, data.g, "mollified-second", value, None, data.size, time.perf_counter() - t0,
                        None, {"k": k, "kappa": kappa, "schedule": sched.to_config()})


# ---- orthogonality over F_{q^2} ---------------------------------------------------------

@lru_cache(maxsize=8)
def _monic_structure(ctx: FieldCtx, n: int):
    """Every monic R of degree n over F_{q^2}, as (prime index, exponent) lists over the primes of degree ≤ n."""
    primes: list[tuple[Raw, int, int]] = []  # (P, root, degree)
    for m in range(1, n + 1):
        primes.extend((P, b, m) for P, b in primes_with_roots(ctx, m))
    pad = len(primes)  # dummy index whose value is the trivial class
    idx_rows, exp_rows = [], []

    def rec(start, remaining, idx, exps):
        if remaining == 0:
            idx_rows.append(idx + [pad] * (n - len(idx)))
            exp_rows.append(exps + [0] * (n - len(exps)))
            return
        for i in range(start, len(primes)):
            d = primes[i][2]
            if d > remaining:
                break
            for e in range(1, remaining // d + 1):
                rec(i + 1, remaining - e * d, idx + [i], exps + [e])

    rec(0, n, [], [])
    idx = np.array(idx_rows, dtype=np.int64).reshape(-1, n)
    exps = np.array(exp_rows, dtype=np.int64).reshape(-1, n)
    if len(idx) != ctx.q ** (2 * n):
        raise ArithmeticError("monic enumeration count is wrong")
    return primes, idx, exps


def _prime_symbols(ctx: FieldCtx, primes, c: Raw) -> np.ndarray:
    """χ_P(c) for every prime P in the list (class of c(β_P) in F_{q^{2 deg P}})."""
    out = np.empty(len(primes) + 1, dtype=np.int64)
    out[-1] = 0
    by_m: dict[int, list[int]] = {}
    for i, (_, _, m) in enumerate(primes):
        by_m.setdefault(m, []).append(i)
    for m, ids in by_m.items():
        E = ctx.ext(m)
        betas = np.array([primes[i][1] for i in ids], dtype=np.int64)
        acc = np.zeros(len(ids), dtype=np.int64)
        for coef in reversed(c):
            acc = E.vmul(acc, betas)
            acc = E.vadd(acc, np.full(len(ids), coef, dtype=np.int64)) if m == 1 else E.vadd_base(acc, coef)
        s = ctx.ext_orientation(m)
        out[ids] = np.where(acc == 0, ZERO, (s * E.log_np[acc]) % 3)
    return out


@dataclass(frozen=True)
class OrthogonalityResult:
    total: tuple[int, int]  # Σ_R χ_R(c) as a + bω
    expected: int
    is_cube: bool

    @property
    def residual(self) -> int:
        a, b = self.total
        return abs(a - self.expected) + abs(b)

    @property
    def ok(self) -> bool:
        return self.residual == 0


def orthogonality_check(ctx: FieldCtx, g: int, c: Raw) -> OrthogonalityResult:
    """Σ_{R monic, deg R = g/2+1} χ_R(c) against q^{g+2}φ(c)/|c| (cubes) or 0 (non-cubes), over F_{q^2}.

    The identity needs every prime of c to have degree at most g/2+1 in total,
    i.e. deg rad(c) ≤ g/2+1; larger c raise.
    """
    K = ctx.Fq2
    c = trim(tuple(c))
    if not c or c[-1] != 1:
        raise ValueError("c must be monic")
    n = g // 2 + 1
    parts = factor_raw(K, c) if len(c) > 1 else []
    if sum(len(P) - 1 for P, _ in parts) > n:
        raise ValueError(f"deg rad(c) exceeds g/2+1 = {n}; the identity does not apply")
    primes, idx, exps = _monic_structure(ctx, n)
    v = _prime_symbols(ctx, primes, c)[idx]
    dead = (v == ZERO).any(axis=1)
    cls = (np.where(v == ZERO, 0, v) * exps).sum(axis=1) % 3
    cnt = [int(np.sum(~dead & (cls == r))) for r in range(3)]
    total = (cnt[0] - cnt[2], cnt[1] - cnt[2])
    is_cube = all(e % 3 == 0 for _, e in parts)
    expected = 0
    if is_cube:
        frac = Fraction(ctx.q ** (2 * n))
        for P, _ in parts:
            frac *= 1 - Fraction(1, ctx.q ** (2 * (len(P) - 1)))
        expected = int(frac)
        if frac != expected:
            raise ArithmeticError("main term is not an integer")
    return OrthogonalityResult(total, expected, is_cube)


# ---- the log|L| inequality -----------------------------------------------------------------

@dataclass
class SoundReport:
    N: float
    checked: int
    skipped_zero: int
    violations: list[int]
    max_excess: float  # max over χ of lhs - rhs (negative when every χ passes)


def sound_rhs(data: FamilyData, N: float) -> np.ndarray:
    """Re Σ_{deg f ≤ N} Λ(f)χ(f)(N - deg f)/(N|f|^{1/2+1/(N log q)} deg f) + (g+2)/N."""
    q = data.q
    pt = data.pt
    pt.check_degree(N)
    total = np.zeros(data.size)
    tab = pt.table.astype(np.int64)
    for j, d in enumerate(pt.degrees):
        d = int(d)
        e = 1
        while e * d <= N + 1e-12:
            n = e * d
            w = (N - n) / (N * e * q ** (n / 2) * math.exp(n / N))
            if w:
                v = tab[:, j]
                ang = np.where(v == ZERO, 0.0, np.cos(2 * np.pi * ((e * v) % 3) / 3))
                total += w * ang
            e += 1
    return total + (data.g + 2) / N


def sound_inequality_check(data: FamilyData, N: float) -> SoundReport:
    if not 1 <= N <= data.g + 2:
        raise ValueError(f"N must lie in [1, g+2] = [1, {data.g + 2}]")
    rhs = sound_rhs(data, N)
    keep = ~data.zero
    lhs = np.full(data.size, -np.inf)
    lhs[keep] = np.log(np.abs(data.L[keep]))
    excess = lhs - rhs
    bad = np.flatnonzero(keep & (excess > 1e-9))
    return SoundReport(N, int(keep.sum()), int((~keep).sum()), bad.tolist(),
                       float(np.max(excess[keep])) if keep.any() else -math.inf)


def prop_cases(data: FamilyData, k: float, sched: IntervalSchedule, s=None):
    _check_sched(data, sched)
    return prop_cases_check(data.pt, np.abs(data.L), k, sched, s, eta_const())


# ---- squares of primes ----------------------------------------------------------------------

@dataclass
class SquaresReport:
    j: int
    k: float
    ratio: float
    bound: float
    flags: dict

    @property
    def ok(self) -> bool:
        return self.ratio <= self.bound


def squares_average_check(data: FamilyData, j: int, k: int, sched: IntervalSchedule) -> SquaresReport:
    """Σ_χ S_{j,k}(χ)²/q^{g+2} against 𝒮_k."""
    _check_sched(data, sched)
    S = s_factor(data.pt, j, k, sched)
    ratio = rsum(S ** 2) / data.scale
    half = sched.N(j) / 2
    flags = {"nonempty_square_range": half >= 1, "q>=5": data.q >= 5}
    return SquaresReport(j, k, ratio, s_k_const(k), flags)


# ---- census ------------------------------------------------------------------------------------

@dataclass
class CensusReport:
    q: int
    g: int
    nonvanishing: int
    size: int
    float_agrees: bool
    cs_bound: float
    first: complex
    second: float
    tail: dict[int, int]

    @property
    def proportion(self) -> float:
        return self.nonvanishing / self.size if self.size else math.nan

    @property
    def tail_monotone(self) -> bool:
        vals = [self.tail[v] for v in sorted(self.tail)]
        return all(a >= b for a, b in zip(vals, vals[1:]))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["proportion"] = self.proportion
        d["tail"] = [[v, self.tail[v]] for v in sorted(self.tail)]
        return _jsonable(d)


def tail_counts(L: np.ndarray, zero: np.ndarray) -> dict[int, int]:
    """N(V) = #{χ : log|L(1/2,χ)| ≥ V} for V = -2, -1, 0, ... until it reaches 0."""
    logs = np.full(len(L), -np.inf)
    nz = ~zero
    logs[nz] = np.log(np.abs(L[nz]))
    out = {}
    V = -2
    while True:
        out[V] = int(np.sum(logs >= V))
        if out[V] == 0:
            return out
        V += 1


def census(data: FamilyData, sched: IntervalSchedule | None = None) -> CensusReport:
    """Exact nonvanishing count and the bound |Σ LM|²/Σ|LM|² with M = M(χ;1)."""
    sched = IntervalSchedule.desk(data.g) if sched is None else sched
    _check_sched(data, sched)
    nonzero = int((~data.zero).sum())
    float_nz = int(np.sum(np.abs(data.L) > 1e-8))
    M = mollifier_eval(data.pt, sched, 1.0).M
    LM = data.L * M
    first = csum(LM)
    second = rsum(np.abs(LM) ** 2)
    cs = abs(first) ** 2 / second if second > 0 else 0.0
    return CensusReport(data.q, data.g, nonzero, data.size, float_nz == nonzero, cs, first, second,
                        tail_counts(data.L, data.zero))
