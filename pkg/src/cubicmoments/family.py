"""Enumeration of the family 𝒞(g) and its table of prime values.

A character χ_F is stored by the list of its prime factors over F_{q^2}.  For a
prime π of degree m with a root β in F_{q^{2m}} and any f over F_q,

    χ_π(f) = cubic class of f(β) in F_{q^{2m}},

because F_{q^2}[T]/(π) ≅ F_{q^{2m}} sends T to β.  Evaluating every F_q-prime
at every β is a handful of vectorized table lookups, after which χ_F on a
prime is the sum of exponents over the factors of F.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .characters import ZERO, CubicCharacter
from .fields import FieldCtx, GaloisField
from .poly import Raw, monic_code, pmap, pmul, primes_upto, trim

log = logging.getLogger(__name__)

# β values evaluated per vectorized block
_BLOCK = 256


def _minpoly(E: GaloisField, orbit: list[int]) -> Raw:
    """Product of (T - b) over the orbit, with coefficients in E."""
    poly = [1]
    for b in orbit:
        nb = E.neg(b)
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = E.add(nxt[i + 1], c)
            nxt[i] = E.add(nxt[i], E.mul(c, nb))
        poly = nxt
    return tuple(poly)


def primes_with_roots(ctx: FieldCtx, m: int) -> list[tuple[Raw, int]]:
    """Every monic prime of degree m over F_{q^2}, paired with one root in F_{q^{2m}}.

    Sorted by code.  The root is the smallest element code in its Frobenius orbit.
    """
    K = ctx.Fq2
    Q = K.size
    if m == 1:
        return [((K.neg(b), 1), b) for b in range(Q)]
    E = ctx.ext(m)
    out = []
    for beta in range(E.size):
        orbit = [beta]
        x = E.pow(beta, Q)
        while x != beta:
            orbit.append(x)
            x = E.pow(x, Q)
        if len(orbit) != m or min(orbit) != beta:
            continue
        mp = _minpoly(E, orbit)
        if any(c >= Q for c in mp):
            raise ArithmeticError("minimal polynomial left F_q^2")
        out.append((mp, beta))
    out.sort(key=lambda t: monic_code(t[0], Q))
    return out


def evaluate_at_roots(ctx: FieldCtx, m: int, roots: np.ndarray, polys: list[Raw]) -> np.ndarray:
    """Cubic classes χ_π(f) for f in ``polys`` (over F_q^2) at roots in F_{q^{2m}}.

    Returns an int8 array of shape (len(roots), len(polys)) with entries in {0,1,2,ZERO}.
    """
    E = ctx.ext(m)
    s = ctx.ext_orientation(m)
    D = max(len(f) for f in polys) - 1
    C = np.zeros((len(polys), D + 1), dtype=np.int64)
    for i, f in enumerate(polys):
        C[i, : len(f)] = f
    out = np.empty((len(roots), len(polys)), dtype=np.int8)
    for lo in range(0, len(roots), _BLOCK):
        betas = np.asarray(roots[lo: lo + _BLOCK], dtype=np.int64)
        acc = np.zeros((len(betas), len(polys)), dtype=np.int64)
        for k in range(D, -1, -1):
            acc = E.vmul(acc, betas[:, None])
            acc = E.vadd_base(acc, C[None, :, k])
        lg = E.log_np[acc]
        vals = (s * lg) % 3
        out[lo: lo + len(betas)] = np.where(acc == 0, ZERO, vals).astype(np.int8)
    return out


@lru_cache(maxsize=None)
def _roots_of(ctx: FieldCtx, m: int) -> dict[Raw, int]:
    return dict(primes_with_roots(ctx, m))


def combine(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Multiply two arrays of μ₃ ∪ {0} exponents."""
    z = (a == ZERO) | (b == ZERO)
    return np.where(z, ZERO, (a.astype(np.int16) + b) % 3).astype(np.int8)


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@dataclass
class FamilyCg:
    """The characters χ_F, F ∈ 𝒞(g), with χ tabulated on F_q-primes.

    ``table[i, j]`` is χ_{F_i}(fq_primes[j]) as an exponent (ZERO for 0).
    ``pis`` are the eligible primes over F_{q^2}; ``prime_sets[i]`` indexes
    the factors of ``moduli[i]``.
    """

    ctx: FieldCtx
    g: int
    moduli: list[Raw]
    prime_sets: list[tuple[int, ...]]
    pis: list[Raw]
    fq_primes: list[Raw]
    table: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.moduli)

    @property
    def q(self) -> int:
        return self.ctx.q

    @cached_property
    def fq_degrees(self) -> np.ndarray:
        return np.array([len(P) - 1 for P in self.fq_primes], dtype=np.int64)

    @cached_property
    def prime_index(self) -> dict[Raw, int]:
        return {P: j for j, P in enumerate(self.fq_primes)}

    @property
    def table_degree(self) -> int:
        return int(self.fq_degrees.max()) if len(self.fq_primes) else 0

    def character(self, i: int) -> CubicCharacter:
        row = self.table[i]
        return CubicCharacter(self.ctx, self.moduli[i], tuple(self.pis[k] for k in self.prime_sets[i]),
                              prime_values={P: int(row[j]) for j, P in enumerate(self.fq_primes)})

    @property
    def characters(self) -> list[CubicCharacter]:
        return [self.character(i) for i in range(len(self))]

    @cached_property
    def conj_index(self) -> np.ndarray:
        """Index of the family member whose modulus is the Frobenius conjugate."""
        pos = {F: i for i, F in enumerate(self.moduli)}
        return np.array([pos[pmap(self.ctx.Fq2, F, self.ctx.q)] for F in self.moduli], dtype=np.int64)

    def values(self, P: Raw) -> np.ndarray:
        """Column of χ(P) over the family."""
        return self.table[:, self.prime_index[P]]

    def column(self, f: Raw) -> np.ndarray:
        """χ(f) exponents over the family for any f over F_q (table not required)."""
        if f in self.prime_index:
            return self.values(f)
        ctx = self.ctx
        f2 = tuple(ctx.Fq2.embed(c) for c in f)
        per_pi = np.empty(len(self.pis), dtype=np.int8)
        by_m: dict[int, list[int]] = {}
        for i, P in enumerate(self.pis):
            by_m.setdefault(len(P) - 1, []).append(i)
        for m, idx in by_m.items():
            roots = _roots_of(ctx, m)
            per_pi[idx] = evaluate_at_roots(ctx, m, np.array([roots[self.pis[i]] for i in idx]), [f2])[:, 0]
        out = np.zeros(len(self), dtype=np.int8)
        for size in {len(s) for s in self.prime_sets}:
            members = [i for i, s in enumerate(self.prime_sets) if len(s) == size]
            idx = np.array([self.prime_sets[i] for i in members], dtype=np.int64)
            acc = per_pi[idx[:, 0]]
            for t in range(1, size):
                acc = combine(acc, per_pi[idx[:, t]])
            out[members] = acc
        return out


def enumerate_family(ctx: FieldCtx, g: int, table_degree: int | None = None,
                     include_imprimitive: bool = False) -> FamilyCg:
    """All χ_F with F monic square-free of degree g/2+1 over F_{q^2} and no F_q-prime dividing F.

    An F_q-prime divides F exactly when F has a factor with coefficients in
    F_q (odd degree primes stay prime over F_{q^2}) or F is divisible by both
    halves π, π̃ of an even degree prime.  Such F give imprimitive characters.
    ``include_imprimitive=True`` keeps the products ππ̃ (it only drops factors
    with all coefficients in F_q); those extra members are not genus g.
    """
    if g < 0 or g % 2:
        raise ValueError("genus must be even and non-negative")
    n = g // 2 + 1
    D = g + 2 if table_degree is None else table_degree
    K = ctx.Fq2
    fq_primes = primes_upto(ctx.Fq, D)

    pis: list[Raw] = []
    rows = []
    by_degree: dict[int, list[int]] = {}
    for m in range(1, n + 1):
        found = [(P, b) for P, b in primes_with_roots(ctx, m)
                 if not all(ctx.in_Fq(c) for c in P)]
        start = len(pis)
        pis.extend(P for P, _ in found)
        by_degree[m] = list(range(start, len(pis)))
        if found:
            rows.append(evaluate_at_roots(ctx, m, np.array([b for _, b in found]), fq_primes))
        log.debug("degree %d: %d eligible primes", m, len(found))
    rows_all = np.concatenate(rows) if rows else np.zeros((0, len(fq_primes)), dtype=np.int8)

    index = {P: i for i, P in enumerate(pis)}
    conj = [index[pmap(K, P, ctx.q)] for P in pis]

    combos: list[tuple[int, ...]] = []
    for part in _partitions(n):
        groups = []
        for m in sorted(set(part)):
            groups.append(itertools.combinations(by_degree[m], part.count(m)))
        for choice in itertools.product(*groups):
            idx = tuple(i for grp in choice for i in grp)
            s = set(idx)
            if not include_imprimitive and any(conj[i] in s for i in idx):
                continue
            combos.append(idx)

    moduli = []
    for idx in combos:
        F: Raw = (1,)
        for i in idx:
            F = pmul(K, F, pis[i])
        moduli.append(trim(F))
    order = sorted(range(len(combos)), key=lambda i: monic_code(moduli[i], K.size))
    combos = [combos[i] for i in order]
    moduli = [moduli[i] for i in order]

    table = np.zeros((len(combos), len(fq_primes)), dtype=np.int8)
    by_size: dict[int, list[int]] = {}
    for i, idx in enumerate(combos):
        by_size.setdefault(len(idx), []).append(i)
    for s, members in by_size.items():
        idx = np.array([combos[i] for i in members], dtype=np.int64)
        acc = rows_all[idx[:, 0]]
        for t in range(1, s):
            acc = combine(acc, rows_all[idx[:, t]])
        table[members] = acc
    return FamilyCg(ctx, g, moduli, combos, pis, fq_primes, table)
