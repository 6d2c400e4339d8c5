"""Univariate polynomials over a :class:`GaloisField`.

Raw polynomials are tuples of coefficient codes, lowest degree first, with no
trailing zeros (the zero polynomial is ``()``).  The functions prefixed with
``p`` work on raw tuples and are what the hot loops use; :class:`Poly` wraps a
tuple together with its field for everything else.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .fields import GaloisField, prime_factors

Raw = tuple[int, ...]

ONE: Raw = (1,)
X: Raw = (0, 1)


def trim(c: Sequence[int]) -> Raw:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def deg(a: Raw) -> int:
    return len(a) - 1


def padd(F: GaloisField, a: Raw, b: Raw) -> Raw:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        if y:
            out[i] = F.add(out[i], y)
    return trim(out)


def pneg(F: GaloisField, a: Raw) -> Raw:
    return tuple(F.neg(x) for x in a)


def psub(F: GaloisField, a: Raw, b: Raw) -> Raw:
    return padd(F, a, pneg(F, b))


def pscale(F: GaloisField, a: Raw, c: int) -> Raw:
    if c == 0:
        return ()
    return tuple(F.mul(x, c) for x in a)


def pmul(F: GaloisField, a: Raw, b: Raw) -> Raw:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = add(out[i + j], mul(x, y))
    return trim(out)


def pdivmod(F: GaloisField, a: Raw, b: Raw) -> tuple[Raw, Raw]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    r = list(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    qt = [0] * (len(a) - db)
    add, mul, neg = F.add, F.mul, F.neg
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = mul(c, inv_lead)
        qt[k - db] = c
        nc = neg(c)
        for i in range(db):
            if b[i]:
                r[k - db + i] = add(r[k - db + i], mul(nc, b[i]))
        r[k] = 0
    return trim(qt), trim(r[:db])


def pmod(F: GaloisField, a: Raw, b: Raw) -> Raw:
    if len(a) < len(b):
        return a
    return pdivmod(F, a, b)[1]


def pmonic(F: GaloisField, a: Raw) -> Raw:
    if not a or a[-1] == 1:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F: GaloisField, a: Raw, b: Raw) -> Raw:
    """Monic gcd (the gcd of two zero polynomials is zero)."""
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pmulmod(F: GaloisField, a: Raw, b: Raw, m: Raw) -> Raw:
    return pmod(F, pmul(F, a, b), m)


def ppowmod(F: GaloisField, a: Raw, e: int, m: Raw) -> Raw:
    result: Raw = ONE if len(m) > 1 else ()
    a = pmod(F, a, m)
    while e:
        if e & 1:
            result = pmulmod(F, result, a, m)
        e >>= 1
        if e:
            a = pmulmod(F, a, a, m)
    return result


def pderiv(F: GaloisField, a: Raw) -> Raw:
    out = []
    for i in range(1, len(a)):
        c = 0
        for _ in range(i % F.p):
            c = F.add(c, a[i])
        out.append(c)
    return trim(out)


def peval(F: GaloisField, a: Raw, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def ppow(F: GaloisField, a: Raw, e: int) -> Raw:
    out: Raw = ONE
    for _ in range(e):
        out = pmul(F, out, a)
    return out


def pmap(F: GaloisField, a: Raw, e: int) -> Raw:
    """Apply ``x -> x**e`` to every coefficient (Frobenius when e is a p-power)."""
    return trim([F.pow(c, e) for c in a])


def resultant(F: GaloisField, a: Raw, b: Raw) -> int:
    """Res(a, b) for monic ``a``: the product of b over the roots of a."""
    if not a:
        raise ValueError("resultant with the zero polynomial")
    if a[-1] != 1:
        raise ValueError("first argument must be monic")
    res = 1
    while True:
        da = deg(a)
        if da == 0:
            return res
        b = pmod(F, b, a)
        if not b:
            return 0
        db = deg(b)
        # Res(a, b) = (-1)^{da*db} lc(b)^{da} Res(b/lc(b), a)
        lc = b[-1]
        res = F.mul(res, F.pow(lc, da))
        if (da * db) % 2:
            res = F.neg(res)
        a, b = pmonic(F, b), a


# ---- codes and enumeration ---------------------------------------------

def monic_code(a: Raw, k: int) -> int:
    """Integer label of a monic polynomial: its coefficients read in base k."""
    code = 0
    for c in reversed(a):
        code = code * k + c
    return code


def monic_from_code(code: int, k: int) -> Raw:
    out = []
    while code >= k:
        code, r = divmod(code, k)
        out.append(r)
    if code != 1:
        raise ValueError("not a monic code")
    out.append(1)
    return tuple(out)


def enumerate_monic_raw(k: int, d: int) -> Iterator[Raw]:
    """All monic polynomials of degree d over a field of size k, by code."""
    base = k ** d
    for code in range(base, 2 * base):
        # leading digit is 1 so codes base..2*base-1 are exactly the monics of degree d
        yield monic_from_code(code, k)


def random_monic_raw(rng: random.Random, k: int, d: int) -> Raw:
    return tuple(rng.randrange(k) for _ in range(d)) + (1,)


# ---- factorization ------------------------------------------------------

def _pth_root(F: GaloisField, a: Raw) -> Raw:
    """Given a(T) = b(T^p), return b with coefficients replaced by their p-th roots."""
    e = F.size // F.p
    return trim([F.pow(a[i], e) for i in range(0, len(a), F.p)])


def squarefree_decomposition(F: GaloisField, f: Raw) -> list[tuple[Raw, int]]:
    """Monic f as a product of powers of coprime square-free monic factors."""
    f = pmonic(F, f)
    if deg(f) <= 0:
        return []
    out: list[tuple[Raw, int]] = []
    d = pderiv(F, f)
    if not d:
        return [(g, e * F.p) for g, e in squarefree_decomposition(F, _pth_root(F, f))]
    c = pgcd(F, f, d)
    w = pdivmod(F, f, c)[0]
    i = 1
    while deg(w) > 0:
        y = pgcd(F, w, c)
        z = pdivmod(F, w, y)[0]
        if deg(z) > 0:
            out.append((z, i))
        i += 1
        w = y
        c = pdivmod(F, c, y)[0]
    if deg(c) > 0:
        out.extend((g, e * F.p) for g, e in squarefree_decomposition(F, _pth_root(F, c)))
    return out


def distinct_degree(F: GaloisField, f: Raw) -> list[tuple[Raw, int]]:
    """Split a square-free monic f into products of irreducibles of equal degree."""
    out = []
    h = X
    i = 0
    while deg(f) >= 2 * (i + 1):
        i += 1
        h = ppowmod(F, h, F.size, f)
        g = pgcd(F, f, psub(F, h, X))
        if deg(g) > 0:
            out.append((g, i))
            f = pdivmod(F, f, g)[0]
            h = pmod(F, h, f)
    if deg(f) > 0:
        out.append((f, deg(f)))
    return out


def equal_degree(F: GaloisField, f: Raw, d: int, rng: random.Random) -> list[Raw]:
    """Cantor–Zassenhaus splitting of a product of degree-d irreducibles (odd p)."""
    n = deg(f)
    if n == d:
        return [f]
    e = (F.size ** d - 1) // 2
    while True:
        a = trim([rng.randrange(F.size) for _ in range(n)])
        if deg(a) < 1:
            continue
        g = pgcd(F, f, a)
        if 0 < deg(g) < n:
            break
        b = psub(F, ppowmod(F, a, e, f), ONE)
        g = pgcd(F, f, b)
        if 0 < deg(g) < n:
            break
    return equal_degree(F, g, d, rng) + equal_degree(F, pdivmod(F, f, g)[0], d, rng)


def factor_raw(F: GaloisField, f: Raw, seed: int = 0) -> list[tuple[Raw, int]]:
    """Monic irreducible factors with multiplicity, sorted by (degree, code)."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if F.p == 2:
        raise NotImplementedError("even characteristic is not supported")
    rng = random.Random(seed)
    out: dict[Raw, int] = {}
    for part, mult in squarefree_decomposition(F, f):
        for block, d in distinct_degree(F, part):
            for prime in equal_degree(F, block, d, rng):
                out[prime] = out.get(prime, 0) + mult
    return sorted(out.items(), key=lambda t: (len(t[0]), monic_code(t[0], F.size)))


def is_irreducible_raw(F: GaloisField, f: Raw) -> bool:
    """Rabin's test."""
    n = deg(f)
    if n < 1:
        return False
    f = pmonic(F, f)
    if ppowmod(F, X, F.size ** n, f) != pmod(F, X, f):
        return False
    for r in prime_factors(n):
        h = ppowmod(F, X, F.size ** (n // r), f)
        if deg(pgcd(F, f, psub(F, h, X))) > 0:
            return False
    return True


# ---- wrapper types ------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """A polynomial with coefficients in ``field`` (its level)."""

    coeffs: Raw
    field: GaloisField

    def __post_init__(self):
        object.__setattr__(self, "coeffs", trim(self.coeffs))

    @property
    def degree(self) -> int:
        return deg(self.coeffs)

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def norm(self) -> int:
        """``|f| = |level|^deg f``."""
        if not self.coeffs:
            return 0
        return self.field.size ** self.degree

    def _wrap(self, c: Raw) -> "Poly":
        return Poly(c, self.field)

    def _raw(self, other) -> Raw:
        if isinstance(other, Poly):
            return other.coeffs
        if isinstance(other, int):
            return trim((other,))
        return trim(tuple(other))

    def __add__(self, other):
        return self._wrap(padd(self.field, self.coeffs, self._raw(other)))

    def __sub__(self, other):
        return self._wrap(psub(self.field, self.coeffs, self._raw(other)))

    def __neg__(self):
        return self._wrap(pneg(self.field, self.coeffs))

    def __mul__(self, other):
        return self._wrap(pmul(self.field, self.coeffs, self._raw(other)))

    def __divmod__(self, other):
        qq, rr = pdivmod(self.field, self.coeffs, self._raw(other))
        return self._wrap(qq), self._wrap(rr)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return self._wrap(pmod(self.field, self.coeffs, self._raw(other)))

    def __pow__(self, e: int):
        return self._wrap(ppow(self.field, self.coeffs, e))

    def __call__(self, x: int) -> int:
        return peval(self.field, self.coeffs, x)

    def gcd(self, other) -> "Poly":
        return self._wrap(pgcd(self.field, self.coeffs, self._raw(other)))

    def monic(self) -> "Poly":
        return self._wrap(pmonic(self.field, self.coeffs))

    def powmod(self, e: int, m) -> "Poly":
        return self._wrap(ppowmod(self.field, self.coeffs, e, self._raw(m)))

    def code(self) -> int:
        return monic_code(self.coeffs, self.field.size)

    def is_irreducible(self) -> bool:
        return is_irreducible_raw(self.field, self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms)


@dataclass(frozen=True)
class Factorization:
    """``unit * prod(prime**e)`` with monic, distinct, irreducible primes."""

    factors: tuple[tuple[Poly, int], ...]
    unit: int
    field: GaloisField

    def expand(self) -> Poly:
        acc: Raw = (self.unit,)
        for prime, e in self.factors:
            acc = pmul(self.field, acc, ppow(self.field, prime.coeffs, e))
        return Poly(acc, self.field)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.factors)

    def primes(self) -> tuple[Poly, ...]:
        return tuple(p for p, _ in self.factors)


def factor(f: Poly, seed: int = 0, check: bool = False) -> Factorization:
    """Factor f into monic irreducibles (distinct-degree then equal-degree)."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    F = f.field
    parts = factor_raw(F, f.coeffs, seed)
    fac = Factorization(tuple((Poly(pr, F), e) for pr, e in parts), f.coeffs[-1], F)
    if check:
        if fac.expand() != f or not all(pr.is_irreducible() for pr, _ in fac.factors):
            raise ArithmeticError("factorization failed verification")
    return fac


def enumerate_monic(d: int, level: GaloisField) -> Iterator[Poly]:
    if d < 0:
        raise ValueError("degree must be non-negative")
    for c in enumerate_monic_raw(level.size, d):
        yield Poly(c, level)


def prime_count(n: int, q: int) -> int:
    """Number of monic irreducibles of degree n over F_q (Möbius inversion)."""
    if n < 1:
        raise ValueError("prime_count needs n >= 1")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += mobius_int(d) * q ** (n // d)
    return total // n


def mobius_int(n: int) -> int:
    fs = prime_factors(n)
    m = n
    for p in fs:
        m //= p
        if m % p == 0:
            return 0
    return -1 if len(fs) % 2 else 1


def primes_upto(F: GaloisField, D: int) -> list[Raw]:
    """All monic irreducibles of degree 1..D over F, sorted by (degree, code).

    A sieve: a monic of degree d is composite iff it is P*h with P prime of
    degree at most d/2, so those products are struck out degree by degree.
    """
    k = F.size
    primes: list[Raw] = []
    by_deg: dict[int, list[Raw]] = {}
    for d in range(1, D + 1):
        composite = set()
        for e in range(1, d // 2 + 1):
            for P in by_deg[e]:
                for h in enumerate_monic_raw(k, d - e):
                    composite.add(monic_code(pmul(F, P, h), k))
        found = [monic_from_code(c, k) for c in range(k ** d, 2 * k ** d) if c not in composite]
        by_deg[d] = found
        primes.extend(found)
    return primes
