"""Finite fields as towers of simple extensions, with table-driven arithmetic.

Every element is encoded as a non-negative integer: for an extension
``K[z]/(M)`` of degree ``m`` an element ``c_0 + c_1 z + ... + c_{m-1} z^{m-1}``
is stored as ``c_0 + c_1 k + ... + c_{m-1} k^{m-1}`` where ``k = |K|`` and the
``c_i`` are codes in ``K``.  The prime field uses the residues ``0..p-1``.

Multiplication goes through discrete log / antilog tables, addition through
per-digit addition (with a full table for small fields).  Vectorized variants
operate on numpy integer arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

# fields larger than this do not get log tables
MAX_TABLE_SIZE = 1 << 22
# full addition tables only below this many entries
MAX_ADD_TABLE = 1 << 20


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, r)`` with ``q = p**r``, or None if q is not a prime power."""
    if q < 2:
        return None
    fs = prime_factors(q)
    if len(fs) != 1:
        return None
    p, r = fs[0], 0
    while q > 1:
        q //= p
        r += 1
    return p, r


class GaloisField:
    """The field ``base[z]/(modulus)``, or the prime field when ``base`` is None.

    ``modulus`` lists the coefficients of a monic irreducible polynomial over
    ``base``, lowest degree first.  ``generator`` is the smallest element code
    that generates the multiplicative group.
    """

    def __init__(self, p: int, base: "GaloisField | None" = None,
                 modulus: tuple[int, ...] | None = None):
        self.p = p
        self.base = base
        if base is None:
            self.size = p
            self.degree = 1
            self.abs_degree = 1
            self.modulus = None
        else:
            if modulus is None or modulus[-1] != 1:
                raise ValueError("extension needs a monic modulus")
            self.modulus = tuple(modulus)
            self.degree = len(modulus) - 1
            self.size = base.size ** self.degree
            self.abs_degree = base.abs_degree * self.degree
        if self.size > MAX_TABLE_SIZE:
            raise ValueError(f"field of size {self.size} is too large for table arithmetic")
        self.order = self.size - 1
        self._build_tables()

    # ---- construction -------------------------------------------------
    def _digits(self, a: int) -> list[int]:
        k = self.base.size
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, k)
            out.append(r)
        return out

    def _undigits(self, ds) -> int:
        k = self.base.size
        a = 0
        for d in reversed(ds):
            a = a * k + d
        return a

    def _slow_mul(self, a: int, b: int) -> int:
        """Schoolbook multiplication modulo the defining polynomial."""
        if self.base is None:
            return a * b % self.p
        K = self.base
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(da):
            if x == 0:
                continue
            for j, y in enumerate(db):
                if y:
                    prod[i + j] = K.add(prod[i + j], K.mul(x, y))
        m = self.modulus
        for top in range(len(prod) - 1, self.degree - 1, -1):
            c = prod[top]
            if c:
                for i in range(self.degree):
                    prod[top - self.degree + i] = K.sub(prod[top - self.degree + i], K.mul(c, m[i]))
        return self._undigits(prod[: self.degree])

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _is_generator(self, a: int) -> bool:
        if a == 0:
            return False
        if self.order == 1:
            return a == 1
        return all(self._slow_pow(a, self.order // r) != 1 for r in prime_factors(self.order))

    def _build_tables(self) -> None:
        if self.base is not None:
            self._base_add = self.base.add
        gen = next(a for a in range(1, self.size) if self._is_generator(a))
        self.generator = gen
        exp = [0] * (2 * self.order)
        log = [-1] * self.size
        x = 1
        for i in range(self.order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, gen)
        for i in range(self.order, 2 * self.order):
            exp[i] = exp[i - self.order]
        self.exp = exp
        self.log = log
        self.exp_np = np.array(exp, dtype=np.int64)
        self.log_np = np.array(log, dtype=np.int64)
        if self.base is None:
            self._add_table = None
        elif self.size * self.size <= MAX_ADD_TABLE:
            tab = [0] * (self.size * self.size)
            digits = [self._digits(a) for a in range(self.size)]
            K = self.base
            for a in range(self.size):
                da = digits[a]
                for b in range(self.size):
                    db = digits[b]
                    tab[a * self.size + b] = self._undigits([K.add(x, y) for x, y in zip(da, db)])
            self._add_table = tab
        else:
            self._add_table = None
        self._neg = [self._neg_slow(a) for a in range(self.size)]
        self._neg_np = np.array(self._neg, dtype=np.int64)
        self._add_np = (np.array(self._add_table, dtype=np.int64).reshape(self.size, self.size)
                        if self._add_table is not None else None)

    def _neg_slow(self, a: int) -> int:
        if self.base is None:
            return (-a) % self.p
        return self._undigits([self.base.neg(d) for d in self._digits(a)])

    # ---- scalar arithmetic -------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.base is None:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a * self.size + b]
        K = self.base
        return self._undigits([K.add(x, y) for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(self.order - self.log[a]) % self.order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self.exp[(self.log[a] * e) % self.order]

    def embed(self, a: int) -> int:
        """Embed an element of the base field (its code is unchanged)."""
        return a

    # ---- vectorized arithmetic ---------------------------------------
    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.base is None:
            return (a + b) % self.p
        if self._add_np is not None:
            return self._add_np[a, b]
        k = self.base.size
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.degree):
            da, db = (a // scale) % k, (b // scale) % k
            out += self.base.vadd(da, db) * scale
            scale *= k
        return out

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        la, lb = self.log_np[a], self.log_np[b]
        out = self.exp_np[np.where((la < 0) | (lb < 0), 0, la + lb)]
        return np.where((la < 0) | (lb < 0), 0, out)

    def vmul_const(self, a: np.ndarray, c: int) -> np.ndarray:
        if c == 0:
            return np.zeros_like(a)
        la = self.log_np[a]
        return np.where(la < 0, 0, self.exp_np[np.maximum(la, 0) + self.log[c]])

    def vadd_base(self, a: np.ndarray, c: np.ndarray | int) -> np.ndarray:
        """Add elements ``c`` of the base field to the constant digit of ``a``."""
        k = self.base.size
        d0 = a % k
        return a - d0 + self.base.vadd(d0, np.asarray(c, dtype=np.int64))

    # ---- structure ----------------------------------------------------
    def frobenius(self, a: int, power: int) -> int:
        """``a ** power`` for a power of the characteristic (any exponent works)."""
        return self.pow(a, power)

    @cached_property
    def trace_table(self) -> list[int]:
        """Absolute trace to the prime field, for every element code."""
        out = []
        for a in range(self.size):
            t = 0
            x = a
            for _ in range(self.abs_degree):
                t = self.add(t, x)
                x = self.pow(x, self.p)
            if t >= self.p:
                raise ArithmeticError("trace did not land in the prime field")
            out.append(t)
        return out

    def trace(self, a: int) -> int:
        return self.trace_table[a]

    def __repr__(self) -> str:
        return f"GaloisField(size={self.size}, p={self.p})"


def _has_root(K: GaloisField, poly: tuple[int, ...]) -> bool:
    for x in range(K.size):
        acc = 0
        for c in reversed(poly):
            acc = K.add(K.mul(acc, x), c)
        if acc == 0:
            return True
    return False


def monic_by_code(K: GaloisField, degree: int):
    """Monic polynomials of the given degree over K, in increasing code order."""
    k = K.size
    for code in range(k ** degree):
        coeffs = []
        c = code
        for _ in range(degree):
            c, r = divmod(c, k)
            coeffs.append(r)
        yield tuple(coeffs) + (1,)


def smallest_irreducible(K: GaloisField, degree: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree 2 or 3 over K (root test suffices)."""
    if degree not in (1, 2, 3):
        raise NotImplementedError("root test certifies irreducibility only up to degree 3")
    if degree == 1:
        return (0, 1)
    for poly in monic_by_code(K, degree):
        if not _has_root(K, poly):
            return poly
    raise ArithmeticError("no irreducible polynomial found")


def smallest_primitive(K: GaloisField, degree: int) -> tuple[int, ...]:
    """Smallest monic polynomial M over K for which z generates (K[z]/M)^*.

    Such M is automatically irreducible: in a non-field the unit group is
    smaller than ``|K|**degree - 1``.
    """
    k = K.size
    order = k ** degree - 1
    for poly in monic_by_code(K, degree):
        if poly[0] == 0:
            continue
        # walk x -> x*z on digit vectors until we return to 1
        x = [1] + [0] * (degree - 1)
        steps = 0
        while True:
            top = x[-1]
            x = [0] + x[:-1]
            if top:
                for i in range(degree):
                    x[i] = K.sub(x[i], K.mul(top, poly[i]))
            steps += 1
            if x[0] == 1 and not any(x[1:]):
                break
            if steps > order:
                break
        if steps == order:
            return poly
    raise ArithmeticError("no primitive polynomial found")


@dataclass(eq=False)
class FieldCtx:
    """The tower F_p ⊂ F_q ⊂ F_{q^2} for an odd prime power q ≡ 2 mod 3."""

    q: int
    p: int = field(init=False)
    r: int = field(init=False)
    Fq: GaloisField = field(init=False, repr=False)
    Fq2: GaloisField = field(init=False, repr=False)
    m1: tuple[int, ...] | None = field(init=False)
    m2: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        pr = prime_power(self.q)
        if pr is None:
            raise ValueError(f"q={self.q} is not a prime power")
        if self.q % 2 == 0 or self.q % 3 != 2:
            raise ValueError(f"q={self.q} must be odd with q ≡ 2 mod 3")
        self.p, self.r = pr
        Fp = GaloisField(self.p)
        if self.r == 1:
            self.Fq, self.m1 = Fp, None
        else:
            self.m1 = smallest_irreducible(Fp, self.r)
            self.Fq = GaloisField(self.p, Fp, self.m1)
        self.m2 = smallest_irreducible(self.Fq, 2)
        self.Fq2 = GaloisField(self.p, self.Fq, self.m2)
        # Omega sends exp(2 pi i/3) to g^{(q^2-1)/3}
        self.omega_f = self.Fq2.pow(self.Fq2.generator, (self.q * self.q - 1) // 3)
        self._ext: dict[int, GaloisField] = {1: self.Fq2}

    def in_Fq(self, a: int) -> bool:
        """Membership of an F_{q^2} element in F_q via the Frobenius fixed point."""
        return self.Fq2.pow(a, self.q) == a

    def conj(self, a: int) -> int:
        """The F_q-Frobenius ``a -> a^q`` on F_{q^2}."""
        return self.Fq2.pow(a, self.q)

    def cube_class(self, a: int) -> int:
        """Exponent e in {0,1,2} with a^{(q^2-1)/3} = Omega(xi^e); a must be nonzero."""
        if a == 0:
            raise ZeroDivisionError("cube class of zero")
        return self.Fq2.log[a] % 3

    def ext(self, m: int) -> GaloisField:
        """F_{q^{2m}} as an extension of F_{q^2} defined by a primitive polynomial."""
        if m not in self._ext:
            self._ext[m] = GaloisField(self.p, self.Fq2, smallest_primitive(self.Fq2, m))
        return self._ext[m]

    def ext_orientation(self, m: int) -> int:
        """Multiplier s with chi = s * log_gen(x) mod 3 inside F_{q^{2m}}."""
        E = self.ext(m)
        zeta = E.pow(E.generator, E.order // 3)
        if zeta == self.omega_f:
            return 1
        if zeta == self.Fq2.mul(self.omega_f, self.omega_f):
            return 2
        raise ArithmeticError("cube roots of unity do not match the base field")
