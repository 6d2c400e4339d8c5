"""Cubic residue symbols over F_{q^2}[T] and the characters they define.

Values in μ₃ ∪ {0} are stored as exponents: ``k`` in {0, 1, 2} stands for
ξ₃^k with ξ₃ = exp(2πi/3), and :data:`ZERO` (= 3) stands for the value 0.
The same four-symbol alphabet is used by the binary cache.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .fields import FieldCtx
from .poly import (Poly, Raw, factor_raw, is_irreducible_raw, pgcd, pmod, ppowmod,
                   resultant)

ZERO = 3
XI = cmath.exp(2j * cmath.pi / 3)
MU3 = (1.0 + 0j, XI, XI * XI)


def to_complex(e: int) -> complex:
    return 0j if e == ZERO else MU3[e]


def mu_mul(a: int, b: int) -> int:
    if a == ZERO or b == ZERO:
        return ZERO
    return (a + b) % 3


def mu_pow(a: int, n: int) -> int:
    if a == ZERO:
        return ZERO if n else 0
    return (a * n) % 3


def mu_conj(a: int) -> int:
    return a if a == ZERO else (-a) % 3


@dataclass(frozen=True)
class CubeRootMap:
    """Ω: μ₃ → cube roots of unity in F_{q^2}, with ξ₃ ↦ g^{(q^2-1)/3}.

    ``flipped=True`` is the other isomorphism (ξ₃ ↦ g^{2(q^2-1)/3}); it turns
    every residue symbol into its conjugate.
    """

    ctx: FieldCtx
    flipped: bool = False

    def image(self, k: int) -> int:
        e = (-k) % 3 if self.flipped else k % 3
        return self.ctx.Fq2.pow(self.ctx.omega_f, e)

    def preimage(self, x: int) -> int:
        """The exponent k with Ω(ξ₃^k) = x, for x a cube root of unity."""
        for k in range(3):
            if self.image(k) == x:
                return k
        raise ValueError(f"{x} is not a cube root of unity in F_q^2")


def _level_raw(ctx: FieldCtx, f: Poly | Raw) -> Raw:
    if isinstance(f, Poly):
        if f.field.size not in (ctx.q, ctx.q * ctx.q):
            raise ValueError("polynomial is not over F_q or F_q^2")
        return f.coeffs
    return tuple(f)


def residue_symbol(ctx: FieldCtx, P: Poly | Raw, f: Poly | Raw,
                   omega: CubeRootMap | None = None, check: bool = True) -> int:
    """χ_P(f) by modular exponentiation, for a monic prime P over F_{q^2}.

    Codes of F_q are codes of F_{q^2}, so f may live at either level.
    """
    K = ctx.Fq2
    P, f = _level_raw(ctx, P), _level_raw(ctx, f)
    if check and (not P or P[-1] != 1 or not is_irreducible_raw(K, P)):
        raise ValueError("residue_symbol needs a monic irreducible modulus")
    r = pmod(K, f, P)
    if not r:
        return ZERO
    e = (K.size ** (len(P) - 1) - 1) // 3
    v = ppowmod(K, r, e, P)
    if len(v) != 1:
        raise ArithmeticError("power residue is not a constant")
    if omega is None:
        k = K.log[v[0]] // ((K.size - 1) // 3)
        if K.log[v[0]] % ((K.size - 1) // 3):
            raise ArithmeticError("power residue is not a cube root of unity")
        return k
    return omega.preimage(v[0])


def symbol_by_resultant(ctx: FieldCtx, a: Poly | Raw, b: Poly | Raw) -> int:
    """χ_a(b) for any monic a, as the cubic class of Res(a, b) in F_{q^2}."""
    res = resultant(ctx.Fq2, _level_raw(ctx, a), _level_raw(ctx, b))
    return ZERO if res == 0 else ctx.cube_class(res)


def symbol(ctx: FieldCtx, a: Poly | Raw, b: Poly | Raw) -> int:
    """χ_a(b) for any monic a by factoring a and multiplying prime symbols."""
    a = _level_raw(ctx, a)
    out = 0
    for P, e in factor_raw(ctx.Fq2, a):
        out = mu_mul(out, mu_pow(residue_symbol(ctx, P, b, check=False), e))
    return out


def check_reciprocity(ctx: FieldCtx, a: Poly | Raw, b: Poly | Raw) -> bool:
    """Whether χ_a(b) = χ_b(a) for coprime monic a, b over F_{q^2}."""
    a, b = _level_raw(ctx, a), _level_raw(ctx, b)
    if not a or not b or a[-1] != 1 or b[-1] != 1:
        raise ValueError("reciprocity needs monic arguments")
    if len(pgcd(ctx.Fq2, a, b)) > 1:
        raise ValueError("reciprocity needs coprime arguments")
    return symbol(ctx, a, b) == symbol(ctx, b, a)


@dataclass
class CubicCharacter:
    """χ_F for a monic square-free F over F_{q^2}, viewed on F_q[T].

    ``primes`` are the monic prime factors of F.  When the character comes
    from a family, ``prime_values`` holds χ on every F_q-prime of degree at
    most the family's table degree (keyed by the prime's raw tuple).
    """

    ctx: FieldCtx
    modulus: Raw
    primes: tuple[Raw, ...]
    conj: bool = False
    prime_values: dict[Raw, int] | None = field(default=None, repr=False)

    @classmethod
    def from_modulus(cls, ctx: FieldCtx, F: Poly | Raw) -> "CubicCharacter":
        F = _level_raw(ctx, F)
        parts = factor_raw(ctx.Fq2, F)
        if any(e > 1 for _, e in parts):
            raise ValueError("modulus must be square-free")
        return cls(ctx, F, tuple(P for P, _ in parts))

    def conjugate(self) -> "CubicCharacter":
        return CubicCharacter(self.ctx, self.modulus, self.primes, not self.conj,
                              None if self.prime_values is None
                              else {k: mu_conj(v) for k, v in self.prime_values.items()})

    @property
    def genus(self) -> int:
        return 2 * (len(self.modulus) - 1) - 2

    def conductor_degree(self) -> int:
        """Degree over F_q of the product of the F_q-primes below the factors of F."""
        total = 0
        for P in self.primes:
            d = len(P) - 1
            fixed = all(self.ctx.in_Fq(c) for c in P)
            total += d if fixed else 2 * d
        return total

    def __call__(self, f: Poly | Raw) -> int:
        return char_eval(self, f)

    def value_on_prime(self, P: Raw) -> int:
        """χ(P) for an F_q-prime P, from the cache when available."""
        if self.prime_values is not None and P in self.prime_values:
            return self.prime_values[P]
        return char_eval(self, P)


def char_eval(chi: CubicCharacter, f: Poly | Raw) -> int:
    """χ_F(f) as the product of the prime residue symbols of F."""
    f = _level_raw(chi.ctx, f)
    f = pmod(chi.ctx.Fq2, f, chi.modulus)
    if not f:
        return ZERO
    out = 0
    for P in chi.primes:
        out = mu_mul(out, residue_symbol(chi.ctx, P, f, check=False))
        if out == ZERO:
            return ZERO
    return mu_conj(out) if chi.conj else out
