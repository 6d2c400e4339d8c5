"""Classical arithmetic functions on monic polynomials.

All of them depend only on the factorization, so they accept either a monic
:class:`Poly` (factored on the fly) or a :class:`Factorization`.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Sequence

from .poly import Factorization, Poly, factor


def _fac(f: Poly | Factorization) -> Factorization:
    if isinstance(f, Factorization):
        return f
    if not f.is_monic:
        raise ValueError("arithmetic functions take monic polynomials")
    return factor(f)


def _prime_norms(fac: Factorization) -> list[tuple[int, int]]:
    """(|P|, exponent) for each prime factor."""
    return [(p.norm(), e) for p, e in fac.factors]


def mobius(f) -> int:
    fac = _fac(f)
    if any(e > 1 for e in fac.exponents):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def euler_phi(f) -> int:
    fac = _fac(f)
    out = 1
    for norm, e in _prime_norms(fac):
        out *= norm ** (e - 1) * (norm - 1)
    return out


def von_mangoldt(f) -> int:
    """Λ(f) = deg P when f = P^k, else 0 (in units of log q at f's level)."""
    fac = _fac(f)
    if len(fac.factors) != 1:
        return 0
    return fac.factors[0][0].degree


def big_omega(f) -> int:
    return sum(_fac(f).exponents)


def liouville(f) -> int:
    return -1 if big_omega(f) % 2 else 1


def nu(f) -> Fraction:
    """ν(P^a) = 1/a!, extended multiplicatively."""
    out = Fraction(1)
    for e in _fac(f).exponents:
        out /= math.factorial(e)
    return out


def nu_j(f, j: int) -> Fraction:
    """The j-fold Dirichlet convolution of ν: ν_j(P^a) = j^a / a!."""
    out = Fraction(1)
    for e in _fac(f).exponents:
        out *= Fraction(j ** e, math.factorial(e))
    return out


def compositions(a: int, n: int):
    """Ordered n-tuples of non-negative integers summing to a."""
    if n == 1:
        yield (a,)
        return
    for first in range(a + 1):
        for rest in compositions(a - first, n - 1):
            yield (first,) + rest


def nu_trunc_exponents(exponents: Sequence[int], n: int, ell: int) -> Fraction:
    """ν_n(f;ℓ) = Σ over ordered f = f_1⋯f_n with Ω(f_i) ≤ ℓ of ν(f_1)⋯ν(f_n)."""
    total = Fraction(0)
    for split in itertools.product(*(list(compositions(a, n)) for a in exponents)):
        # split[k][i] is the exponent of the k-th prime in f_i
        if any(sum(part[i] for part in split) > ell for i in range(n)):
            continue
        term = Fraction(1)
        for part in split:
            for e in part:
                term /= math.factorial(e)
        total += term
    return total


def nu_trunc(f, n: int, ell: int) -> Fraction:
    return nu_trunc_exponents(_fac(f).exponents, n, ell)


_TABLE: dict[str, Callable] = {
    "mobius": mobius,
    "euler_phi": euler_phi,
    "von_mangoldt": von_mangoldt,
    "liouville": liouville,
    "big_omega": big_omega,
    "nu": nu,
}


def arith_fn(f, which: str, *args):
    """Dispatch by name; ``nu_j`` takes ``j`` and ``nu_trunc`` takes ``(n, ell)``."""
    if which == "nu_j":
        return nu_j(f, *args)
    if which == "nu_trunc":
        return nu_trunc(f, *args)
    try:
        return _TABLE[which](f)
    except KeyError:
        raise ValueError(f"unknown arithmetic function {which!r}") from None
