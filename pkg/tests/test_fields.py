import pytest
from hypothesis import given, strategies as st

from cubicmoments.fields import FieldCtx, GaloisField, prime_power


@pytest.mark.parametrize("q", [4, 7, 13, 6, 1, 9])
def test_bad_q_rejected(q):
    with pytest.raises(ValueError):
        FieldCtx(q)


def test_prime_power():
    assert prime_power(125) == (5, 3)
    assert prime_power(12) is None


def test_tower_sizes(ctx):
    assert ctx.Fq.size == 5
    assert ctx.Fq2.size == 25
    assert ctx.p == 5 and ctx.r == 1


def test_generator_has_full_order(ctx):
    K = ctx.Fq2
    seen = {K.pow(K.generator, i) for i in range(K.order)}
    assert len(seen) == 24


def test_fq_embedded_as_frobenius_fixed_points(ctx):
    fixed = [a for a in range(25) if ctx.in_Fq(a)]
    assert fixed == [0, 1, 2, 3, 4]


def test_omega_is_primitive_cube_root(ctx):
    w = ctx.omega_f
    assert w != 1 and ctx.Fq2.pow(w, 3) == 1
    # no cube roots of unity in F_5 besides 1
    assert not ctx.in_Fq(w)


def test_cube_class_zero_raises(ctx):
    with pytest.raises(ZeroDivisionError):
        ctx.cube_class(0)


def test_q125_tower():
    c = FieldCtx(125)
    assert c.Fq.size == 125 and c.r == 3
    a = c.Fq2.generator
    assert c.Fq2.pow(a, c.Fq2.order) == 1


elems = st.integers(0, 24)


@given(elems, elems, elems)
def test_field_axioms(a, b, c):
    K = FieldCtx(5).Fq2
    assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    assert K.add(a, K.neg(a)) == 0
    if a:
        assert K.mul(a, K.inv(a)) == 1


@given(elems, elems)
def test_trace_linear_and_frobenius(a, b):
    c = FieldCtx(5)
    K = c.Fq2
    assert K.trace(K.add(a, b)) == (K.trace(a) + K.trace(b)) % 5
    assert K.trace(c.conj(a)) == K.trace(a)
    assert c.conj(c.conj(a)) == a


def test_vectorized_matches_scalar(ctx):
    import numpy as np
    K = ctx.Fq2
    a = np.arange(25)
    b = (a * 7 + 3) % 25
    assert list(K.vmul(a, b)) == [K.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert list(K.vadd(a, b)) == [K.add(int(x), int(y)) for x, y in zip(a, b)]


def test_extension_requires_monic():
    with pytest.raises(ValueError):
        GaloisField(5, GaloisField(5), (2, 0, 2))
