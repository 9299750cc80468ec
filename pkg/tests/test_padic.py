from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sympow_padic.errors import DomainError, PrecisionShortfall
from sympow_padic.padic import (
    AtLeast,
    CyclotomicScalar,
    PadicScalar,
    cyclotomic_value,
    padic_log,
    primitive_root,
    teichmuller,
    teichmuller_int,
    valuation,
    vp,
)

primes = st.sampled_from([3, 5, 7])


def test_teichmuller_examples():
    assert teichmuller(2, 5, 2).lift() == 7
    assert teichmuller(1, 7, 6).lift() == 1
    for p in (3, 5, 7):
        assert teichmuller(p - 1, p, 5).lift() == p ** 5 - 1


def test_valuation_examples():
    assert PadicScalar.from_int(50, 5, 10).valuation() == 2
    assert PadicScalar.from_int(7, 5, 10).valuation() == 0
    z = PadicScalar.zero(5, 8)
    assert valuation(z) == AtLeast(8)
    assert str(valuation(z)) == ">= 8"
    assert vp(Fraction(50, 3), 5) == 2


def test_unit_invertible_or_sentinel():
    x = PadicScalar.from_int(25 * 3, 5, 4)
    assert x.val == 2 and x.unit % 5 != 0
    y = PadicScalar.from_int(5 ** 6, 5, 4)
    assert y.is_zero() and y.val == y.prec == 4


@given(primes, st.integers(1, 10 ** 6), st.integers(2, 12))
def test_teichmuller_root_of_unity(p, a, N):
    if a % p == 0:
        return
    w = teichmuller(a, p, N)
    assert (w ** (p - 1) - 1).is_zero()
    assert w.lift() % p == a % p


@given(primes, st.integers(1, 10 ** 6), st.integers(1, 10 ** 6), st.integers(2, 10))
def test_teichmuller_multiplicative(p, a, b, N):
    if a % p == 0 or b % p == 0:
        return
    assert (teichmuller(a * b, p, N) - teichmuller(a, p, N) * teichmuller(b, p, N)).is_zero()


scalars = st.tuples(st.integers(-3, 3), st.integers(1, 10 ** 9), st.integers(4, 14))


def _mk(p, t):
    v, u, prec = t
    return PadicScalar.from_fraction(Fraction(u) * Fraction(p) ** v, p, prec)


@given(primes, scalars, scalars)
def test_valuation_multiplicative_and_ultrametric(p, s, t):
    x, y = _mk(p, s), _mk(p, t)
    if x.is_zero() or y.is_zero():
        return
    xy = x * y
    if not xy.is_zero():
        assert xy.val == x.val + y.val
    tot = x + y
    if not tot.is_zero():
        assert tot.val >= min(x.val, y.val)
        if x.val != y.val:
            assert tot.val == min(x.val, y.val)


@given(primes, scalars, scalars)
def test_precision_never_gained(p, s, t):
    x, y = _mk(p, s), _mk(p, t)
    assert (x + y).prec <= min(x.prec, y.prec)
    assert (x * y).prec <= min(x.prec + y.val, y.prec + x.val)


@given(primes, st.integers(1, 10 ** 9), st.integers(3, 12))
def test_inverse(p, u, prec):
    if u % p == 0:
        return
    x = PadicScalar.from_int(u, p, prec)
    assert (x * x.inverse() - 1).is_zero()


def test_inverse_of_zero_is_a_shortfall():
    with pytest.raises(PrecisionShortfall):
        PadicScalar.zero(5, 3).inverse()


def test_padic_log_additive():
    p, N = 5, 12
    a, b = PadicScalar.from_int(6, p, N), PadicScalar.from_int(11, p, N)
    assert (padic_log(a * b) - padic_log(a) - padic_log(b)).is_zero()
    with pytest.raises(DomainError):
        padic_log(PadicScalar.from_int(2, p, N))


@pytest.mark.parametrize("p,c", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)])
def test_primitive_root_relations(p, c):
    z = primitive_root(p, c, 8)
    assert z.degree == (p - 1) * p ** (c - 1)
    assert (z ** (p ** c) - 1).is_zero()
    assert cyclotomic_value(z, p, c).is_zero()
    assert not (z ** (p ** (c - 1)) - 1).is_zero()
    # sum_{i<p} zeta^{i p^{c-1}} = 0
    y = z ** (p ** (c - 1))
    acc = CyclotomicScalar.constant(0, p, c, 8)
    for i in range(p):
        acc = acc + y ** i
    assert acc.is_zero()


def test_cyclotomic_polynomial_at_one():
    for p in (3, 5):
        for m in (1, 2, 3):
            assert cyclotomic_value(1, p, m) == p


def test_level_one_embedding_is_constant():
    x = PadicScalar.from_int(17, 5, 6)
    c = CyclotomicScalar.from_padic(x, 2)
    assert c.is_constant()
    assert (c.to_padic() - x).is_zero()
    assert all(k.is_zero() for k in c.coeffs[1:])


def test_teichmuller_needs_a_unit():
    with pytest.raises(DomainError):
        teichmuller_int(10, 5, 4)
