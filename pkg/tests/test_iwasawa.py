from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sympow_padic.errors import DomainError
from sympow_padic.iwasawa import (
    AlgebraConfig,
    PadicCharacter,
    _series_div_naive,
    _series_inverse,
    evaluate,
    involution,
    multiply,
    order_at,
    project,
    twist,
)
from sympow_padic.padic import CyclotomicScalar, PadicScalar, primitive_root, teichmuller_int

CFG = AlgebraConfig(5, 10, 14)


def coeffs(deg=5):
    return st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=1, max_size=deg + 1)


elements = st.dictionaries(st.integers(0, 3), coeffs(), max_size=4).map(CFG.from_branches)
tame = st.builds(PadicCharacter, st.integers(0, 3), st.just(0), st.just(0), st.integers(-4, 4))
wild = st.builds(PadicCharacter, st.integers(0, 3), st.just(2), st.integers(1, 4), st.integers(-3, 3))
chars = st.one_of(tame, wild)


def same(x, y):
    return (x - y).is_zero() and (x - y).prec > 0


def test_config_checks_generator():
    assert CFG.u == 6
    with pytest.raises(DomainError):
        AlgebraConfig(5, 10, 10, u=26)
    with pytest.raises(DomainError):
        AlgebraConfig(9, 10, 10)


def test_multiply_examples():
    T = CFG.T()
    assert multiply(T, T).eq(CFG.from_series([0, 0, 1]))
    one_plus, one_minus = CFG.from_series([1, 1]), CFG.from_series([1, -1])
    assert multiply(one_plus, one_minus).eq(CFG.from_series([1, 0, -1]))
    e0, e1 = project(CFG.one(), 0), project(CFG.one(), 1)
    assert multiply(e0, e1).is_zero()


def test_twist_examples():
    p = CFG.p
    assert twist(CFG.T(), 1).eq(CFG.from_series([p, 1 + p]))
    h = CFG.from_branches({0: [1, 2, 3], 2: [5, 0, 7]})
    assert twist(h, 0) is h
    assert twist(twist(h, 3), -3).eq(h)


def test_involution_examples():
    M = CFG.M
    g = involution(CFG.gamma0())
    assert g.eq(CFG.from_series([(-1) ** n for n in range(M)]))
    h = CFG.from_branches({0: [1, 4], 1: [2, 0, 3]})
    assert involution(involution(h)).eq(h)
    d = CFG.delta(2)
    assert multiply(involution(d), d).eq(CFG.one())


def test_project_is_an_eigenvector_of_delta():
    p, N = CFG.p, CFG.N
    d = CFG.delta(2)
    for a in range(p - 1):
        pa = project(CFG.one(), a)
        nu = teichmuller_int(2, p, N) ** a % p ** N
        assert multiply(pa, d).eq(pa.scale(nu))


@given(elements)
def test_partition_of_unity_and_idempotence(h):
    total = project(h, 0)
    for a in range(1, 4):
        total = total + project(h, a)
    assert total.eq(h)
    for a in range(4):
        assert project(project(h, a), a).eq(project(h, a))


@given(elements, elements, st.integers(-3, 3))
def test_twist_is_ring_automorphism(h1, h2, n):
    assert twist(multiply(h1, h2), n).eq(multiply(twist(h1, n), twist(h2, n)))


@given(elements, chars, st.integers(-3, 3))
def test_twist_commutes_with_evaluation(h, lam, n):
    assert same(evaluate(twist(h, n), lam), evaluate(h, lam.times_chi(n)))


@given(elements, chars)
def test_project_evaluate_compatibility(h, lam):
    a = lam.branch_index(CFG.p)
    for b in range(CFG.p - 1):
        v = evaluate(project(h, b), lam)
        if b == a:
            assert same(v, evaluate(h, lam))
        else:
            assert v.is_zero()


@given(elements, tame)
def test_involution_evaluates_at_inverse(h, lam):
    assert same(evaluate(involution(h), lam), evaluate(h, lam.inverse()))


@given(elements, elements, chars)
def test_evaluation_is_multiplicative(h1, h2, lam):
    assert same(evaluate(multiply(h1, h2), lam), evaluate(h1, lam) * evaluate(h2, lam))


def test_evaluation_examples():
    p = CFG.p
    v = evaluate(CFG.T(), PadicCharacter(0, 0, 0, 1))
    assert same(v, CyclotomicScalar.constant(p, p, 1, CFG.N))
    g = CFG.gamma0()
    gp = g
    for _ in range(p - 1):
        gp = multiply(gp, g)
    assert evaluate(gp - CFG.one(), PadicCharacter(0, 2, 1, 0)).is_zero()
    z = evaluate(g, PadicCharacter(0, 2, 1, 0))
    assert same(z, primitive_root(p, 1, CFG.N))


def test_order_at_examples():
    u = CFG.u
    h = CFG.from_series([1 - u, 1])  # gamma0 - chi(gamma0)
    for a in range(CFG.p - 1):
        assert order_at(h, a, 1) == 1
    assert order_at(multiply(h, h), 0, 1) == 2
    assert order_at(CFG.one(), 0, 3) == 0


def test_series_inverse_matches_long_division():
    p, N, M = 5, 12, 30
    g = [PadicScalar.from_int(c, p, N) for c in [7, 5, 1, 3] + [0] * (M - 4)]
    f = [PadicScalar.one(p, N)] + [PadicScalar.zero(p, N)] * (M - 1)
    for x, y in zip(_series_inverse(g, M), _series_div_naive(f, g)):
        assert (x - y).is_zero() and x.prec == y.prec


def test_pole_divisor_blocks_twist():
    from sympow_padic.kubota import kl_element

    L = kl_element("triv", AlgebraConfig(3, 4, 8), 4)
    assert L.has_pole
    with pytest.raises(DomainError):
        twist(L, 1)
