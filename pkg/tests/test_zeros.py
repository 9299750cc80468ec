from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sympow_padic.lfactory import enumerate_signs
from sympow_padic.sympower import build_context
from sympow_padic.zeros import (
    brute_force_zeros,
    critical_range,
    l_symbols,
    leading_term,
    locate_trivial_zeros,
    vanishing_order,
    zero_report,
)

P = 5


def test_critical_range_examples():
    assert list(critical_range(build_context(P, 2, 2), 0)) == [0]
    assert list(critical_range(build_context(P, 2, 2), 1)) == [1]
    c = build_context(P, 3, 3, -1, "+")
    assert all(list(critical_range(c, a)) == [1, 2] for a in range(P - 1))


def test_locate_examples():
    recs = locate_trivial_zeros(build_context(P, 2, 2), "-")
    assert [(r.theta, r.j) for r in recs] == [("1", 0)]
    assert locate_trivial_zeros(build_context(P, 2, 3, -1, "+"), "++") == []
    c = build_context(P, 3, 5, -1, "+")
    recs = locate_trivial_zeros(c, "+-+")
    assert {(r.component, r.j) for r in recs} == {(0, 2), (1, 1), (2, 2)}


def test_vanishing_order_examples():
    o = vanishing_order(build_context(P, 2, 2), "-", 0, 0)
    assert (o.value, o.relation) == (1, ">=")
    o = vanishing_order(build_context(P, 2, 2), "-", 1, 1)
    assert (o.value, o.relation) == (0, "=")
    o = vanishing_order(build_context(P, 2, 4), "++", 1, 1)
    assert (o.value, o.relation) == (1, ">=")


def test_leading_term_even_m():
    rep = leading_term(build_context(P, 2, 2), "+", 1)
    assert rep.order.value == 1
    assert rep.numeric_constant() == 2 * (1 + Fraction(1, P))
    assert len(rep.l_symbols) == 1 and rep.l_symbols[0].startswith("L(f_0,+,")


def test_leading_term_odd_m():
    rep = leading_term(build_context(P, 3, 3, -1, "+"), "--", 1)
    assert rep.numeric_constant() == (1 + Fraction(1, P)) ** 2
    assert rep.as_dict()["power_of_2"] == 1


def test_leading_term_four_divides_m():
    ctx = build_context(P, 2, 4)
    rep = leading_term(ctx, "++", 0)
    assert rep.order.case == "4|m" and rep.order.value == -1
    assert rep.l_symbols == []


def test_central_point_is_a_conjecture():
    ctx = build_context(P, 2, 3, -1, "+")
    rep = leading_term(ctx, "++", 1)
    assert rep.order.relation == "?" and rep.conjecture


CASES = [(p, k, m, eps, alpha)
         for p in (3, 5) for m in range(2, 7) for k in range(2, 6)
         for eps, alpha in ([(-1, None), (1, None)] if m % 2 == 0 else
                            [(-1, "+"), (-1, "-")] + ([(1, "root")] if k % 2 == 0 else [(1, "root")]))]


@pytest.mark.parametrize("p,k,m,eps,alpha", CASES)
def test_locate_agrees_with_brute_force(p, k, m, eps, alpha):
    ctx = build_context(p, k, m, eps, alpha)
    for s in enumerate_signs(ctx.rt):
        a = sorted((r.component, r.sign, r.j) for r in locate_trivial_zeros(ctx, s))
        b = sorted((r.component, r.sign, r.j) for r in brute_force_zeros(ctx, s))
        assert a == b


@given(st.integers(2, 9), st.integers(2, 5), st.data())
def test_l_symbols_concatenate_over_components(m, k, data):
    ctx = build_context(P, k, m, -1, None if m % 2 == 0 else "+")
    s = data.draw(st.sampled_from(enumerate_signs(ctx.rt)))
    sigma = data.draw(st.sampled_from("+-"))
    j = data.draw(st.integers(0, 2))
    syms = l_symbols(ctx, s, sigma, j)
    want = [i for i in range(ctx.rt) if s[i] == sigma]
    assert [int(sym[len("L(f_"):sym.index(",")]) for sym in syms] == want
    assert all(f",{sigma}," in sym for sym in syms)


def test_order_grows_with_m():
    orders = []
    for m in (2, 6, 10, 14):
        ctx = build_context(P, 2, m)
        o = vanishing_order(ctx, "+" * ctx.rt, 1, 1)
        assert o.value == ctx.rt
        orders.append(o.value)
    assert orders == sorted(set(orders))


def test_zero_report_shape():
    rep = zero_report(build_context(P, 3, 3, -1, "+"))
    assert set(rep["signs"]) == {"++", "+-", "-+", "--"}
    assert all("records" in v and "leading" in v for v in rep["signs"].values())
