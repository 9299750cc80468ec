from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sympow_padic.errors import DomainError
from sympow_padic.sympower import (
    build_context,
    critical_js,
    d_pm,
    filtration_jumps,
    frobenius_eigenvalues,
    frobenius_from_basis,
    hasse_invariant,
    hodge_closed_form,
    hodge_polygon,
    hodge_slopes,
    is_critical,
    newton_polygon,
    weak_admissibility,
)


def ctx_for(p, k, m, eps=-1, sign="+"):
    return build_context(p, k, m, eps, None if m % 2 == 0 else (sign if eps == -1 else "root"))


contexts = st.builds(ctx_for, st.sampled_from([3, 5, 7, 11]), st.integers(2, 12), st.integers(2, 20),
                     st.sampled_from([-1, 1]), st.sampled_from("+-"))


def test_build_context_examples():
    c = build_context(5, 2, 2, -1, None)
    assert (c.r, c.rt, c.k_i(0)) == (1, 1, 3)
    assert c.alpha_i(0, "+") == 5 and c.alpha_i(0, "-") == -5
    c = build_context(5, 2, 3, -1, "+")
    assert (c.r, c.rt, c.k_i(0), c.k_i(1)) == (1, 2, 4, 2)
    assert build_context(3, 3, 2, -1, None).hypothesis is False


def test_odd_m_needs_alpha():
    with pytest.raises(DomainError):
        build_context(5, 2, 3, -1, None)
    with pytest.raises(DomainError):
        build_context(4, 2, 2)


def test_d_pm_examples():
    assert d_pm(2) == (1, 2)
    assert d_pm(4) == (3, 2)
    assert d_pm(3) == (2, 2)


def test_hodge_examples():
    c = build_context(5, 2, 2)
    assert [y for _, y in hodge_polygon(c).vertices] == [0, -1, -1, 0]
    for k in (2, 3, 4):
        for m in (2, 3, 4, 5):
            c = ctx_for(5, k, m)
            assert hodge_slopes(c)[0] == -c.r * (k - 1)
            end = Fraction((k - 1) * (m + 1) * (m - 2 * c.r), 2)
            assert hodge_polygon(c).at(m + 1) == end


def test_newton_examples():
    assert all(y == 0 for _, y in newton_polygon(build_context(5, 2, 2)).vertices)
    assert newton_polygon(build_context(5, 3, 3, -1, "+")).vertices[-1] == (4, 4)


def test_frobenius_examples():
    toks = lambda c: sorted(t for t, _ in frobenius_eigenvalues(c))
    assert toks(build_context(5, 2, 2)) == sorted(["+1", "-1", "-1"])
    assert toks(build_context(5, 2, 4)) == sorted(["+1"] * 3 + ["-1"] * 2)
    assert toks(build_context(5, 2, 3, -1, "+")) == sorted(["+alpha"] * 2 + ["-alpha"] * 2)


def test_filtration_examples():
    f2 = dict(filtration_jumps(build_context(5, 2, 2)))
    assert f2[0] == "v" and f2[1] == "v_0 + vbar_0"
    f3 = dict(filtration_jumps(build_context(5, 2, 3, -1, "+")))
    assert f3[0] == "v_1"


def test_hasse_examples():
    assert hasse_invariant(build_context(5, 2, 2)).closed_form == 1
    assert hasse_invariant(build_context(5, 2, 4)).closed_form == 3
    assert hasse_invariant(build_context(5, 3, 3, -1, "+")).closed_form == 4


def test_critical_examples():
    c = build_context(5, 2, 2)
    assert is_critical(c, 1, 0, 0) and is_critical(c, 1, 0, 1)
    c = build_context(5, 3, 3, -1, "+")
    assert critical_js(c, 1) == [1, 2] and critical_js(c, -1) == [1, 2]


@given(st.integers(2, 50))
def test_d_pm_sum(m):
    dp, dm = d_pm(m)
    assert dp + dm == m + 1


@given(contexts)
def test_polygon_invariants(c):
    h = hasse_invariant(c)
    assert h.closed_form == h.polygon_gap
    H = hodge_polygon(c)
    for a in range(c.m + 1):
        assert H.at(a + 1) == hodge_closed_form(c, a)
    assert sorted(hodge_slopes(c)) == sorted(-(c.r - a) * (c.k - 1) for a in range(c.m + 1))


@given(contexts)
def test_newton_slopes_are_eigenvalue_valuations(c):
    slopes = sorted(newton_polygon(c).slopes())
    vals = sorted(v for _, v in frobenius_eigenvalues(c))
    assert slopes == vals


@given(contexts)
def test_basis_lemma_agrees_with_eigenvalue_lemma(c):
    assert sorted(frobenius_from_basis(c)) == sorted(t for t, _ in frobenius_eigenvalues(c))


@given(contexts)
def test_weakly_admissible(c):
    assert weak_admissibility(c)
    N, H = newton_polygon(c), hodge_polygon(c)
    for x in range(c.m + 2):
        assert N.at(x) >= H.at(x)
