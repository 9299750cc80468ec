from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from sympow_padic.errors import DomainError
from sympow_padic.iwasawa import AlgebraConfig, PadicCharacter, evaluate
from sympow_padic.kubota import (
    DirichletCharacter,
    dirichlet_L_nonpos,
    e_eta,
    gen_bernoulli,
    kl_element,
    kl_info,
    stickelberger,
    stickelberger_defect,
    verify_interpolation,
)
from sympow_padic.padic import CyclotomicScalar
from sympow_padic.zeros import residue_model

CFG5 = AlgebraConfig(5, 6, 16)
LEVEL = 5


def const(x, p=5, prec=6):
    return CyclotomicScalar.constant(Fraction(x), p, 1, prec)


def test_bernoulli_examples():
    assert gen_bernoulli(1, DirichletCharacter(-3)) == Fraction(-1, 3)
    assert gen_bernoulli(2, DirichletCharacter(1)) == Fraction(1, 6)
    assert gen_bernoulli(2, DirichletCharacter(5)) == Fraction(4, 5)


def test_L_value_examples():
    assert dirichlet_L_nonpos(DirichletCharacter(1), -1) == Fraction(-1, 12)
    assert dirichlet_L_nonpos(DirichletCharacter(-3), 0) == Fraction(1, 3)
    assert dirichlet_L_nonpos(DirichletCharacter(5), -1) == Fraction(-2, 5)
    with pytest.raises(DomainError):
        dirichlet_L_nonpos(DirichletCharacter(1), 1)


@given(st.integers(2, 30))
def test_zeta_at_negative_integers_against_sympy(n):
    assert dirichlet_L_nonpos(DirichletCharacter(1), 1 - n) == Fraction(str(sympy.zeta(1 - n)))


@pytest.mark.parametrize("D,h,w", [(-3, 1, 6), (-4, 1, 4), (-7, 1, 2), (-8, 1, 2), (-15, 2, 2), (-20, 2, 2),
                                   (-23, 3, 2)])
def test_class_number_formula(D, h, w):
    # L(chi_D, 0) = 2h/w for imaginary quadratic fields
    assert dirichlet_L_nonpos(DirichletCharacter(D), 0) == Fraction(2 * h, w)


@pytest.mark.parametrize("D", [-3, -4, 5, 8, -7, 12])
def test_character_table(D):
    chi = DirichletCharacter(D)
    f = chi.conductor
    for a in range(1, 3 * f):
        for b in range(1, 3 * f):
            assert chi(a * b) == chi(a) * chi(b)
    assert chi.parity() == (1 if D > 0 else -1)
    assert all(v in (1, -1) for v in chi.value_table().values())


def test_stickelberger_level_one():
    th = stickelberger(DirichletCharacter(1), 1, 3)
    assert th.as_dict() == {1: Fraction(-1, 3), 2: Fraction(-2, 3)}


@pytest.mark.parametrize("D,p", [(1, 3), (1, 5), (-3, 5), (-4, 3), (5, 3)])
def test_stickelberger_norm_compatibility(D, p):
    eta = DirichletCharacter(D)
    for n in (1, 2):
        up = stickelberger(eta, n + 1, p).norm_to(n)
        down = stickelberger(eta, n, p)
        defect = stickelberger_defect(eta, n, p)
        assert (up - down - defect).coeffs == ()


def test_kl_trivial_example():
    L = kl_element("triv", CFG5, LEVEL)
    v = evaluate(L, PadicCharacter(0, 0, 0, -1))
    assert ((v - const(Fraction(1, 3)))).is_zero() and v.prec >= 4


def test_kl_chi_minus_three_example():
    assert e_eta("-3", PadicCharacter(0, 0, 0, 0), 5) == 2
    L = kl_element("-3", CFG5, LEVEL)
    v = evaluate(L, PadicCharacter(0, 0, 0, 0))
    assert (v - const(Fraction(2, 3))).is_zero() and v.prec >= 4


@pytest.mark.parametrize("eta", ["triv", "-3", "-4"])
def test_interpolation_tame_points(eta):
    L = kl_element(eta, CFG5, LEVEL)
    e = DirichletCharacter.parse(eta)
    hits = 0
    for b in range(4):
        for j in range(0, -5, -1):
            lam = PadicCharacter(b, 0, 0, j)
            if lam.parity() != -e.parity():
                continue
            r = verify_interpolation(L, e, lam)
            assert r.passed, r.describe()
            hits += 1
    assert hits >= 8


def test_interpolation_wild_point():
    L = kl_element("-4", CFG5, LEVEL)
    r = verify_interpolation(L, "-4", PadicCharacter(0, 2, 1, 0))
    assert r.passed and r.lhs.level == 1 and r.precision >= 3


def test_parity_violation_is_a_domain_error():
    L = kl_element("triv", CFG5, LEVEL)
    with pytest.raises(DomainError):
        verify_interpolation(L, "triv", PadicCharacter(0, 0, 0, 0))


def test_level_stability():
    a = kl_element("-3", CFG5, 4)
    b = kl_element("-3", CFG5, 5)
    for lam in (PadicCharacter(0, 0, 0, 0), PadicCharacter(1, 0, 0, -2)):
        d = evaluate(a, lam) - evaluate(b, lam)
        assert d.is_zero() and d.prec >= 3


def test_pole_structure_and_nonvanishing():
    L = kl_element("triv", CFG5, LEVEL)
    info = kl_info("triv", CFG5, LEVEL)
    assert L.has_pole and info.pole_branches
    assert L.in_lambda()
    for a in range(4):
        assert not all(c.is_zero() for c in L.branch(a))
    assert not kl_element("-3", CFG5, LEVEL).has_pole


def test_residue_at_one():
    r = residue_model(AlgebraConfig(5, 6, 16), level=5)
    assert r.residue == Fraction(4, 5)
    assert r.residual_valuation is not None
    assert r.residual_valuation >= r.measured.prec
