"""Kubota-Leopoldt elements from Stickelberger elements, and the
generalized-Bernoulli oracle used to check them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from sympy import Poly as _SymPoly
from sympy import bernoulli as _sym_bernoulli
from sympy import symbols as _symbols
from sympy.functions.combinatorial.numbers import kronecker_symbol

from .errors import DomainError, PrecisionShortfall
from .iwasawa import (
    AlgebraConfig,
    Growth,
    IwasawaElement,
    PadicCharacter,
    _series_div,
    compose_row,
    evaluate,
    ring_power_ints,
)
from .padic import CyclotomicScalar, PadicScalar, _normalize, cyclotomic_degree, teichmuller_int, vp

_x = _symbols("x")


@lru_cache(maxsize=None)
def bernoulli_poly(n: int) -> tuple:
    """Coefficients of B_n(x), constant term first (B_1(x) = x - 1/2)."""
    coeffs = _SymPoly(_sym_bernoulli(n, _x), _x).all_coeffs()[::-1]
    return tuple(Fraction(int(c.p), int(c.q)) for c in coeffs)


def bernoulli_eval(n: int, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(bernoulli_poly(n)):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# Dirichlet characters (real ones: Kronecker symbols of fundamental discriminants)


@dataclass(frozen=True)
class DirichletCharacter:
    """chi_D(a) = (D/a); D = 1 is the trivial character."""

    D: int = 1

    def __post_init__(self):
        if self.D == 0:
            raise DomainError("discriminant must be nonzero")

    @staticmethod
    def parse(label) -> "DirichletCharacter":
        if isinstance(label, DirichletCharacter):
            return label
        s = str(label).strip().lower()
        if s in ("triv", "1", "trivial"):
            return DirichletCharacter(1)
        return DirichletCharacter(int(s))

    @property
    def conductor(self) -> int:
        return abs(self.D)

    @property
    def label(self) -> str:
        return "triv" if self.D == 1 else str(self.D)

    def is_trivial(self) -> bool:
        return self.D == 1

    def __call__(self, a: int) -> int:
        if self.D == 1:
            return 1
        return int(kronecker_symbol(self.D, a))

    def parity(self) -> int:
        return self(-1) if self.D != 1 else 1

    def value_table(self) -> dict:
        f = self.conductor
        return {a: self(a) for a in range(f) if math.gcd(a, f) == 1}

    def inverse(self) -> "DirichletCharacter":
        return self

    def split_at(self, p: int):
        """(eta0, t) with eta = eta0 * omega^t and eta0 of conductor prime to p."""
        if self.conductor % p:
            return self, 0
        if self.conductor % (p * p) == 0:
            raise DomainError("conductor divisible by p^2 is not supported")
        pstar = p if p % 4 == 1 else -p
        return DirichletCharacter(self.D // pstar if self.D != pstar else 1), (p - 1) // 2


def gen_bernoulli(n: int, chi: DirichletCharacter) -> Fraction:
    """B_{n,chi} = f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f)."""
    if n < 1:
        raise DomainError("n must be positive")
    f = chi.conductor
    total = Fraction(0)
    for a in range(1, f + 1):
        c = chi(a) if math.gcd(a, f) == 1 else 0
        if c:
            total += c * bernoulli_eval(n, Fraction(a, f))
    return Fraction(f) ** (n - 1) * total


def dirichlet_L_nonpos(chi: DirichletCharacter, j: int) -> Fraction:
    """L(chi, j) = -B_{1-j,chi}/(1-j) for j <= 0."""
    if j > 0:
        raise DomainError("only nonpositive integers")
    return -gen_bernoulli(1 - j, chi) / (1 - j)


# ---------------------------------------------------------------------------
# Stickelberger elements


@dataclass(frozen=True)
class GroupAlgebraElement:
    """Element of Q[G_n], G_n = (Z/p^n)^x.  ``coeffs[b]`` multiplies sigma_b^{-1}."""

    p: int
    level: int
    coeffs: tuple  # sorted (b, Fraction) pairs

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def norm_to(self, level: int) -> "GroupAlgebraElement":
        """Image under the projection G_n -> G_level."""
        mod = self.p ** level
        out = {}
        for b, c in self.coeffs:
            out[b % mod] = out.get(b % mod, Fraction(0)) + c
        return GroupAlgebraElement(self.p, level, tuple(sorted((b, c) for b, c in out.items() if c)))

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        d = self.as_dict()
        for b, c in other.coeffs:
            d[b] = d.get(b, Fraction(0)) - c
        return GroupAlgebraElement(self.p, self.level, tuple(sorted((b, c) for b, c in d.items() if c)))

    def denominator_valuation(self) -> int:
        return max((max(0, -int(vp(c, self.p))) for _, c in self.coeffs if c), default=0)


def _bernoulli_sums(eta: DirichletCharacter, p: int, n: int) -> dict:
    """beta(sigma_b^{-1}) = sum over a = b mod p^n of eta(a) B_1(a / (f p^n))."""
    f = eta.conductor
    F = f * p ** n
    mod = p ** n
    out: dict = {}
    for a in range(1, F):
        if a % p == 0 or math.gcd(a, f) != 1:
            continue
        e = eta(a)
        out[a % mod] = out.get(a % mod, Fraction(0)) + e * (Fraction(a, F) - Fraction(1, 2))
    return out


def stickelberger(eta: DirichletCharacter, n: int, p: int) -> GroupAlgebraElement:
    """-(1/(f p^n)) sum_{(a, fp)=1} a eta(a) sigma_a^{-1} on G_n."""
    if n < 1:
        raise DomainError("level must be at least 1")
    f = eta.conductor
    F = f * p ** n
    mod = p ** n
    out: dict = {}
    for a in range(1, F):
        if a % p == 0 or math.gcd(a, f) != 1:
            continue
        out[a % mod] = out.get(a % mod, Fraction(0)) - Fraction(a * eta(a), F)
    return GroupAlgebraElement(p, n, tuple(sorted((b, c) for b, c in out.items() if c)))


def stickelberger_defect(eta: DirichletCharacter, n: int, p: int) -> GroupAlgebraElement:
    """Correction c_n with norm(theta_{n+1}) = theta_n + c_n.

    Zero for nontrivial eta; for the trivial character it is -(p-1)/2 times
    the norm element of G_n."""
    mod = p ** n
    if not eta.is_trivial():
        return GroupAlgebraElement(p, n, ())
    c = -Fraction(p - 1, 2)
    return GroupAlgebraElement(p, n, tuple((b, c) for b in range(1, mod) if b % p))


# ---------------------------------------------------------------------------
# assembly


@lru_cache(maxsize=64)
def _gamma_log_table(p: int, n: int, u: int) -> dict:
    """<b> = u^e(b) modulo p^n, as a dict from <b> to e(b)."""
    mod = p ** n
    out = {}
    x = 1
    for e in range(p ** (n - 1)):
        out[x] = e
        x = x * u % mod
    return out


def _exponent(b: int, p: int, n: int, u: int, W: int) -> int:
    mod = p ** n
    w = teichmuller_int(b, p, max(n, 1))
    unit = b * pow(w, -1, mod) % mod
    return _gamma_log_table(p, n, u)[unit]


def _measure_row(eta: DirichletCharacter, a: int, c: int, n: int, cfg: AlgebraConfig, W: int) -> list:
    """Branch a of nu = -(1 - c eta(c) sigma_c^{-1}) beta as a row mod T^M.

    sigma_b^{-1} maps to omega(b)^{-a} (1+T)^{-e(b)}; the level-n element is
    the image of the limit modulo (1+T)^{p^{n-1}} - 1, which fixes the
    certified precision of each coefficient.
    """
    p, M, u = cfg.p, cfg.M, cfg.u
    mod = p ** W
    beta = _bernoulli_sums(eta, p, n)
    gmod = p ** n
    cinv = pow(c, -1, gmod)
    ceta = c * eta(c)
    size = p ** (n - 1)
    poly = [0] * size
    for b, val in beta.items():
        nu = ceta * beta.get(b * cinv % gmod, Fraction(0)) - val
        if nu == 0:
            continue
        if nu.denominator % p == 0:
            raise AssertionError("regularised measure is not p-integral")
        nu_int = nu.numerator * pow(nu.denominator, -1, mod) % mod
        w = pow(teichmuller_int(b, p, W), -a % (p - 1), mod)
        e = (-_exponent(b, p, n, u, W)) % size
        poly[e] = (poly[e] + nu_int * w) % mod
    # change of basis (1+T)^e -> T^k, truncated at M
    row_ints = [0] * M
    for e, coeff in enumerate(poly):
        if not coeff:
            continue
        bnm = 1
        for k in range(min(M, e + 1)):
            row_ints[k] = (row_ints[k] + coeff * bnm) % mod
            bnm = bnm * (e - k) // (k + 1)
    row = []
    for k, v in enumerate(row_ints):
        cert = W if k == 0 else min(W, n - 1 - int(math.floor(math.log(k, p) + 1e-12)))
        row.append(_normalize(p, 0, v, max(cert, 0)))
    return row


def _choose_c(eta: DirichletCharacter, a: int, p: int) -> Optional[int]:
    """Some c prime to f p with (eta omega^{1-a})(c) != 1, or None when that
    character is trivial."""
    f = eta.conductor
    for c in range(2, 50 * f * p):
        if c % p == 0 or math.gcd(c, f) != 1:
            continue
        w = teichmuller_int(c, p, 1 + 1)
        val = eta(c) * pow(w, (1 - a) % (p - 1), p * p) % (p * p)
        if val % p != 1:
            return c
    return None


def _power_series_of(c: int, cfg: AlgebraConfig, eta_c: int, a: int, e_c: int, W: int) -> list:
    """R = 1 - c eta(c) omega(c)^{-a} (1+T)^{-e_c} as a row."""
    p, M = cfg.p, cfg.M
    mod = p ** W
    w = pow(teichmuller_int(c, p, W), -a % (p - 1), mod)
    lead = c * eta_c * w % mod
    out = []
    bnm = 1
    for k in range(M):
        v = (-lead * bnm) % mod
        if k == 0:
            v = (1 + v) % mod
        out.append(_normalize(p, 0, v, W))
        bnm = bnm * (-e_c - k) // (k + 1)
    return out


def _direct_row(eta: DirichletCharacter, a: int, n: int, cfg: AlgebraConfig, W: int):
    """Branch a of the element with lambda(D) = (1 - psi(p) p^{-j}) L(psi, j).

    Returns (row, pole): for the pole branch the row is T (1+T) nu with c = u,
    i.e. (g0 - 1)(g0 - u) times the branch.
    """
    p, M, u = cfg.p, cfg.M, cfg.u
    c = _choose_c(eta, a, p)
    if c is None:
        if not eta.is_trivial():
            raise AssertionError("only the trivial character can meet the pole")
        nu = _measure_row(eta, a, u, n, cfg, W)
        # numerator T (1+T) nu
        T1 = [PadicScalar.zero(p, W + 5), PadicScalar.one(p, W + 5), PadicScalar.one(p, W + 5)] + \
             [PadicScalar.zero(p, W + 5)] * (M - 3)
        from .iwasawa import _series_mul

        return _series_mul(nu, T1, M), True
    nu = _measure_row(eta, a, c, n, cfg, W)
    e_c = _exponent(c, p, max(n, 2), u, W) if n >= 2 else 0
    if n < 2:
        e_c = _exponent(c, p, 2, u, W)
    R = _power_series_of(c, cfg, eta(c), a, e_c, W)
    return _series_div(nu, R), False


def _twisted_inverse_row(eta: DirichletCharacter, a: int, n: int, cfg: AlgebraConfig, W: int):
    """Branch a of Tw_{-1}((D_{eta^{-1}})^iota): D branch 1 - a composed with
    S(T) = u/(1+T) - 1."""
    p, M, u = cfg.p, cfg.M, cfg.u
    S = [Fraction(u - 1)] + [Fraction(u) * (-1) ** k for k in range(1, M)]
    src = (1 - a) % (p - 1)
    c = _choose_c(eta.inverse(), src, p)
    lam_growth = Growth(0.0, 0.0)
    if c is None:
        nu = _measure_row(eta.inverse(), src, u, n, cfg, W)
        comp = compose_row(nu, S, lam_growth, p, M)
        # numerator -(T - (u-1)) nu(S)
        lin = [PadicScalar.from_int(u - 1, p, W + 5), PadicScalar.from_int(-1, p, W + 5)] + \
              [PadicScalar.zero(p, W + 5)] * (M - 2)
        from .iwasawa import _series_mul

        return _series_mul(comp, lin, M), True
    row, _ = _direct_row(eta.inverse(), src, n, cfg, W)
    return compose_row(row, S, lam_growth, p, M), False


def default_level(config: AlgebraConfig) -> int:
    lvl = config.N + 1
    while config.p ** (lvl - 1) > 20000 and lvl > 2:
        lvl -= 1
    return max(lvl, 2)


@dataclass(frozen=True)
class KLInfo:
    eta: str
    level: int
    direct_branches: tuple
    pole_branches: tuple
    omega_shift: int


@lru_cache(maxsize=64)
def _kl_cached(eta: DirichletCharacter, config: AlgebraConfig, level: int):
    p = config.p
    eta0, t = eta.split_at(p)
    W = config.N + 2
    rows, poles, direct = [], [], []
    for a in range(p - 1):
        # eta = eta0 omega^t: branch a of D_eta is branch a - t of D_eta0
        if (-1) ** a == -eta.parity():
            row, pole = _direct_row(eta0, (a - t) % (p - 1), level, config, W)
            direct.append(a)
        else:
            # eta^{-1} = eta0 omega^{-t}; D_{eta^{-1}} branch 1 - a is D_eta0 branch 1 - a + t
            row, pole = _twisted_inverse_row(eta0, (a - t) % (p - 1), level, config, W)
        rows.append(tuple(r.reduce(config.N) for r in row))
        poles.append(pole)
    elt = IwasawaElement(config, tuple(rows), Growth(0.0, 0.0), tuple(poles))
    info = KLInfo(eta.label, level, tuple(direct), tuple(a for a in range(p - 1) if poles[a]), t)
    return elt, info


def kl_element(eta, config: AlgebraConfig, level: Optional[int] = None) -> IwasawaElement:
    """L_eta assembled branch by branch.

    Branches with (-1)^a = -eta(-1) carry L^KL_{eta omega^{1-a}} directly; the
    others carry Tw_{-1} of the involution of L^KL_{eta^{-1} omega^a}.  For
    the trivial character (and characters of conductor p, which are powers
    of omega) the pole branches store (g0 - 1)(g0 - u) L.
    """
    eta = DirichletCharacter.parse(eta)
    return _kl_cached(eta, config, level or default_level(config))[0]


def kl_info(eta, config: AlgebraConfig, level: Optional[int] = None) -> KLInfo:
    eta = DirichletCharacter.parse(eta)
    return _kl_cached(eta, config, level or default_level(config))[1]


# ---------------------------------------------------------------------------
# oracle


def _psi_parts(eta: DirichletCharacter, lam: PadicCharacter, p: int):
    """psi = eta theta^{-1} written as (eta0, tame exponent, wild (c, -s))."""
    eta0, t = eta.split_at(p)
    return eta0, (t - lam.b) % (p - 1), lam.c, (-lam.s) if lam.c else 0


def twisted_bernoulli(k: int, eta: DirichletCharacter, lam: PadicCharacter, config: AlgebraConfig,
                      prec: int) -> CyclotomicScalar:
    """B_{k,psi} for the primitive character psi = eta theta^{-1}, p-adically
    in the ring holding the values of theta."""
    p, u = config.p, config.u
    eta0, b, c, s = _psi_parts(eta, lam, p)
    n = c if c >= 2 else (1 if b else 0)
    f0 = eta0.conductor
    F = f0 * p ** n
    L = lam.level
    W = prec + 4 * k + 2 * n * k + 10
    mod = p ** W
    d = cyclotomic_degree(p, L)
    wild = PadicCharacter(0, c, s % p ** (c - 1), 0) if c >= 2 else None
    acc = [Fraction(0)] * d
    scale = Fraction(F) ** (k - 1)
    for a in range(1, F + 1):
        if math.gcd(a, F) != 1:
            continue
        e0 = eta0(a)
        if e0 == 0:
            continue
        coeff = scale * e0 * bernoulli_eval(k, Fraction(a, F))
        w = pow(teichmuller_int(a, p, W), b, mod) if n else 1
        if wild is not None:
            ex = wild.wild_exponent(a, p, u) * wild.s % p ** (c - 1)
            z = ring_power_ints(ex, p, L, mod)
        else:
            z = [1] + [0] * (d - 1)
        for i, zi in enumerate(z):
            if zi:
                acc[i] += coeff * (w * zi % mod)
    coords = [PadicScalar.from_fraction(x, p, prec + 5) for x in acc]
    return CyclotomicScalar(p, L, tuple(c_.reduce(prec) for c_ in coords))


def psi_at_p(eta: DirichletCharacter, lam: PadicCharacter, p: int) -> int:
    eta0, b, c, _ = _psi_parts(eta, lam, p)
    if c >= 2 or b:
        return 0
    return eta0(p)


def check_parity(eta: DirichletCharacter, lam: PadicCharacter) -> None:
    """The hypothesis theta chi^j(-1) = sgn(j - 1/2) eta(-1)."""
    sgn = 1 if lam.j >= 1 else -1
    if lam.parity() != sgn * eta.parity():
        raise DomainError(
            f"parity hypothesis fails: theta chi^j(-1) = {lam.parity()}, need {sgn * eta.parity()}")


def kl_oracle(eta, lam: PadicCharacter, config: AlgebraConfig, prec: int) -> CyclotomicScalar:
    """e_eta(theta, j) L(eta theta^{-1}, j) / Omega_eta(theta, j) for j <= 0.

    The prefactor (p^j/eta(p))^n of e_eta cancels against Omega_eta, leaving
    (1 - p^{-j} psi(p)) L(psi, j) with psi = eta theta^{-1} primitive.
    """
    eta = DirichletCharacter.parse(eta)
    if lam.j > 0:
        raise DomainError("the algebraic side only covers j <= 0")
    p = config.p
    k = 1 - lam.j
    B = twisted_bernoulli(k, eta, lam, config, prec + 2)
    Lval = B * Fraction(-1, k)
    euler = 1 - Fraction(p) ** (-lam.j) * psi_at_p(eta, lam, p)
    return Lval * euler


def e_eta(eta, lam: PadicCharacter, p: int):
    """The factor e_eta(theta, j) including (p^j / eta(p))^n (exact rational,
    or None when eta(p) = 0 makes the prefactor undefined)."""
    eta = DirichletCharacter.parse(eta)
    check_parity(eta, lam)
    n = lam.conductor_exponent()
    etap = eta(p) if eta.conductor % p else 0
    j = lam.j
    if j >= 1:
        core = 1 - Fraction(p) ** (j - 1) * (psi_at_p(eta, lam, p) if lam.theta_trivial() else 0)
    else:
        core = 1 - Fraction(p) ** (-j) * psi_at_p(eta, lam, p)
    if n == 0:
        return core
    if etap == 0:
        return None
    return (Fraction(p) ** j / etap) ** n * core


@dataclass
class InterpolationResult:
    passed: bool
    lhs: CyclotomicScalar
    rhs: CyclotomicScalar
    precision: int
    character: PadicCharacter

    def describe(self) -> str:
        lam = self.character
        return (f"(b={lam.b}, c={lam.c}, s={lam.s}, j={lam.j}): "
                f"{'pass' if self.passed else 'FAIL'} mod p^{self.precision}")


def verify_interpolation(L: IwasawaElement, eta, lam: PadicCharacter, prec: Optional[int] = None) -> InterpolationResult:
    """Compare lambda(L_eta) with the Bernoulli oracle (j <= 0)."""
    eta = DirichletCharacter.parse(eta)
    lam = lam.validate(L.p)
    check_parity(eta, lam)
    if lam.j > 0:
        raise DomainError("only j <= 0 is checked numerically")
    lhs = evaluate(L, lam, prec=prec)
    P = lhs.prec if prec is None else min(lhs.prec, prec)
    rhs = kl_oracle(eta, lam, L.config, P)
    diff = lhs - rhs
    P = min(P, diff.prec)
    return InterpolationResult(diff.is_zero(), lhs, rhs, P, lam)


def verify_reflected(L: IwasawaElement, eta, lam: PadicCharacter) -> InterpolationResult:
    """For j >= 1 on the reflected branches: lambda(L) should equal
    (1 - p^{j-1} (eta^{-1} theta)(p)) L(eta^{-1} theta, 1 - j)."""
    eta = DirichletCharacter.parse(eta)
    lam = lam.validate(L.p)
    check_parity(eta, lam)
    if lam.j < 1:
        raise DomainError("reflected check needs j >= 1")
    lhs = evaluate(L, lam)
    mirror = PadicCharacter(-lam.b, lam.c, -lam.s if lam.c else 0, 1 - lam.j).validate(L.p)
    rhs = kl_oracle(eta.inverse(), mirror, L.config, lhs.prec)
    diff = lhs - rhs
    return InterpolationResult(diff.is_zero(), lhs, rhs, min(lhs.prec, diff.prec), lam)


def residue_at_one(config: AlgebraConfig, level: Optional[int] = None) -> PadicScalar:
    """Residue of zeta_p(s) = L_triv branch 1 at T = u^s - 1, recovered from
    the stored numerator: N_1(u - 1) / (p_u log_p(u)) with p_u = u - 1."""
    from .iwasawa import evaluate_row
    from .padic import padic_log

    L = kl_element(DirichletCharacter(1), config, level)
    a = 1 % (config.p - 1)
    if not L.poles[a]:
        raise AssertionError("branch 1 of the trivial element must carry the pole")
    num = evaluate_row(L.branches[a], L.tail, PadicCharacter(0, 0, 0, 1), config).to_padic()
    u = config.u
    lg = padic_log(PadicScalar.from_int(u, config.p, config.N + 4))
    return num / (lg * (u - 1) * u)
