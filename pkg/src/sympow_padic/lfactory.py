"""Sign combinatorics, interpolation factors, Pollack's plus/minus split and
the assembly of the mixed and admissible p-adic L-functions of V_m."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError
from .iwasawa import (
    AlgebraConfig,
    Growth,
    IwasawaElement,
    PadicCharacter,
    Poly,
    _tail_min,
    evaluate,
    twist,
)
from .kubota import DirichletCharacter, e_eta, kl_element
from .padic import CyclotomicScalar, PadicScalar, vp
from .special import pollack_log
from .sympower import AlphaNum, SymPowerContext, d_pm, is_critical

# ---------------------------------------------------------------------------
# signs


@dataclass(frozen=True)
class SignVector:
    signs: tuple  # of "+" / "-"

    @staticmethod
    def parse(text) -> "SignVector":
        if isinstance(text, SignVector):
            return text
        s = tuple(ch for ch in str(text) if ch in "+-")
        if not s:
            raise DomainError(f"no signs in {text!r}")
        return SignVector(s)

    def __len__(self):
        return len(self.signs)

    def __getitem__(self, i):
        return self.signs[i]

    def __iter__(self):
        return iter(self.signs)

    @property
    def plus(self) -> int:
        return self.signs.count("+")

    @property
    def minus(self) -> int:
        return self.signs.count("-")

    def __str__(self) -> str:
        return "".join(self.signs)


def enumerate_signs(rt: int) -> list:
    if rt < 1:
        raise DomainError("need at least one component")
    return [SignVector(t) for t in itertools.product("+-", repeat=rt)]


def sign_entry(s: SignVector, t: SignVector) -> int:
    b = sum(1 for x, y in zip(s, t) if x == y == "-")
    return -1 if b % 2 else 1


@dataclass(frozen=True)
class SignMatrix:
    signs: tuple
    entries: tuple  # rows of +-1

    @property
    def size(self) -> int:
        return len(self.signs)

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def square(self) -> list:
        n = self.size
        A = self.entries
        return [[sum(A[i][k] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    def square_is_scalar(self) -> bool:
        n = self.size
        sq = self.square()
        return all(sq[i][j] == (n if i == j else 0) for i in range(n) for j in range(n))

    def counting_identity(self) -> bool:
        """#{s : a_{s,t} = a_{s,u}} = n/2 for every t != u."""
        n = self.size
        A = self.entries
        for t in range(n):
            for u in range(t + 1, n):
                same = sum(1 for s in range(n) if A[s][t] == A[s][u])
                if same != n // 2:
                    return False
        return True


def sign_matrix(rt: int) -> SignMatrix:
    S = enumerate_signs(rt)
    return SignMatrix(tuple(S), tuple(tuple(sign_entry(s, t) for t in S) for s in S))


def sign_matrix_fast_checks(rt: int) -> dict:
    """The three matrix properties via numpy (used for large r-tilde)."""
    import numpy as np

    S = enumerate_signs(rt)
    minus = np.array([[1 if x == "-" else 0 for x in s] for s in S], dtype=np.int64)
    B = minus @ minus.T
    A = np.where(B % 2 == 1, -1, 1).astype(np.int64)
    n = len(S)
    sq = A @ A
    same = (A.T @ A + n) // 2  # entry (t,u): #{s : a_st = a_su}
    off = ~np.eye(n, dtype=bool)
    return {
        "symmetric": bool((A == A.T).all()),
        "square_scalar": bool((sq == n * np.eye(n, dtype=np.int64)).all()),
        "counting": bool((same[off] == n // 2).all()),
    }


# ---------------------------------------------------------------------------
# interpolation factors


@dataclass
class EFactor:
    """exact * padic; ``padic`` holds the p-adic part (log evaluations) or None.

    ``zeros`` counts literal zero factors in the defining product."""

    exact: AlphaNum
    padic: Optional[CyclotomicScalar] = None
    zeros: int = 0
    factors: list = field(default_factory=list)

    def __mul__(self, other: "EFactor") -> "EFactor":
        if self.padic is None:
            pad = other.padic
        elif other.padic is None:
            pad = self.padic
        else:
            pad = self.padic * other.padic
        return EFactor(self.exact * other.exact, pad, self.zeros + other.zeros, self.factors + other.factors)

    def is_zero(self) -> bool:
        return self.exact.is_zero()

    def as_dict(self) -> dict:
        return {
            "exact": str(self.exact),
            "padic": None if self.padic is None else str(self.padic),
            "zeros": self.zeros,
            "factors": [[lab, str(v)] for lab, v in self.factors],
        }


def _one(d=None) -> AlphaNum:
    return AlphaNum(Fraction(1), Fraction(0), d)


def _theta_p(theta: PadicCharacter) -> int:
    return theta.theta_at_p()


def _mk(factors: list, d=None) -> EFactor:
    val = _one(d)
    zeros = 0
    for _, v in factors:
        val = val * v
        if AlphaNum.of(v).is_zero():
            zeros += 1
    return EFactor(val, None, zeros, factors)


def e_AV(alpha: AlphaNum, kprime: int, theta: PadicCharacter, j: int, p: int) -> EFactor:
    """(p^j/alpha)^n (1 - theta^{-1}(p) alphabar p^{-j}) (1 - theta(p) p^{j-1}/alpha), alphabar = -alpha."""
    if not 1 <= j <= kprime - 1:
        raise DomainError(f"j = {j} outside [1, {kprime - 1}]")
    n = theta.conductor_exponent()
    tp = _theta_p(theta)
    d = alpha.d
    pj = AlphaNum(Fraction(p) ** j, Fraction(0), d)
    abar = -alpha
    f1 = _one(d) - abar * (Fraction(tp) / Fraction(p) ** j)
    f2 = _one(d) - (Fraction(tp) * Fraction(p) ** (j - 1)) / alpha
    return _mk([("(p^j/alpha)^n", (pj / alpha) ** n), ("1-theta^-1(p)abar p^-j", f1),
                ("1-theta(p)p^(j-1)/alpha", f2)], d)


def e_pm(sign: str, kprime: int, eps: int, theta: PadicCharacter, j: int, config: AlgebraConfig) -> EFactor:
    """e^+ / e^- of a weight-k' form with a_p = 0, including the log evaluation."""
    if not 1 <= j <= kprime - 1:
        raise DomainError(f"j = {j} outside [1, {kprime - 1}]")
    p = config.p
    n = theta.conductor_exponent()
    tp = _theta_p(theta)
    lam = PadicCharacter(theta.b, theta.c, theta.s, j)
    if sign == "+":
        if n == 1:
            return EFactor(AlphaNum(Fraction(0)), None, 1, [("n = 1", Fraction(0))])
        if n % 2:
            raise DomainError(f"conductor p^{n} is not plus-critical")
        num = 1 - Fraction(tp, p)
        expo = Fraction(n * (kprime - 1), 2) - n * j
        den = Fraction(-eps) ** (n // 2) * Fraction(p) ** int(expo)
    elif sign == "-":
        if n % 2 == 0 and n != 0:
            raise DomainError(f"conductor p^{n} is not minus-critical")
        if n == 0:
            num = Fraction(p) ** (-j) + Fraction(1, eps) * Fraction(p) ** (j - kprime)
            den = Fraction(1)
        else:
            num = Fraction(1)
            expo = Fraction((n + 1) * (kprime - 1), 2) - n * j
            den = Fraction(-eps) ** ((n + 1) // 2) * Fraction(p) ** int(expo)
    else:
        raise DomainError(f"sign must be + or -, not {sign!r}")
    log_val = evaluate(pollack_log(sign, kprime - 1, config), lam)
    exact = AlphaNum(num / den)
    zeros = 1 if num == 0 else 0
    return EFactor(exact, _inv(log_val), zeros,
                   [("numerator", num), ("denominator", den), (f"1/log{sign}_{kprime - 1}", log_val)])


def _inv(x: CyclotomicScalar) -> CyclotomicScalar:
    from .iwasawa import ring_inverse

    return ring_inverse(x)


def inert_discriminant(p: int) -> int:
    """A fundamental discriminant D < 0 with (D/p) = -1 (p inert in Q(sqrt D))."""
    for D in (-3, -4, -7, -8, -11, -19, -20, -23, -24, -31, -35, -39, -40, -43, -47):
        if D % p and DirichletCharacter(D)(p) == -1:
            return D
    raise DomainError(f"no small inert discriminant for p = {p}")


def dirichlet_piece(ctx: SymPowerContext) -> Optional[DirichletCharacter]:
    """eps_K^r for m even (trivial when r is even), None for m odd."""
    if ctx.m % 2:
        return None
    if ctx.r % 2 == 0:
        return DirichletCharacter(1)
    return DirichletCharacter(inert_discriminant(ctx.p))


def e_KL(eta, theta: PadicCharacter, j: int, p: int) -> EFactor:
    lam = PadicCharacter(theta.b, theta.c, theta.s, j)
    v = e_eta(eta, lam, p)
    if v is None:
        raise DomainError("e_eta needs eta(p) != 0 for ramified theta")
    return _mk([("e_eta", AlphaNum(Fraction(v)))])


def gate_s_critical(ctx: SymPowerContext, s: SignVector, theta: PadicCharacter, j: int) -> None:
    if len(s) != ctx.rt:
        raise DomainError(f"sign vector has length {len(s)}, need {ctx.rt}")
    if not is_critical(ctx, theta.theta_parity(), theta.conductor_exponent(), j):
        raise DomainError(f"(theta, j = {j}) is not a critical twist")
    n = theta.conductor_exponent()
    if s.minus == 0:
        if not (n == 1 or n % 2 == 0):
            raise DomainError("all-plus signs need n = 1 or n even")
    elif s.plus == 0:
        if not (n == 0 or n % 2 == 1):
            raise DomainError("all-minus signs need n = 0 or n odd")
    elif n not in (0, 1):
        raise DomainError("mixed signs need n = 0 or 1")


def e_mixed(ctx: SymPowerContext, s, theta: PadicCharacter, j: int, config: AlgebraConfig) -> EFactor:
    s = SignVector.parse(s)
    gate_s_critical(ctx, s, theta, j)
    out = EFactor(_one())
    for i in range(ctx.rt):
        out = out * e_pm(s[i], ctx.k_i(i), ctx.eps_i(i), theta, j + ctx.shift(i), config)
    eta = dirichlet_piece(ctx)
    if eta is not None:
        out = out * e_KL(eta, theta, j, ctx.p)
    return out


@dataclass
class AdmissibleEFactor:
    product: EFactor
    closed_printed: AlphaNum
    closed_corrected: AlphaNum

    @property
    def printed_agrees(self) -> bool:
        return self.product.exact == self.closed_printed

    @property
    def corrected_agrees(self) -> bool:
        return self.product.exact == self.closed_corrected


def _check_critical(ctx: SymPowerContext, theta: PadicCharacter, j: int) -> None:
    if not is_critical(ctx, theta.theta_parity(), theta.conductor_exponent(), j):
        raise DomainError(f"(theta, j = {j}) is not in C_m")


def e_admissible_product(ctx: SymPowerContext, s, theta: PadicCharacter, j: int) -> EFactor:
    s = SignVector.parse(s)
    _check_critical(ctx, theta, j)
    d = None if ctx.alpha_is_rational else ctx.alpha_square
    out = EFactor(_one(d))
    for i in range(ctx.rt):
        out = out * e_AV(ctx.alpha_i(i, s[i]), ctx.k_i(i), theta, j + ctx.shift(i), ctx.p)
    eta = dirichlet_piece(ctx)
    if eta is not None:
        out = out * e_KL(eta, theta, j, ctx.p)
    return out


def e_admissible_closed(ctx: SymPowerContext, s, theta: PadicCharacter, j: int, corrected: bool = False) -> AlphaNum:
    """The two-case closed form.  With ``corrected`` the prefactor carries the
    p^{nJ_i} of each component factor, J_i = j + (r - i)(k - 1)."""
    s = SignVector.parse(s)
    p, k, r = ctx.p, ctx.k, ctx.r
    n = theta.conductor_exponent()
    tp = Fraction(_theta_p(theta))
    d = None if ctx.alpha_is_rational else ctx.alpha_square
    one = _one(d)
    P = Fraction(p)
    if ctx.m % 2 == 0:
        pref = one / (P ** (n * (k - 1) * r * (r + 1) // 2))
        minus = ((-1) ** n) * (one - tp * P ** (-j)) * (one + tp * P ** (j - 1))
        plus = (one + tp * P ** (-j)) * (one - tp * P ** (j - 1))
        tail = e_KL(dirichlet_piece(ctx), theta, j, p).exact
    else:
        a = ctx.alpha()
        pref = one / ((a ** (r + 1)) * P ** ((k - 1) * r * (r + 1) // 2)) ** n
        minus = ((-1) ** n) * (one - a * (tp * P ** (-j))) * (one + (tp * P ** (j - 1)) / a)
        plus = (one + a * (tp * P ** (-j))) * (one - (tp * P ** (j - 1)) / a)
        tail = one
    val = pref * minus ** s.minus * plus ** s.plus * tail
    if corrected:
        val = val * P ** (n * sum(j + ctx.shift(i) for i in range(ctx.rt)))
    return val


def e_admissible(ctx: SymPowerContext, s, theta: PadicCharacter, j: int) -> AdmissibleEFactor:
    return AdmissibleEFactor(
        e_admissible_product(ctx, s, theta, j),
        e_admissible_closed(ctx, s, theta, j),
        e_admissible_closed(ctx, s, theta, j, corrected=True),
    )


def thetas_up_to(p: int, n_max: int) -> list:
    """One representative per (tame exponent, wild selector) for conductors
    up to p^{n_max}, as PadicCharacters with j = 0."""
    out = []
    for b in range(p - 1):
        out.append(PadicCharacter(b, 0, 0, 0))
    for c in range(2, n_max + 1):
        for s in range(1, p ** (c - 1)):
            if s % p == 0:
                continue
            for b in range(p - 1):
                out.append(PadicCharacter(b, c, s, 0))
    return out


def critical_pairs(ctx: SymPowerContext, n_max: int) -> list:
    lo = -(ctx.k - 1) + 1 if ctx.m % 2 == 0 else 1
    out = []
    for th in thetas_up_to(ctx.p, n_max):
        for j in range(lo, ctx.k):
            if is_critical(ctx, th.theta_parity(), th.conductor_exponent(), j):
                out.append((th, j))
    return out


def growth_budget(ctx: SymPowerContext, s) -> Fraction:
    s = SignVector.parse(s)
    return sum((ctx.alpha_i_valuation(i) for i in range(ctx.rt)), Fraction(0))


def growth_target(ctx: SymPowerContext) -> Fraction:
    dp, dm = d_pm(ctx)
    return Fraction((ctx.k - 1) * dp * dm, 2)


# ---------------------------------------------------------------------------
# elements with alpha coefficients


@dataclass(frozen=True)
class AlphaElement:
    """A + alpha B, alpha^2 = d (d None: B is zero)."""

    A: IwasawaElement
    B: Optional[IwasawaElement] = None
    d: Optional[Fraction] = None

    @staticmethod
    def of(x: IwasawaElement, d=None) -> "AlphaElement":
        return x if isinstance(x, AlphaElement) else AlphaElement(x, None, d)

    @property
    def config(self) -> AlgebraConfig:
        return self.A.config

    def _B(self):
        return self.B if self.B is not None else self.A.scale(0)

    def _co(self, other):
        return AlphaElement.of(other, self.d)

    def __add__(self, other):
        o = self._co(other)
        if self.B is None and o.B is None:
            return AlphaElement(self.A + o.A, None, self.d or o.d)
        return AlphaElement(self.A + o.A, self._B() + o._B(), self.d or o.d)

    def __neg__(self):
        return AlphaElement(-self.A, None if self.B is None else -self.B, self.d)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __mul__(self, other):
        if isinstance(other, AlphaNum):
            return self.scale(other)
        o = self._co(other)
        d = self.d or o.d
        A = self.A * o.A
        if self.B is None and o.B is None:
            return AlphaElement(A, None, d)
        if self.B is not None and o.B is not None:
            A = A + (self.B * o.B).scale(d)
        B = None
        if self.B is not None:
            B = self.B * o.A
        if o.B is not None:
            B = (self.A * o.B) if B is None else B + self.A * o.B
        return AlphaElement(A, B, d)

    def scale(self, c: AlphaNum) -> "AlphaElement":
        c = AlphaNum.of(c)
        d = self.d or c.d
        A = self.A.scale(c.a)
        B = None
        if self.B is not None:
            A = A + self.B.scale(c.b * d) if c.b else A
            B = self.B.scale(c.a)
        if c.b:
            B = self.A.scale(c.b) if B is None else B + self.A.scale(c.b)
        return AlphaElement(A, B, d)

    def divide(self, g: IwasawaElement) -> "AlphaElement":
        return AlphaElement(self.A.divide(g), None if self.B is None else self.B.divide(g), self.d)

    def twist(self, n: int) -> "AlphaElement":
        return AlphaElement(twist(self.A, n), None if self.B is None else twist(self.B, n), self.d)

    def evaluate(self, lam: PadicCharacter) -> tuple:
        a = evaluate(self.A, lam)
        b = None if self.B is None else evaluate(self.B, lam)
        return a, b

    def residual_valuation(self, other: "AlphaElement", M: Optional[int] = None) -> float:
        """Smallest certified valuation of the difference over the first M
        coefficients of both alpha-parts (inf if it vanishes)."""
        diff = self - self._co(other)
        vals = [_cert_val(diff.A, M)]
        if diff.B is not None:
            vals.append(_cert_val(diff.B, M))
        return min(vals)

    def precision(self, M: Optional[int] = None) -> int:
        ps = [_prec(self.A, M)]
        if self.B is not None:
            ps.append(_prec(self.B, M))
        return min(ps)

    def alpha_free(self, M: Optional[int] = None) -> bool:
        return self.B is None or _cert_val(self.B, M) >= _prec(self.B, M)


def _cert_val(h: IwasawaElement, M: Optional[int]) -> float:
    M = M or h.config.M
    return min(c.val for row in h.branches for c in row[:M])


def _prec(h: IwasawaElement, M: Optional[int]) -> int:
    M = M or h.config.M
    return min(c.prec for row in h.branches for c in row[:M])


# ---------------------------------------------------------------------------
# Pollack combine / split


def pollack_combine(Lplus, Lminus, alpha: AlphaNum, kprime: int, config: AlgebraConfig) -> AlphaElement:
    """L_alpha = L^+ log^+_{k'-1} + alpha L^- log^-_{k'-1}."""
    lp = pollack_log("+", kprime - 1, config)
    lm = pollack_log("-", kprime - 1, config)
    d = alpha.d
    first = AlphaElement.of(Lplus, d) * AlphaElement.of(lp, d)
    second = (AlphaElement.of(Lminus, d) * AlphaElement.of(lm, d)).scale(alpha)
    return first + second


def pollack_split(L_alpha, L_abar, alpha: AlphaNum, kprime: int, config: AlgebraConfig) -> tuple:
    """(L^+, L^-) from the pair (L_alpha, L_{-alpha})."""
    d = alpha.d
    La, Lb = AlphaElement.of(L_alpha, d), AlphaElement.of(L_abar, d)
    abar = -alpha
    inv = (abar - alpha).inverse()
    plus = (La.scale(abar) - Lb.scale(alpha)).scale(inv).divide(pollack_log("+", kprime - 1, config))
    minus = (Lb - La).scale(inv).divide(pollack_log("-", kprime - 1, config))
    return _lambda_tail(plus), _lambda_tail(minus)


def _lambda_tail(x: AlphaElement) -> AlphaElement:
    """L^+- lie in Lambda_E, so the unstored tail is bounded like the window."""
    def fix(h):
        if h is None:
            return None
        vals = [c.val for row in h.branches for c in row if not c.is_zero()]
        C = max(0, -min(vals)) if vals else 0
        return h.with_rows(h.branches, tail=Growth(0.0, float(C)))
    return AlphaElement(fix(x.A), fix(x.B), x.d)


@lru_cache(maxsize=256)
def log_window_loss(b: int, config: AlgebraConfig, window: int) -> int:
    """Digits lost multiplying by log^+-_b and dividing by it again, over the
    first ``window`` coefficients: -min v(log) - min v(1/log) for both signs."""
    loss = 0
    for sign in "+-":
        g = pollack_log(sign, b, config)
        inv = config.one().divide(g)
        v1 = min(c.val for c in g.branches[0][:window] if not c.is_zero())
        v2 = min(c.val for c in inv.branches[0][:window] if not c.is_zero())
        loss = max(loss, -min(0, v1) - min(0, v2))
    return loss


def ell(ctx: SymPowerContext, i: int, sign: str, config: AlgebraConfig, shift: int = 0) -> AlphaElement:
    """l_i^+ = log^+_{k_i-1}; l_i^- = alpha_{i,+} log^-_{k_i-1}.  ``shift``
    gives the Tw_shift image, built exactly."""
    b = ctx.k_i(i) - 1
    d = None if ctx.alpha_is_rational else ctx.alpha_square
    if sign == "+":
        return AlphaElement.of(pollack_log("+", b, config, shift), d)
    return AlphaElement.of(pollack_log("-", b, config, shift), d).scale(ctx.alpha_i(i, "+"))


# ---------------------------------------------------------------------------
# component sets and assembly


@dataclass
class ComponentLSet:
    kind: str  # "admissible" (L_{f_i,+}, L_{f_i,-}) or "lambda" (L^+_{f_i}, L^-_{f_i})
    pairs: list
    dirichlet: Optional[IwasawaElement]
    provenance: str = "synthetic"

    def check(self, ctx: SymPowerContext) -> None:
        if self.kind not in ("admissible", "lambda"):
            raise DomainError(f"unknown component kind {self.kind!r}")
        if len(self.pairs) != ctx.rt:
            raise DomainError(f"need {ctx.rt} component pairs, got {len(self.pairs)}")
        if (ctx.m % 2 == 0) != (self.dirichlet is not None):
            raise DomainError("the Dirichlet piece is present exactly when m is even")


def random_lambda_element(config: AlgebraConfig, rng: random.Random, degree: Optional[int] = None) -> IwasawaElement:
    deg = config.M - 1 if degree is None else degree
    mod = config.p ** config.N
    table = {a: [rng.randrange(mod) for _ in range(deg + 1)] for a in range(config.p - 1)}
    return config.from_branches(table)


def random_components(ctx: SymPowerContext, config: AlgebraConfig, seed: int = 0, dirichlet: str = "synthetic",
                      degree: Optional[int] = None) -> tuple:
    """(Lambda-type set, admissible set) built from random L^+-, L^- via
    pollack_combine; the Dirichlet piece is random or the KL element."""
    rng = random.Random(seed)
    lam_pairs, adm_pairs = [], []
    for i in range(ctx.rt):
        Lp = random_lambda_element(config, rng, degree)
        Lm = random_lambda_element(config, rng, degree)
        lam_pairs.append((Lp, Lm))
        kp = ctx.k_i(i)
        adm_pairs.append((pollack_combine(Lp, Lm, ctx.alpha_i(i, "+"), kp, config),
                          pollack_combine(Lp, Lm, ctx.alpha_i(i, "-"), kp, config)))
    eta = dirichlet_piece(ctx)
    D = None
    prov = "synthetic"
    if eta is not None:
        if dirichlet == "kl":
            D = kl_element(eta, config)
            prov = "kubota_leopoldt"
        else:
            D = random_lambda_element(config, rng, degree)
    return ComponentLSet("lambda", lam_pairs, D, prov), ComponentLSet("admissible", adm_pairs, D, prov)


@dataclass
class Assembled:
    element: AlphaElement
    signs: SignVector
    growth: Fraction
    pole_divisor: bool
    twists: tuple


def _assemble(ctx: SymPowerContext, comps: ComponentLSet, s: SignVector, pick) -> AlphaElement:
    d = None if ctx.alpha_is_rational else ctx.alpha_square
    out = None
    for i in range(ctx.rt):
        piece = AlphaElement.of(pick(comps.pairs[i], s[i]), d).twist(ctx.shift(i))
        out = piece if out is None else out * piece
    if comps.dirichlet is not None:
        out = out * AlphaElement.of(comps.dirichlet, d)
    return out


def assemble_mixed(ctx: SymPowerContext, comps: ComponentLSet, s) -> Assembled:
    """prod_i Tw_{(r-i)(k-1)}(L^{s_i}_{f_i}) (times L_{eps_K^r} for m even)."""
    s = SignVector.parse(s)
    comps.check(ctx)
    if comps.kind != "lambda":
        raise DomainError("assemble_mixed needs Lambda-type components")
    el = _assemble(ctx, comps, s, lambda pair, sg: pair[0] if sg == "+" else pair[1])
    return Assembled(el, s, Fraction(0), ctx.m % 4 == 0, tuple(ctx.shift(i) for i in range(ctx.rt)))


def assemble_admissible(ctx: SymPowerContext, comps: ComponentLSet, s) -> Assembled:
    """prod_i Tw_{(r-i)(k-1)}(L_{f_i, s_i}) (times L_{eps_K^r} for m even)."""
    s = SignVector.parse(s)
    comps.check(ctx)
    if comps.kind != "admissible":
        raise DomainError("assemble_admissible needs admissible-type components")
    el = _assemble(ctx, comps, s, lambda pair, sg: pair[0] if sg == "+" else pair[1])
    return Assembled(el, s, growth_target(ctx), ctx.m % 4 == 0, tuple(ctx.shift(i) for i in range(ctx.rt)))


def ell_vm(ctx: SymPowerContext, s: SignVector, config: AlgebraConfig) -> AlphaElement:
    out = None
    for i in range(ctx.rt):
        piece = ell(ctx, i, s[i], config, ctx.shift(i))
        out = piece if out is None else out * piece
    return out


@dataclass
class DecompositionReport:
    slack: int
    compare_M: int
    precision: int
    expansion: dict = field(default_factory=dict)  # s -> residual valuation
    inverse: dict = field(default_factory=dict)  # t -> residual valuation
    split: list = field(default_factory=list)  # per component (plus, minus) residuals

    @property
    def target(self) -> int:
        return self.precision - self.slack

    @property
    def passed(self) -> bool:
        vals = list(self.expansion.values()) + list(self.inverse.values())
        vals += [v for pair in self.split for v in pair]
        return all(v >= self.target for v in vals)

    def as_dict(self) -> dict:
        f = lambda v: "inf" if v == math.inf else int(v)
        return {
            "slack": self.slack, "compare_M": self.compare_M, "precision": self.precision,
            "target": self.target, "passed": self.passed,
            "expansion": {k: f(v) for k, v in self.expansion.items()},
            "inverse": {k: f(v) for k, v in self.inverse.items()},
            "split": [[f(a), f(b)] for a, b in self.split],
        }


def twist_truncation_loss(elt: IwasawaElement, shift: int, config: AlgebraConfig, window: int) -> int:
    """Digits below N that the unstored tail can reach on the first ``window``
    coefficients after Tw_shift (0 when M is large enough)."""
    if shift == 0 or isinstance(elt.tail, Poly):
        return 0
    step = vp(Fraction(config.u) ** shift - 1, config.p)
    floor_ = _tail_min(elt.tail, config.p, config.M, step, offset=window - 1)
    if floor_ == -math.inf:
        return config.N
    return max(0, config.N - math.floor(floor_))


def decomposition_slack(ctx: SymPowerContext, config: AlgebraConfig, window: int = 20,
                        comps: Optional[ComponentLSet] = None) -> int:
    """Declared precision loss: per component the log multiplication and
    division losses on the window, v(alpha_i) and the 1/2 of the split, plus
    the tail truncation of the twists when the components are supplied."""
    lost = 0
    for i in range(ctx.rt):
        lost += log_window_loss(ctx.k_i(i) - 1, config, window)
        lost += int(math.ceil(ctx.alpha_i_valuation(i))) + 1
    if comps is not None:
        trunc = 0
        for i, pair in enumerate(comps.pairs):
            for elt in pair:
                for part in (elt.A, elt.B):
                    if part is not None:
                        trunc = max(trunc, twist_truncation_loss(part, ctx.shift(i), config, window))
        lost += trunc
    return lost + 2


def decomposition_check(ctx: SymPowerContext, comps: ComponentLSet, config: AlgebraConfig,
                        compare_M: int = 20, lambda_comps: Optional[ComponentLSet] = None) -> DecompositionReport:
    """Both directions of the sign-matrix expansion, coefficientwise.

    Lambda-type components are recovered from the admissible ones by
    pollack_split; if the originals are supplied the split is also compared
    with them.
    """
    comps.check(ctx)
    if comps.kind != "admissible":
        raise DomainError("decomposition_check takes admissible-type components")
    d = None if ctx.alpha_is_rational else ctx.alpha_square
    split_pairs = []
    report = DecompositionReport(decomposition_slack(ctx, config, compare_M, comps), compare_M, config.N)
    for i, (La, Lb) in enumerate(comps.pairs):
        plus, minus = pollack_split(La, Lb, ctx.alpha_i(i, "+"), ctx.k_i(i), config)
        if lambda_comps is not None:
            Lp, Lm = lambda_comps.pairs[i]
            report.split.append((plus.residual_valuation(Lp, compare_M), minus.residual_valuation(Lm, compare_M)))
        split_pairs.append((plus, minus))
    lam_set = ComponentLSet("lambda", split_pairs, comps.dirichlet, comps.provenance)
    S = enumerate_signs(ctx.rt)
    adm = {str(t): assemble_admissible(ctx, comps, t).element for t in S}
    mixed = {str(s): assemble_mixed(ctx, lam_set, s).element for s in S}
    ells = {str(s): ell_vm(ctx, s, config) for s in S}
    prods = {key: ells[key] * mixed[key] for key in mixed}
    scale = AlphaNum(Fraction(2 ** ctx.rt), Fraction(0), d)
    for s in S:
        lhs = prods[str(s)].scale(scale)
        rhs = None
        for t in S:
            term = adm[str(t)].scale(AlphaNum(Fraction(sign_entry(s, t)), Fraction(0), d))
            rhs = term if rhs is None else rhs + term
        report.expansion[str(s)] = lhs.residual_valuation(rhs, compare_M)
    for t in S:
        rhs = None
        for s in S:
            term = prods[str(s)].scale(AlphaNum(Fraction(sign_entry(s, t)), Fraction(0), d))
            rhs = term if rhs is None else rhs + term
        report.inverse[str(t)] = adm[str(t)].residual_valuation(rhs, compare_M)
    return report
