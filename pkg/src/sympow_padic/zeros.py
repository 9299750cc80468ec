"""Trivial zeros, predicted orders of vanishing and leading-term reports.

Everything here is bookkeeping over the interpolation factors: the orders
are the theorem's case values, the L-invariants are opaque symbols and the
archimedean value L(V_m, j)/Omega_m is a label.  The one numeric input is
the residue of zeta_p at s = 1, which is checked against the Kubota-Leopoldt
element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .iwasawa import AlgebraConfig, PadicCharacter
from .lfactory import SignVector, critical_pairs, dirichlet_piece, e_AV, e_KL, enumerate_signs
from .padic import PadicScalar
from .sympower import SymPowerContext, is_critical

TRIVIAL = PadicCharacter(0, 0, 0, 0)


@dataclass(frozen=True, order=True)
class TrivialZeroRecord:
    component: object  # index i, or "dirichlet"
    sign: str
    theta: str
    j: int
    cause: str

    def as_dict(self) -> dict:
        return {"component": self.component, "sign": self.sign, "theta": self.theta,
                "j": self.j, "cause": self.cause}


@dataclass(frozen=True)
class OrderPrediction:
    """``relation`` is '>=' when the bound is attained only if the attached
    L-invariants are nonzero, '=' when no L-invariant enters, and '?' at a
    central point whose archimedean value may vanish."""

    value: Optional[int]
    relation: str
    case: str
    note: str = ""

    def as_dict(self) -> dict:
        return {"value": self.value, "relation": self.relation, "case": self.case, "note": self.note}

    def __str__(self) -> str:
        if self.relation == "?":
            return "= ?"
        return f"{self.relation} {self.value}"


@dataclass
class LeadingTermReport:
    branch: int
    point: int
    order: OrderPrediction
    sign: int
    constant: int  # the power of 2
    exp_minus: int  # exponent of (1 - 1/p)
    exp_plus: int  # exponent of (1 + 1/p)
    l_symbols: list = field(default_factory=list)
    archimedean: str = ""
    p: int = 0
    conjecture: Optional[str] = None

    def numeric_constant(self) -> Fraction:
        P = Fraction(self.p)
        return self.sign * self.constant * (1 - 1 / P) ** self.exp_minus * (1 + 1 / P) ** self.exp_plus

    def symbolic(self) -> str:
        parts = []
        if self.sign < 0:
            parts.append("-")
        parts.append(str(self.constant))
        if self.exp_minus:
            parts.append(f"(1-1/p)^{self.exp_minus}")
        if self.exp_plus:
            parts.append(f"(1+1/p)^{self.exp_plus}")
        parts += self.l_symbols
        parts.append(self.archimedean)
        text = " * ".join(parts[1:]) if self.sign < 0 else " * ".join(parts)
        return ("-" + text) if self.sign < 0 else text

    def as_dict(self) -> dict:
        return {
            "branch": self.branch,
            "point": self.point,
            "order": self.order.as_dict(),
            "sign": self.sign,
            "power_of_2": self.constant,
            "exp_one_minus_inv_p": self.exp_minus,
            "exp_one_plus_inv_p": self.exp_plus,
            "l_symbols": list(self.l_symbols),
            "archimedean": self.archimedean,
            "numeric_constant": str(self.numeric_constant()),
            "symbolic": self.symbolic(),
            "conjecture": self.conjecture,
        }


# ---------------------------------------------------------------------------
# where the zeros are


def critical_range(ctx: SymPowerContext, a: int) -> range:
    """Critical j for branch a."""
    k = ctx.k
    if ctx.m % 2 == 0 and (a - ctx.r) % 2 == 1:
        return range(-(k - 1) + 1, 1)
    return range(1, k)


def _zeta(ctx: SymPowerContext) -> Optional[int]:
    """alpha = zeta p^{(k-1)/2} with zeta = +-1, or None when alpha is irrational."""
    if ctx.m % 2 == 0:
        return None
    if not ctx.alpha_is_rational:
        return None
    a = ctx.alpha().a
    return 1 if a > 0 else -1


def _zero_points(ctx: SymPowerContext) -> Optional[dict]:
    """sign -> j of the component zero at trivial theta, or None if no zeros can occur.

    For odd m with alpha = -p^{(k-1)/2} the two roles swap: the plus factor
    1 + zeta p^{(k_i-1)/2 - j} vanishes at the lower point.
    """
    if ctx.m % 2 == 0:
        return {"+": 1, "-": 0}
    zeta = _zeta(ctx)
    if zeta is None:
        return None
    hi, lo = (ctx.k + 1) // 2, (ctx.k - 1) // 2
    return {"+": hi, "-": lo} if zeta == 1 else {"+": lo, "-": hi}


def _cause(ctx: SymPowerContext, sign: str, j: int) -> str:
    """Label of the factor of e_{f_i} that vanishes (matches lfactory.e_AV)."""
    # (1 - theta^{-1}(p) alphabar p^{-J}) vanishes when alphabar = p^J;
    # (1 - theta(p) p^{J-1}/alpha) when alpha = p^{J-1}.
    if ctx.m % 2 == 0:
        first = sign == "-"
    else:
        first = (sign == "-") == (_zeta(ctx) == 1)
    return "1-theta^-1(p)abar p^-j" if first else "1-theta(p)p^(j-1)/alpha"


def locate_trivial_zeros(ctx: SymPowerContext, s) -> list:
    """Trivial zeros of the admissible element for the sign vector s, one
    record per vanishing component factor at a critical twist."""
    s = SignVector.parse(s)
    if len(s) != ctx.rt:
        raise DomainError(f"sign vector has length {len(s)}, need {ctx.rt}")
    points = _zero_points(ctx)
    if points is None:
        return []
    out = []
    for i in range(ctx.rt):
        j = points[s[i]]
        if not is_critical(ctx, TRIVIAL.theta_parity(), 0, j):
            continue
        out.append(TrivialZeroRecord(i, s[i], "1", j, _cause(ctx, s[i], j)))
    return sorted(out)


def locate_note(ctx: SymPowerContext) -> str:
    if ctx.m % 2 == 0:
        return "" if ctx.r % 2 else "r even: (1,0) and (1,1) are not critical"
    if ctx.k % 2 == 0:
        return "k even: (k_i +- 1)/2 is not an integer"
    if _zeta(ctx) is None:
        return "alpha is not +-p^((k-1)/2): no factor can vanish"
    return ""


def brute_force_zeros(ctx: SymPowerContext, s, n_max: int = 2) -> list:
    """Scan C_m up to conductor p^n_max and record every literal zero factor
    of the component and Dirichlet e-factors."""
    s = SignVector.parse(s)
    eta = dirichlet_piece(ctx)
    out = []
    for theta, j in critical_pairs(ctx, n_max):
        label = "1" if theta.theta_trivial() else repr(theta)
        for i in range(ctx.rt):
            e = e_AV(ctx.alpha_i(i, s[i]), ctx.k_i(i), theta, j + ctx.shift(i), ctx.p)
            for name, val in e.factors:
                if _is_zero(val):
                    out.append(TrivialZeroRecord(i, s[i], label, j, name))
        if eta is not None:
            e = e_KL(eta, theta, j, ctx.p)
            for name, val in e.factors:
                if _is_zero(val):
                    out.append(TrivialZeroRecord("dirichlet", "", label, j, name))
    return sorted(out, key=lambda r: (str(r.component), r.sign, r.theta, r.j, r.cause))


def _is_zero(val) -> bool:
    return val.is_zero() if hasattr(val, "is_zero") else val == 0


# ---------------------------------------------------------------------------
# orders and leading terms


def _special_points(ctx: SymPowerContext) -> dict:
    """point -> (sign whose components vanish there,)."""
    pts = _zero_points(ctx)
    if pts is None:
        return {}
    return {pts["+"]: ("+",), pts["-"]: ("-",)}


def vanishing_order(ctx: SymPowerContext, s, a: int, j: int) -> OrderPrediction:
    s = SignVector.parse(s)
    q = ctx.p - 1
    pole_case = ctx.m % 4 == 0 and j in (0, 1)
    if j not in critical_range(ctx, a) and not pole_case:
        raise DomainError(f"j = {j} is not critical for branch {a}")
    count = {"+": s.plus, "-": s.minus}
    if pole_case:
        if a % q == j % q:
            sigma = "+" if j == 1 else "-"
            v = count[sigma] - 1
            return OrderPrediction(v, ">=" if count[sigma] else "=", "4|m",
                                   "the zeta_p pole absorbs one zero")
        return OrderPrediction(0, "=", "otherwise")
    if ctx.m % 2 == 1 and ctx.k % 2 == 0 and 2 * j == ctx.k:
        return OrderPrediction(None, "?", "central",
                               "= 0 unless L(V_m, omega^(k/2-a), k/2) = 0")
    pts = _special_points(ctx)
    if ctx.m % 2 == 0 and ctx.r % 2 == 0:
        pts = {}
    if j in pts and a % q == j % q:
        sigma = pts[j][0]
        return OrderPrediction(count[sigma], ">=" if count[sigma] else "=", f"a=j={j}")
    return OrderPrediction(0, "=", "otherwise")


def l_symbols(ctx: SymPowerContext, s, sigma: str, j: int) -> list:
    """L(f_i, s_i, j + (r - i)(k - 1)) for i with s_i = sigma: the untwisted
    point of the component (a + (k_i - 1)/2 for even m)."""
    s = SignVector.parse(s)
    return [f"L(f_{i},{s[i]},{j + ctx.shift(i)})" for i in range(ctx.rt) if s[i] == sigma]


def leading_term(ctx: SymPowerContext, s, a: int) -> LeadingTermReport:
    s = SignVector.parse(s)
    sp, sm = s.plus, s.minus
    q = ctx.p - 1
    if ctx.m % 4 == 0:
        if a % q not in (0, 1):
            raise DomainError("the 4|m points sit on branches 0 and 1")
        j = a % q
        order = vanishing_order(ctx, s, j, j)
        if j == 1:
            return LeadingTermReport(1, 1, order, 1, 2 ** sm, sm + 1, 0, l_symbols(ctx, s, "+", 1),
                                     "L(V_m,1)/Omega_m(1,1)", ctx.p)
        return LeadingTermReport(0, 0, order, -1, 2 ** sp, sp + 1, 0, l_symbols(ctx, s, "-", 0),
                                 "L(V_m,0)/Omega_m(1,0)", ctx.p)
    if ctx.m % 2 == 1 and ctx.k % 2 == 0:
        j = ctx.k // 2
        if a % q != j % q:
            raise DomainError("not an exceptional point")
        order = vanishing_order(ctx, s, a, j)
        conj = f"ord_(s=k/2) L_(V_m,s,{a})(s) = ord_(s=k/2) L(V_m, omega^(k/2-{a}), s)"
        return LeadingTermReport(a, j, order, 1, 1, 0, 0, [], f"L(V_m,{j})/Omega_m(1,{j})", ctx.p, conj)
    pts = _special_points(ctx)
    if ctx.m % 2 == 0 and ctx.r % 2 == 0:
        pts = {}
    hits = [j for j in pts if j % q == a % q]
    if not hits:
        raise DomainError(f"branch {a} carries no exceptional point")
    j = hits[0]
    sigma = pts[j][0]
    order = vanishing_order(ctx, s, j, j)
    extra = 1 if ctx.m % 2 == 0 else 0
    if sigma == "+":
        const, em, ep = 2 ** (sm + extra), sm, sp
    else:
        const, em, ep = 2 ** (sp + extra), sp, sm
    return LeadingTermReport(j, j, order, 1, const, em, ep, l_symbols(ctx, s, sigma, j),
                             f"L(V_m,{j})/Omega_m(1,{j})", ctx.p)


def zero_report(ctx: SymPowerContext) -> dict:
    out = {"note": locate_note(ctx), "signs": {}}
    for s in enumerate_signs(ctx.rt):
        recs = locate_trivial_zeros(ctx, s)
        entry = {"records": [r.as_dict() for r in recs], "leading": []}
        for a in sorted({r.j for r in recs}):
            entry["leading"].append(leading_term(ctx, s, a).as_dict())
        if ctx.m % 4 == 0:
            entry["leading"] = [leading_term(ctx, s, a).as_dict() for a in (1, 0)]
        out["signs"][str(s)] = entry
    return out


# ---------------------------------------------------------------------------
# zeta_p near s = 1


@dataclass(frozen=True)
class ResidueModel:
    p: int
    residue: Fraction
    measured: Optional[PadicScalar] = None

    @property
    def residual_valuation(self) -> Optional[int]:
        if self.measured is None:
            return None
        d = self.measured - self.residue
        return d.val

    def as_dict(self) -> dict:
        out = {"p": self.p, "residue": str(self.residue)}
        if self.measured is not None:
            out["measured"] = str(self.measured)
            out["precision"] = self.measured.prec
            out["residual_valuation"] = self.residual_valuation
        return out


def residue_model(config: AlgebraConfig, check: bool = True, level: Optional[int] = None) -> ResidueModel:
    """zeta_p(s) = (1 - 1/p)/(s - 1) + ...; with ``check`` the residue is
    also read off the Kubota-Leopoldt element."""
    from .kubota import residue_at_one

    res = 1 - Fraction(1, config.p)
    return ResidueModel(config.p, res, residue_at_one(config, level) if check else None)
