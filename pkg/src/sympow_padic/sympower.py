"""Structural data of V_m = Sym^m(V_f) twisted by det^{-r}, for a CM
newform f of weight k at a prime p inert in its CM field."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import DomainError

Rat = Union[int, Fraction]


# ---------------------------------------------------------------------------
# exact arithmetic in Q(alpha), alpha^2 = d


@dataclass(frozen=True)
class AlphaNum:
    """a + b*alpha with alpha^2 = d.  ``d is None`` means alpha is rational
    and has already been folded into ``a``."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: Optional[Fraction] = None

    @staticmethod
    def of(x, d=None) -> "AlphaNum":
        if isinstance(x, AlphaNum):
            return x
        return AlphaNum(Fraction(x), Fraction(0), d)

    def _d(self, other: "AlphaNum"):
        return self.d if self.d is not None else other.d

    def _co(self, x) -> "AlphaNum":
        return AlphaNum.of(x, self.d)

    def __add__(self, other):
        o = self._co(other)
        return AlphaNum(self.a + o.a, self.b + o.b, self._d(o))

    __radd__ = __add__

    def __neg__(self):
        return AlphaNum(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        o = self._co(other)
        d = self._d(o)
        bb = self.b * o.b
        if bb and d is None:
            raise DomainError("alpha has no square recorded")
        return AlphaNum(self.a * o.a + (bb * d if bb else 0), self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "AlphaNum":
        if self.b == 0:
            if self.a == 0:
                raise ZeroDivisionError("inverse of zero")
            return AlphaNum(1 / self.a, Fraction(0), self.d)
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("zero divisor in Q(alpha)")
        return AlphaNum(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = AlphaNum(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        try:
            o = self._co(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise DomainError("value involves alpha")
        return self.a

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*alpha"
        return f"{self.a} + {self.b}*alpha"


# ---------------------------------------------------------------------------
# the context

ALPHA_TOKENS = ("+", "-", "root")


def _parse_alpha(tok) -> Optional[str]:
    if tok is None:
        return None
    s = str(tok).strip().lower()
    table = {"+": "+", "plus": "+", "-": "-", "minus": "-", "root": "root", "nonreal": "root", "alpha": "root"}
    if s not in table:
        raise DomainError(f"unknown alpha choice {tok!r}; use one of {ALPHA_TOKENS}")
    return table[s]


@dataclass(frozen=True)
class SymPowerContext:
    p: int
    k: int
    m: int
    eps_p: int = -1
    alpha_choice: Optional[str] = None

    def __post_init__(self):
        if self.p < 3 or any(self.p % q == 0 for q in range(2, int(math.isqrt(self.p)) + 1)):
            raise DomainError("p must be an odd prime")
        if self.k < 2:
            raise DomainError("weight must be at least 2")
        if self.m < 2:
            raise DomainError("the symmetric power must be at least 2")
        if self.eps_p not in (1, -1):
            raise DomainError("eps(p) is modelled by its sign: +1 or -1")
        object.__setattr__(self, "alpha_choice", _parse_alpha(self.alpha_choice))
        if self.m % 2:
            if self.alpha_choice is None:
                raise DomainError("odd m needs an alpha choice (+, - or root)")
            if self.alpha_choice in "+-" and self.eps_p != -1:
                raise DomainError("alpha = +-p^{(k-1)/2} is a root of x^2 + eps(p) p^{k-1} only when eps(p) = -1")
            if self.alpha_choice == "root" and self.eps_p == -1 and self.k % 2 == 1:
                raise DomainError("alpha is rational here; choose + or -")

    # derived integers
    @property
    def r(self) -> int:
        return self.m // 2

    @property
    def rt(self) -> int:
        return (self.m + 1) // 2

    def k_i(self, i: int) -> int:
        return (self.m - 2 * i) * (self.k - 1) + 1

    @property
    def weights(self) -> list:
        return [self.k_i(i) for i in range(self.rt)]

    def shift(self, i: int) -> int:
        """Twist exponent (r - i)(k - 1) of the i-th component."""
        return (self.r - i) * (self.k - 1)

    # alpha
    @property
    def alpha_square(self) -> Fraction:
        return Fraction(-self.eps_p * self.p ** (self.k - 1))

    def alpha(self) -> AlphaNum:
        """The fixed root alpha of x^2 + eps(p) p^{k-1} (m odd)."""
        if self.m % 2 == 0:
            raise DomainError("alpha is only used for odd m")
        d = self.alpha_square
        if self.k % 2 == 1 and self.eps_p == -1:
            sign = 1 if self.alpha_choice == "+" else -1
            return AlphaNum(Fraction(sign * self.p ** ((self.k - 1) // 2)))
        sign = -1 if self.alpha_choice == "-" else 1
        return AlphaNum(Fraction(0), Fraction(sign), d)

    def alpha_valuation(self) -> Fraction:
        return Fraction(self.k - 1, 2)

    def alpha_i(self, i: int, sign: str) -> AlphaNum:
        s = 1 if sign == "+" else -1
        h = self.shift(i)
        if self.m % 2 == 0:
            return AlphaNum(Fraction(s * self.p ** h))
        return self.alpha() * (s * self.p ** h)

    def alpha_i_valuation(self, i: int) -> Fraction:
        h = self.shift(i)
        return Fraction(h) if self.m % 2 == 0 else h + self.alpha_valuation()

    def eps_i(self, i: int) -> int:
        """eps_i(p) for the component f_i: alpha_i^2 = -eps_i(p) p^{k_i - 1}."""
        return -1 if self.m % 2 == 0 else self.eps_p

    @property
    def alpha_is_rational(self) -> bool:
        return self.m % 2 == 0 or (self.k % 2 == 1 and self.eps_p == -1)

    @property
    def hypothesis(self) -> bool:
        return all(((self.m - 2 * i) * (self.k - 1)) % (self.p + 1) for i in range(self.rt))

    @property
    def dirichlet_power(self) -> Optional[int]:
        """r for m even (the factor eps_K^r), None for m odd."""
        return self.r if self.m % 2 == 0 else None

    def as_dict(self) -> dict:
        return {
            "p": self.p, "k": self.k, "m": self.m, "eps_p": self.eps_p,
            "alpha_choice": self.alpha_choice, "r": self.r, "r_tilde": self.rt,
            "weights": self.weights, "hypothesis": self.hypothesis,
        }


def build_context(p: int, k: int, m: int, eps_p: int = -1, alpha_choice=None) -> SymPowerContext:
    return SymPowerContext(p, k, m, eps_p, alpha_choice)


def d_pm(ctx_or_m) -> tuple:
    m = ctx_or_m.m if isinstance(ctx_or_m, SymPowerContext) else int(ctx_or_m)
    r = m // 2
    dp = r if m % 4 == 2 else r + 1
    dm = r if m % 4 == 0 else r + 1
    return dp, dm


# ---------------------------------------------------------------------------
# polygons


@dataclass(frozen=True)
class PolygonDescriptor:
    vertices: tuple  # ((x, y), ...) with exact y

    def __post_init__(self):
        xs = [x for x, _ in self.vertices]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise AssertionError("x must increase strictly")
        sl = self.slopes()
        if any(b < a for a, b in zip(sl, sl[1:])):
            raise AssertionError("slopes must be nondecreasing")

    def at(self, x: int) -> Fraction:
        for vx, vy in self.vertices:
            if vx == x:
                return Fraction(vy)
        raise DomainError(f"no vertex at x = {x}")

    def slopes(self) -> list:
        v = self.vertices
        return [Fraction(v[i + 1][1] - v[i][1], v[i + 1][0] - v[i][0]) for i in range(len(v) - 1)]

    def as_list(self) -> list:
        return [[x, str(Fraction(y))] for x, y in self.vertices]


def hodge_slopes(ctx: SymPowerContext) -> list:
    return [-(ctx.r - a) * (ctx.k - 1) for a in range(ctx.m + 1)]


def hodge_closed_form(ctx: SymPowerContext, a: int) -> Fraction:
    """P_H(a+1) = (k-1)(a+1)(a-2r)/2."""
    return Fraction((ctx.k - 1) * (a + 1) * (a - 2 * ctx.r), 2)


def hodge_polygon(ctx: SymPowerContext) -> PolygonDescriptor:
    ys = [Fraction(0)]
    for s in hodge_slopes(ctx):
        ys.append(ys[-1] + s)
    for a in range(ctx.m + 1):
        if ys[a + 1] != hodge_closed_form(ctx, a):
            raise AssertionError(f"Hodge closed form disagrees at a = {a}")
    return PolygonDescriptor(tuple(enumerate(ys)))


def newton_polygon(ctx: SymPowerContext) -> PolygonDescriptor:
    """Horizontal for m even; slope (k-1)/2 throughout for m odd."""
    slope = Fraction(0) if ctx.m % 2 == 0 else Fraction(ctx.k - 1, 2)
    return PolygonDescriptor(tuple((x, slope * x) for x in range(ctx.m + 2)))


def frobenius_eigenvalues(ctx: SymPowerContext) -> list:
    """Eigenvalues of phi on D_cris(V_m) as (token, valuation) pairs."""
    if ctx.m % 2 == 0:
        dp, dm = d_pm(ctx)
        return [("+1", Fraction(0))] * dp + [("-1", Fraction(0))] * dm
    v = ctx.alpha_valuation()
    return [("+alpha", v)] * ctx.rt + [("-alpha", v)] * ctx.rt


def frobenius_from_basis(ctx: SymPowerContext) -> list:
    """Diagonal of phi in the basis alpha^a alphabar^{m-a} (alpha alphabar)^{-r}
    of the symmetric power; alphabar = -alpha, so the entries are
    (-1)^{m-a} (alpha alphabar)^{-r} alpha^m."""
    out = []
    for a in range(ctx.m + 1):
        sign = (-1) ** (ctx.m - a)
        if ctx.m % 2 == 0:
            # alpha^m (alpha alphabar)^{-r} = (-1)^r
            s = sign * (-1) ** ctx.r
            out.append("+1" if s == 1 else "-1")
        else:
            # alpha^m / (alpha alphabar)^r = (-1)^r alpha
            s = sign * (-1) ** ctx.r
            out.append("+alpha" if s == 1 else "-alpha")
    return sorted(out)


def filtration_jumps(ctx: SymPowerContext) -> list:
    """(degree j(k-1), generator tag) for j = -r .. r-tilde."""
    out = []
    for j in range(-ctx.r, ctx.rt + 1):
        if ctx.m % 2 == 0:
            if j < 0:
                tag = f"v_{ctx.r + j}"
            elif j == 0:
                tag = "v"
            else:
                tag = f"v_{ctx.rt - j} + vbar_{ctx.rt - j}"
        else:
            if j <= 0:
                tag = f"v_{ctx.r + j}"
            else:
                tag = f"v_{ctx.rt - j} + vbar_{ctx.rt - j}"
        out.append((j * (ctx.k - 1), tag))
    return out


def tangent_dimension(ctx: SymPowerContext) -> int:
    dp, dm = d_pm(ctx)
    return dm if ctx.m % 4 == 0 else dp


@dataclass(frozen=True)
class HasseReport:
    closed_form: Fraction
    polygon_gap: Fraction

    @property
    def agree(self) -> bool:
        return self.closed_form == self.polygon_gap


def hasse_invariant(ctx: SymPowerContext) -> HasseReport:
    dp, dm = d_pm(ctx)
    closed = Fraction((ctx.k - 1) * dp * dm, 2)
    PN, PH = newton_polygon(ctx), hodge_polygon(ctx)
    gap = max(PN.at(d) - PH.at(d) for d in (dp, dm))
    return HasseReport(closed, gap)


def is_critical(ctx: SymPowerContext, theta_parity: int, n: int, j: int) -> bool:
    """(theta, j) in C_m; theta enters through its parity only (n is unused
    by the criterion but kept for the record)."""
    if ctx.m % 2:
        return 1 <= j <= ctx.k - 1
    if not (-(ctx.k - 1) + 1 <= j <= ctx.k - 1):
        return False
    sgn = 1 if j >= 1 else -1
    return theta_parity * (-1) ** j == sgn * (-1) ** ctx.r


def critical_js(ctx: SymPowerContext, theta_parity: int) -> list:
    lo = 1 if ctx.m % 2 else -(ctx.k - 1) + 1
    return [j for j in range(lo, ctx.k) if is_critical(ctx, theta_parity, 0, j)]


def weak_admissibility(ctx: SymPowerContext) -> bool:
    """Newton on or above Hodge at every vertex with equal endpoints."""
    PN, PH = newton_polygon(ctx), hodge_polygon(ctx)
    above = all(PN.at(x) >= PH.at(x) for x in range(ctx.m + 2))
    return above and PN.at(ctx.m + 1) == PH.at(ctx.m + 1)


def structure_report(ctx: SymPowerContext) -> dict:
    dp, dm = d_pm(ctx)
    h = hasse_invariant(ctx)
    return {
        "context": ctx.as_dict(),
        "d_plus": dp,
        "d_minus": dm,
        "alpha_i": {f"{i}{s}": str(ctx.alpha_i(i, s)) for i in range(ctx.rt) for s in "+-"},
        "hodge_polygon": hodge_polygon(ctx).as_list(),
        "newton_polygon": newton_polygon(ctx).as_list(),
        "frobenius_eigenvalues": [t for t, _ in frobenius_eigenvalues(ctx)],
        "filtration": [[deg, tag] for deg, tag in filtration_jumps(ctx)],
        "tangent_dimension": tangent_dimension(ctx),
        "hasse_invariant": {"closed_form": str(h.closed_form), "polygon_gap": str(h.polygon_gap), "agree": h.agree},
        "weakly_admissible": weak_admissibility(ctx),
        "critical_j": {"theta_even": critical_js(ctx, 1), "theta_odd": critical_js(ctx, -1)},
    }
