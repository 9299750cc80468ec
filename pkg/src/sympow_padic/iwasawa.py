"""Truncated arithmetic in E[Delta][[T]], T = gamma0 - 1.

Elements are stored branch by branch: branch ``a`` holds the power series
f_a(T) with h = sum_a e_a f_a(T), where e_a is the idempotent attached to
omega^a.  A character lambda with lambda|Delta = omega^a only sees f_a.

Every element carries a tail model describing the coefficients it does not
store (indices >= M):

* ``Poly(d)``: nothing beyond degree d, so twists and evaluations are exact.
* ``Growth(r, C)``: v(c_i) >= -r*log_p(max(i, 1)) - C for all i.  For
  elements of Lambda this is r = 0.

Precision lost to the unknown tail is charged explicitly wherever an
operation mixes coefficients across degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import ConfigMismatch, DomainError, IndeterminateError, PrecisionShortfall
from .padic import (
    CyclotomicScalar,
    PadicScalar,
    _normalize,
    Rational,
    cyclotomic_degree,
    mul_ring_ints,
    one_unit_part,
    teichmuller_int,
    vp,
)

_EPS = 1e-9


@dataclass(frozen=True)
class AlgebraConfig:
    p: int
    N: int
    M: int
    u: int = 0  # chi(gamma0); 0 selects 1 + p

    def __post_init__(self):
        if self.p < 3 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
            raise DomainError("p must be an odd prime")
        if self.N < 1 or self.M < 1:
            raise DomainError("N and M must be positive")
        if self.u == 0:
            object.__setattr__(self, "u", 1 + self.p)
        if self.u % self.p != 1 or self.u % (self.p * self.p) == 1:
            raise DomainError("chi(gamma0) must be 1 mod p and not 1 mod p^2")

    def with_(self, **kw) -> "AlgebraConfig":
        d = dict(p=self.p, N=self.N, M=self.M, u=self.u)
        d.update(kw)
        return AlgebraConfig(**d)

    # basic elements
    def scalar(self, c: Rational) -> "IwasawaElement":
        x = PadicScalar.from_fraction(c, self.p, self.N + max(0, -_v0(c, self.p)))
        z = PadicScalar.zero(self.p, x.prec)
        row = (x,) + (z,) * (self.M - 1)
        return IwasawaElement(self, (row,) * (self.p - 1), Poly(0))

    def one(self) -> "IwasawaElement":
        return self.scalar(1)

    def zero(self) -> "IwasawaElement":
        return self.scalar(0)

    def T(self) -> "IwasawaElement":
        return self.from_series([0, 1])

    def gamma0(self) -> "IwasawaElement":
        return self.from_series([1, 1])

    def delta(self, d: int) -> "IwasawaElement":
        """The element of Delta reducing to d mod p."""
        p = self.p
        rows = []
        for a in range(p - 1):
            w = teichmuller_int(d, p, self.N) ** a
            rows.append(_series_row([w], p, self.N, self.M))
        return IwasawaElement(self, tuple(rows), Poly(0))

    def from_series(self, coeffs: Sequence, branches: Optional[Iterable[int]] = None) -> "IwasawaElement":
        """The same power series on the listed branches (all by default), 0 elsewhere."""
        want = set(range(self.p - 1)) if branches is None else {b % (self.p - 1) for b in branches}
        row = _series_row(coeffs, self.p, self.N, self.M)
        zero = _series_row([], self.p, self.N, self.M)
        rows = tuple(row if a in want else zero for a in range(self.p - 1))
        return IwasawaElement(self, rows, Poly(len(coeffs) - 1) if len(coeffs) <= self.M else Growth(0.0, math.inf))

    def from_branches(self, table: dict, tail=None) -> "IwasawaElement":
        """Build from {a: coefficient list}; missing branches are zero."""
        rows = []
        deg = 0
        for a in range(self.p - 1):
            cs = table.get(a, [])
            deg = max(deg, len(cs) - 1)
            rows.append(_series_row(cs, self.p, self.N, self.M))
        if tail is None:
            tail = Poly(deg) if deg < self.M else Growth(0.0, math.inf)
        return IwasawaElement(self, tuple(rows), tail)


def _v0(c, p) -> int:
    v = vp(c, p)
    return 0 if v == math.inf else int(v)


def _series_row(coeffs: Sequence, p: int, N: int, M: int) -> tuple:
    out = []
    for i in range(M):
        c = coeffs[i] if i < len(coeffs) else 0
        if isinstance(c, PadicScalar):
            out.append(c)
        else:
            out.append(PadicScalar.from_fraction(c, p, N + max(0, -_v0(c, p)) if c else N))
    return tuple(out)


# ---------------------------------------------------------------------------
# tail models


@dataclass(frozen=True)
class Poly:
    degree: int


@dataclass(frozen=True)
class Growth:
    r: float
    C: float

    def bound(self, i: int, p: int) -> float:
        return -self.r * math.log(max(i, 1), p) - self.C


Tail = Union[Poly, Growth]
UNKNOWN_TAIL = Growth(0.0, math.inf)


def window_growth(rows: Sequence[Sequence[PadicScalar]], p: int, r: float) -> float:
    """Smallest C making the stored window satisfy the Growth(r, C) envelope."""
    C = -math.inf
    for row in rows:
        for i, c in enumerate(row):
            if c.is_zero():
                continue
            C = max(C, -c.val - r * math.log(max(i, 1), p))
    return C if C > -math.inf else 0.0


def _as_growth(h: "IwasawaElement") -> Growth:
    if isinstance(h.tail, Growth):
        return h.tail
    return Growth(0.0, window_growth(h.branches, h.config.p, 0.0))


def _tail_min(g: Growth, p: int, start: int, step: float, offset: int = 0) -> float:
    """min over i >= start of g.bound(i) + (i - offset) * step."""
    if g.C == math.inf:
        return -math.inf
    if step <= 0:
        return -math.inf if g.r > 0 else -g.C
    cands = {start}
    if g.r > 0:
        star = g.r / (step * math.log(p))
        if star > start:
            cands.update({math.floor(star), math.ceil(star)})
    return min(g.bound(i, p) + (i - offset) * step for i in cands)


def _floor(x: float) -> int:
    return math.floor(x + _EPS) if x > -math.inf else -(10 ** 9)


def _shift_constant(r: float, p: int, step: float) -> float:
    """Extra constant needed when a substitution T -> c + (unit)T mixes degrees."""
    if r <= 0 or step <= 0:
        return 0.0
    star = r / (step * math.log(p))
    if star <= 1:
        return 0.0
    return r * math.log(star, p) - (star - 1) * step


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class IwasawaElement:
    config: AlgebraConfig
    branches: tuple
    tail: Tail = field(default=UNKNOWN_TAIL)
    poles: tuple = ()  # per-branch flag: branch stores (g0-1)(g0-u) times the element

    def __post_init__(self):
        p = self.config.p
        if len(self.branches) != p - 1:
            raise DomainError("need one branch per power of omega")
        if any(len(b) != self.config.M for b in self.branches):
            raise DomainError("branch length differs from M")
        if not self.poles:
            object.__setattr__(self, "poles", (False,) * (p - 1))

    # inspection ---------------------------------------------------------
    @property
    def p(self) -> int:
        return self.config.p

    @property
    def has_pole(self) -> bool:
        return any(self.poles)

    def branch(self, a: int) -> tuple:
        return self.branches[a % (self.p - 1)]

    def coeff(self, a: int, n: int) -> PadicScalar:
        return self.branch(a)[n]

    def precision(self) -> int:
        return min(c.prec for row in self.branches for c in row)

    def min_valuation(self) -> Union[int, float]:
        vals = [c.val for row in self.branches for c in row if not c.is_zero()]
        return min(vals) if vals else math.inf

    def certified_valuation(self) -> int:
        """Largest v with every stored coefficient known to be 0 mod p^v
        (a coefficient that is zero at precision counts with its precision)."""
        return min(c.val for row in self.branches for c in row)

    def in_lambda(self) -> bool:
        return self.min_valuation() >= 0

    def is_zero(self) -> bool:
        return all(c.is_zero() for row in self.branches for c in row)

    def eq(self, other: "IwasawaElement") -> bool:
        return (self - other).is_zero()

    def residual_valuation(self, other: "IwasawaElement") -> Union[int, float]:
        return (self - other).min_valuation()

    def sigma_table(self) -> dict:
        """Coefficients c_sigma(T) of h = sum_sigma c_sigma sigma, keyed by residue mod p."""
        p, N = self.p, self.config.N
        inv = Fraction(1, p - 1)
        out = {}
        for d in range(1, p):
            w = teichmuller_int(pow(d, -1, p), p, N + 2)
            row = []
            for n in range(self.config.M):
                acc = None
                for a, br in enumerate(self.branches):
                    t = br[n] * (w ** a)
                    acc = t if acc is None else acc + t
                row.append(acc * inv)
            out[d] = tuple(row)
        return out

    @staticmethod
    def from_sigma_table(config: AlgebraConfig, table: dict, tail: Tail = UNKNOWN_TAIL) -> "IwasawaElement":
        p, N = config.p, config.N
        rows = []
        for a in range(p - 1):
            row = []
            for n in range(config.M):
                acc = PadicScalar.zero(p, N + 4)
                for d, coeffs in table.items():
                    c = coeffs[n] if n < len(coeffs) else 0
                    acc = acc + (PadicScalar.from_fraction(c, p, N + 4) if not isinstance(c, PadicScalar) else c) * (
                        teichmuller_int(d, p, N + 4) ** a
                    )
                row.append(acc)
            rows.append(tuple(row))
        return IwasawaElement(config, tuple(rows), tail)

    def with_rows(self, rows, tail=None, poles=None) -> "IwasawaElement":
        return IwasawaElement(self.config, tuple(tuple(r) for r in rows), self.tail if tail is None else tail,
                              self.poles if poles is None else poles)

    def reduce(self, prec: int) -> "IwasawaElement":
        return self.with_rows([[c.reduce(prec) for c in row] for row in self.branches])

    # ring structure -----------------------------------------------------
    def _check(self, other: "IwasawaElement"):
        if other.config != self.config:
            raise ConfigMismatch("elements live over different algebra configurations")
        if other.poles != self.poles:
            raise ConfigMismatch("pole bookkeeping differs; clear poles before adding")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            other = self.config.scalar(other) if not isinstance(other, PadicScalar) else _scalar_elt(self.config, other)
            other = other.with_rows(other.branches, poles=self.poles)
        self._check(other)
        rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.branches, other.branches)]
        return self.with_rows(rows, _sum_tail(self, other))

    __radd__ = __add__

    def __neg__(self):
        return self.with_rows([[-c for c in row] for row in self.branches])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "IwasawaElement":
        if isinstance(c, (int, Fraction)) and c != 0:
            rows = _scale_rows_exact(self.branches, Fraction(c), self.p)
        else:
            rows = [[x * c for x in row] for row in self.branches]
        tail = self.tail
        if isinstance(tail, Growth):
            v = c.val if isinstance(c, PadicScalar) else vp(c, self.p)
            if v == math.inf or (isinstance(c, PadicScalar) and c.is_zero()):
                tail = Poly(0)
            else:
                tail = Growth(tail.r, tail.C - v)
        return self.with_rows(rows, tail)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = __mul__

    def divide(self, other: "IwasawaElement") -> "IwasawaElement":
        """Branchwise series quotient; the divisor needs a nonzero constant term."""
        if other.config != self.config:
            raise ConfigMismatch("elements live over different algebra configurations")
        rows = []
        for f, g in zip(self.branches, other.branches):
            rows.append(_series_div(f, g))
        return IwasawaElement(self.config, tuple(rows), UNKNOWN_TAIL, self.poles)

    def __truediv__(self, other):
        if isinstance(other, IwasawaElement):
            return self.divide(other)
        if isinstance(other, PadicScalar):
            return self.scale(other.inverse())
        return self.scale(Fraction(1) / Fraction(other))

    def __repr__(self) -> str:
        return (f"IwasawaElement(p={self.p}, N={self.config.N}, M={self.config.M}, "
                f"tail={self.tail}, poles={self.poles})")


def _scalar_elt(config: AlgebraConfig, x: PadicScalar) -> IwasawaElement:
    z = PadicScalar.zero(config.p, x.prec)
    row = (x,) + (z,) * (config.M - 1)
    return IwasawaElement(config, (row,) * (config.p - 1), Poly(0))


def _sum_tail(h1: IwasawaElement, h2: IwasawaElement) -> Tail:
    if isinstance(h1.tail, Poly) and isinstance(h2.tail, Poly):
        return Poly(max(h1.tail.degree, h2.tail.degree))
    g1, g2 = _as_growth(h1), _as_growth(h2)
    return Growth(max(g1.r, g2.r), max(g1.C, g2.C))


def _kronecker(F: list, G: list, M: int) -> list:
    """Truncated product of nonnegative integer sequences via one big multiply."""
    top = max(max(F, default=0), max(G, default=0), 1)
    bits = 2 * top.bit_length() + max(len(F), len(G)).bit_length() + 1
    a = 0
    for x in reversed(F[:M]):
        a = (a << bits) | x
    b = 0
    for x in reversed(G[:M]):
        b = (b << bits) | x
    c = a * b
    mask = (1 << bits) - 1
    out = []
    for _ in range(M):
        out.append(c & mask)
        c >>= bits
    return out


def _series_mul(f: Sequence[PadicScalar], g: Sequence[PadicScalar], M: int) -> list:
    """f * g mod T^M.  Coefficient k is certified to
    min over i + j = k of min(prec f_i + v g_j, v f_i + prec g_j)."""
    import numpy as np

    p = f[0].p
    f, g = f[:M], g[:M]
    vf = [c.val for c in f]
    vg = [c.val for c in g]
    sf, sg = -min(vf), -min(vg)
    F = [0 if c.is_zero() else c.unit * p ** (c.val + sf) for c in f]
    G = [0 if c.is_zero() else c.unit * p ** (c.val + sg) for c in g]
    H = _kronecker(F, G, M)
    pf = np.array([c.prec for c in f], dtype=np.int64)
    pg = np.array([c.prec for c in g], dtype=np.int64)
    X = np.minimum(pf[:, None] + np.array(vg, dtype=np.int64)[None, :],
                   np.array(vf, dtype=np.int64)[:, None] + pg[None, :])
    # Y[i, k] = X[i, k - i]; column minima give the anti-diagonal minima
    n, m = X.shape
    big = int(X.max()) + 1
    Y = np.full((n, M), big, dtype=np.int64)
    for i in range(n):
        w = min(m, M - i)
        if w > 0:
            Y[i, i:i + w] = X[i, :w]
    precs = Y.min(axis=0).tolist()
    out = []
    for k in range(M):
        prec = precs[k]
        out.append(_normalize(p, -(sf + sg), H[k], prec))
    return out


def _series_div_naive(f: Sequence[PadicScalar], g: Sequence[PadicScalar]) -> list:
    M = len(f)
    if g[0].is_zero():
        raise IndeterminateError("divisor has a vanishing constant term at working precision")
    inv0 = g[0].inverse()
    q = []
    for k in range(M):
        acc = f[k]
        for i in range(1, k + 1):
            acc = acc - g[i] * q[k - i]
        q.append(acc * inv0)
    return q


def _series_inverse(g: Sequence[PadicScalar], M: int) -> list:
    """1/g mod T^M by Newton steps h <- h (2 - g h).

    Iterates are cut to exact zeros beyond the current T-adic order, so the
    tracked precision bounds the p-adic error of the whole computation.
    """
    if g[0].is_zero():
        raise IndeterminateError("divisor has a vanishing constant term at working precision")
    p = g[0].p
    h = [g[0].inverse()]
    k = 1
    while k < M:
        k = min(2 * k, M)
        big = max(c.prec for c in h) + 1
        hk = h + [PadicScalar.zero(p, big)] * (k - len(h))
        gh = _series_mul(list(g[:k]), hk, k)
        two = [PadicScalar.from_fraction(2, p, big) - gh[0]] + [-c for c in gh[1:]]
        h = _series_mul(hk, two, k)
    return h[:M]


def _series_div(f: Sequence[PadicScalar], g: Sequence[PadicScalar]) -> list:
    M = len(f)
    return _series_mul(list(f), _series_inverse(g, M), M)


def _scale_rows_exact(branches, c: Fraction, p: int) -> list:
    """Multiply by an exact nonzero rational: valuations and precisions shift by v(c)."""
    v = vp(c, p)
    cu = c / Fraction(p) ** v
    rel = max((x.relprec for row in branches for x in row), default=1) + 1
    mod = p ** rel
    cu_int = cu.numerator * pow(cu.denominator, -1, mod) % mod
    rows = []
    for row in branches:
        new = []
        for x in row:
            if x.is_zero():
                new.append(PadicScalar(p, x.prec + v, 0, x.prec + v))
            else:
                r = x.relprec
                new.append(PadicScalar(p, x.val + v, x.unit * cu_int % p ** r, x.prec + v))
        rows.append(new)
    return rows


def multiply(h1: IwasawaElement, h2: IwasawaElement) -> IwasawaElement:
    if h1.config != h2.config:
        raise ConfigMismatch("elements live over different algebra configurations")
    if h1.has_pole and h2.has_pole:
        raise DomainError("product of two pole elements has a double pole, not representable")
    M = h1.config.M
    rows = [_series_mul(f, g, M) for f, g in zip(h1.branches, h2.branches)]
    if isinstance(h1.tail, Poly) and isinstance(h2.tail, Poly) and h1.tail.degree + h2.tail.degree < M:
        tail: Tail = Poly(h1.tail.degree + h2.tail.degree)
    else:
        g1, g2 = _as_growth(h1), _as_growth(h2)
        tail = Growth(g1.r + g2.r, g1.C + g2.C)
    poles = tuple(a or b for a, b in zip(h1.poles, h2.poles))
    return IwasawaElement(h1.config, tuple(tuple(r) for r in rows), tail, poles)


# ---------------------------------------------------------------------------
# substitutions


def _taylor_shift(row: list, S: Sequence[Rational], p: int, M: int, big: int) -> list:
    """f(c + lam T) mod T^M by synthetic division on integers.

    Coefficient k is known to min over n >= k of prec_n + (n - k) v(c) + k v(lam).
    """
    c = Fraction(S[0])
    lam = Fraction(S[1]) if len(S) > 1 else Fraction(0)
    n = len(row)
    shift = -min(x.val for x in row)
    mod = p ** (big + shift)

    def as_int(q: Fraction) -> int:
        return q.numerator * pow(q.denominator, -1, mod) % mod

    ci, li = as_int(c), as_int(lam)
    a = [0 if x.is_zero() else x.unit * p ** (x.val + shift) % mod for x in row]
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] = (a[j] + ci * a[j + 1]) % mod
    step = vp(c, p) if c else big
    vlam = vp(lam, p) if lam else big
    precs = [0] * n
    run = big
    for k in range(n - 1, -1, -1):
        run = min(row[k].prec, run + step)
        precs[k] = run
    out = []
    lk = 1
    for k in range(M):
        if k < n:
            prec = min(precs[k] + k * vlam, big)
            out.append(_normalize(p, -shift, a[k] * lk % mod, prec))
        else:
            out.append(PadicScalar.zero(p, big))
        lk = lk * li % mod
    return out


def compose_row(row: Sequence[PadicScalar], S: Sequence[Rational], tail: Tail, p: int, M: int) -> list:
    """f(S(T)) mod T^M for S with S(0) in pZ_p and integral coefficients.

    Coefficient k additionally loses whatever the unstored tail could
    contribute: min_{i >= M} bound(i) + (i - k) * v(S(0)).
    """
    s0 = S[0] if S else 0
    step = vp(s0, p)
    if step < 1:
        raise DomainError("substitution must send T into the maximal ideal")
    vals = [c.val for c in row if not c.is_zero()]
    big = max(c.prec for c in row) + 2 * max(0, -min(vals, default=0)) + 20
    S_row = [PadicScalar.from_fraction(c, p, big) for c in list(S)[:M]]
    S_row += [PadicScalar.zero(p, big)] * (M - len(S_row))
    n_terms = M if not isinstance(tail, Poly) else min(M, tail.degree + 1)
    if len(S) <= 2:
        acc = _taylor_shift(list(row[:n_terms]), S, p, M, big)
    else:
        acc = [PadicScalar.zero(p, big)] * M
        for i in range(n_terms - 1, -1, -1):
            acc = _series_mul(acc, S_row, M)
            acc[0] = acc[0] + row[i]
    if isinstance(tail, Poly) and tail.degree < M:
        return acc
    g = tail if isinstance(tail, Growth) else Growth(0.0, math.inf)
    st = step if step != math.inf else 10 ** 6
    out = []
    for k, c in enumerate(acc):
        cap = _floor(_tail_min(g, p, M, st, offset=k))
        out.append(c.reduce(cap) if cap < c.prec else c)
    return out


def _substituted_tail(h: IwasawaElement, step: float) -> Tail:
    if isinstance(h.tail, Poly):
        return h.tail
    g = h.tail
    return Growth(g.r, g.C + _shift_constant(g.r, h.p, step))


def twist(h: IwasawaElement, n: int) -> IwasawaElement:
    """Tw_n: sigma -> chi(sigma)^n sigma.

    On Gamma this is T -> u^n (1 + T) - 1; on Delta branch a moves to a - n.
    """
    if n == 0:
        return h
    cfg = h.config
    p, M = cfg.p, cfg.M
    c = Fraction(cfg.u) ** n - 1
    lead = Fraction(cfg.u) ** n
    S = [c, lead]
    step = vp(c, p)
    rows = [None] * (p - 1)
    poles = [False] * (p - 1)
    for a in range(p - 1):
        new = compose_row(h.branches[a], S, h.tail, p, M)
        rows[(a - n) % (p - 1)] = tuple(new)
        poles[(a - n) % (p - 1)] = h.poles[a]
    if h.has_pole and n != 0:
        raise DomainError("twisting moves the declared pole divisor; twist the numerator instead")
    return IwasawaElement(cfg, tuple(rows), _substituted_tail(h, step), tuple(poles))


def involution(h: IwasawaElement) -> IwasawaElement:
    """sigma -> sigma^{-1}: branch a moves to -a, T -> (1+T)^{-1} - 1."""
    cfg = h.config
    p, M = cfg.p, cfg.M
    S = [0] + [(-1) ** k for k in range(1, M)]
    rows = [None] * (p - 1)
    for a in range(p - 1):
        rows[(-a) % (p - 1)] = tuple(_compose_exact(h.branches[a], S, M))
    if h.has_pole:
        raise DomainError("the involution does not preserve the declared pole divisor")
    tail = _as_growth(h) if not isinstance(h.tail, Poly) or h.tail.degree > 0 else h.tail
    return IwasawaElement(cfg, tuple(rows), tail)


def _compose_exact(row: Sequence[PadicScalar], S: Sequence[int], M: int) -> list:
    """f(S) mod T^M when S(0) = 0: only stored coefficients contribute."""
    p = row[0].p
    big = max(c.prec for c in row) + 10
    S_row = [PadicScalar.from_int(c, p, big) if c else PadicScalar.zero(p, big) for c in S[:M]]
    S_row += [PadicScalar.zero(p, big)] * (M - len(S_row))
    acc = [PadicScalar.zero(p, big)] * M
    for i in range(M - 1, -1, -1):
        acc = _series_mul(acc, S_row, M)
        acc[0] = acc[0] + row[i]
    return acc


def project(h: IwasawaElement, a: int) -> IwasawaElement:
    """pi_{omega^a} h: keep branch a, zero elsewhere."""
    a %= h.p - 1
    rows = []
    for b, row in enumerate(h.branches):
        if b == a:
            rows.append(row)
        else:
            rows.append(tuple(PadicScalar.zero(h.p, c.prec) for c in row))
    return IwasawaElement(h.config, tuple(rows), h.tail, h.poles)


# ---------------------------------------------------------------------------
# characters and evaluation


@dataclass(frozen=True)
class PadicCharacter:
    """theta * chi^j with theta = omega^b times a wild character.

    ``c`` is the conductor exponent of the wild part (0 when trivial, else
    >= 2); theta(gamma0) = zeta^s with zeta a primitive p^(c-1)-th root of
    unity and s prime to p.
    """

    b: int = 0
    c: int = 0
    s: int = 0
    j: int = 0

    def __post_init__(self):
        if self.c == 1 or self.c < 0:
            raise DomainError("wild conductor exponent must be 0 or >= 2")
        if self.c == 0 and self.s != 0:
            raise DomainError("selector must be 0 for a tame character")

    def validate(self, p: int) -> "PadicCharacter":
        if self.c >= 2 and self.s % p == 0:
            raise DomainError("selector must be prime to p")
        return PadicCharacter(self.b % (p - 1), self.c, self.s % p ** max(self.c - 1, 0) if self.c else 0, self.j)

    @property
    def level(self) -> int:
        """Extension level holding theta(gamma0)."""
        return max(1, self.c - 1)

    def conductor_exponent(self) -> int:
        if self.c >= 2:
            return self.c
        return 1 if self.b else 0

    def theta_trivial(self) -> bool:
        return self.c == 0 and self.b == 0

    def theta_parity(self) -> int:
        return -1 if self.b % 2 else 1

    def parity(self) -> int:
        """lambda(-1) = theta(-1) * (-1)^j."""
        return self.theta_parity() * (-1 if self.j % 2 else 1)

    def branch_index(self, p: int) -> int:
        return (self.b + self.j) % (p - 1)

    def theta_at_p(self) -> int:
        return 1 if self.theta_trivial() else 0

    def inverse(self) -> "PadicCharacter":
        return PadicCharacter(-self.b, self.c, -self.s if self.c else 0, -self.j)

    def theta(self) -> "PadicCharacter":
        return PadicCharacter(self.b, self.c, self.s, 0)

    def times_chi(self, n: int) -> "PadicCharacter":
        return PadicCharacter(self.b, self.c, self.s, self.j + n)

    def wild_exponent(self, a: int, p: int, u: int) -> int:
        """e with <a> = u^e modulo p^c (only meaningful when c >= 2)."""
        if self.c < 2:
            return 0
        mod = p ** self.c
        target = one_unit_part(a, p, self.c)
        x = 1
        for e in range(p ** (self.c - 1)):
            if x == target:
                return e
            x = x * u % mod
        raise DomainError("u does not generate 1 + pZ_p modulo p^c")

    def theta_value(self, a: int, p: int, N: int, u: int) -> CyclotomicScalar:
        """theta(a) for an integer a prime to p, in the level ring."""
        L = self.level
        w = teichmuller_int(a, p, N) ** (self.b % (p - 1)) % p ** N
        if self.c < 2:
            return CyclotomicScalar.from_ints([w], p, L, N)
        e = self.wild_exponent(a, p, u) * self.s % p ** (self.c - 1)
        vals = ring_power_ints(e, p, L, p ** N)
        return CyclotomicScalar.from_ints([v * w for v in vals], p, L, N)


def ring_power_ints(e: int, p: int, L: int, mod: int) -> list:
    """Integer coordinates of X^e in the level-L ring."""
    d = cyclotomic_degree(p, L)
    e %= p ** L
    vals = [0] * max(d, e + 1)
    vals[e] = 1
    step = p ** (L - 1)
    for t in range(len(vals) - 1, d - 1, -1):
        c = vals[t]
        if c:
            for i in range(p - 1):
                vals[t - d + i * step] -= c
    return [v % mod for v in vals[:d]]


def gamma_point(lam: PadicCharacter, p: int, u: int, W: int) -> tuple:
    """Integer coordinates of lambda(gamma0) - 1 plus its valuation as (t, e)."""
    L = lam.level
    d = cyclotomic_degree(p, L)
    mod = p ** W
    uj = pow(u, lam.j, mod) if lam.j >= 0 else pow(pow(u, -1, mod), -lam.j, mod)
    if lam.c >= 2:
        z = ring_power_ints(lam.s, p, L, mod)
        x = [(v * uj) % mod for v in z]
        x[0] = (x[0] - 1) % mod
        return x, (1, d)
    x = [0] * d
    x[0] = (uj - 1) % mod
    if lam.j == 0:
        return x, None  # x = 0 exactly
    return x, (1 + int(vp(lam.j, p)), 1)


def evaluate_row(row: Sequence[PadicScalar], tail: Tail, lam: PadicCharacter, config: AlgebraConfig) -> CyclotomicScalar:
    """lambda applied to a single branch series (the Delta part already chosen)."""
    p, u = config.p, config.u
    L = lam.level
    M = len(row)
    probe, val = gamma_point(lam, p, u, 4)
    if val is None:
        c0 = row[0]
        return CyclotomicScalar.from_padic(c0, L)
    t, e = val
    P = min(c.prec + (n * t) // e for n, c in enumerate(row))
    if not (isinstance(tail, Poly) and tail.degree < M):
        g = tail if isinstance(tail, Growth) else UNKNOWN_TAIL
        P = min(P, _floor(_tail_min(g, p, M, t / e)))
    vals = [c.val for c in row if not c.is_zero()]
    s = max(0, -min(vals)) if vals else 0
    if P + s <= 0:
        raise PrecisionShortfall("evaluation has no significant digits", needed=1, available=P)
    W = P + s
    mod = p ** W
    x, _ = gamma_point(lam, p, u, W)
    d = cyclotomic_degree(p, L)
    acc = [0] * d
    for n in range(M - 1, -1, -1):
        acc = mul_ring_ints(acc, x, p, L, mod)
        c = row[n]
        if not c.is_zero() and c.val + s < W:
            acc[0] = (acc[0] + c.unit * p ** (c.val + s)) % mod
    return CyclotomicScalar.from_ints(acc, p, L, P, shift=s)


def _pole_denominator(lam: PadicCharacter, config: AlgebraConfig, W: int):
    """(lambda(gamma0) - 1)(lambda(gamma0) - u) as integer ring coordinates mod p^W."""
    p, u = config.p, config.u
    L = lam.level
    d = cyclotomic_degree(p, L)
    x, _ = gamma_point(lam, p, u, W)
    y = list(x)
    y[0] = (y[0] + 1 - u) % p ** W
    return mul_ring_ints(x, y, p, L, p ** W)


def ring_divide(num: CyclotomicScalar, den_ints: list, W: int) -> CyclotomicScalar:
    """num / den for an exactly known denominator given by integer coordinates.

    Uses den^{-1} = (product of the other Galois conjugates) / norm.
    """
    p, L = num.p, num.level
    d = cyclotomic_degree(p, L)
    big = p ** (W + 4 * d + 40)
    if not any(den_ints[1:]):
        dv = den_ints[0]
        if dv % p ** W == 0:
            raise DomainError("evaluation point is a pole")
        return num * PadicScalar.from_int(dv, p, W).inverse()
    order = p ** L
    adj = [1] + [0] * (d - 1)
    for k in range(2, order):
        if k % p == 0:
            continue
        conj = _galois_conj(den_ints, k, p, L, big)
        adj = mul_ring_ints(adj, conj, p, L, big)
    norm_vec = mul_ring_ints(adj, den_ints, p, L, big)
    if any(norm_vec[1:]):
        raise AssertionError("norm computation failed to land in the base ring")
    nrm = norm_vec[0]
    if nrm >= big // 2:
        nrm -= big
    if nrm == 0:
        raise DomainError("evaluation point is a pole")
    vN = int(vp(nrm, p))
    v_adj = vN - Fraction(vN, d)
    gain = math.floor(v_adj)
    P = num.prec
    prod = num * CyclotomicScalar.from_ints(adj, p, L, P + vN + 20)
    prec_after = P + gain - vN
    coeffs = []
    for c in prod.coeffs:
        q = c / PadicScalar.from_int(nrm, p, P + vN + 20)
        coeffs.append(q.reduce(prec_after))
    return CyclotomicScalar(p, L, tuple(coeffs))


def ring_inverse(x: CyclotomicScalar) -> CyclotomicScalar:
    """1/x in the level ring.  The denominator representative is exact only
    to the relative precision of x, so the result gives up a further
    -v(1/x) digits (bounded through its smallest coordinate valuation)."""
    nz = [c for c in x.coeffs if not c.is_zero()]
    if not nz:
        raise IndeterminateError("inverse of an element that is zero at working precision")
    p, L = x.p, x.level
    v = min(c.val for c in nz)
    R = x.prec - v
    W = R + 10
    den = [(c.unit * p ** (c.val - v)) % p ** W if not c.is_zero() else 0 for c in x.coeffs]
    one = CyclotomicScalar.constant(1, p, L, R)
    y = ring_divide(one, den, W)
    w = max(0, -min((c.val for c in y.coeffs if not c.is_zero()), default=0))
    y = CyclotomicScalar(p, L, tuple(c.reduce(y.prec - w) for c in y.coeffs))
    return y * PadicScalar.from_fraction(Fraction(1, p ** v) if v >= 0 else Fraction(p ** -v), p, y.prec + abs(v) + 2)


def _galois_conj(vals: list, k: int, p: int, L: int, mod: int) -> list:
    """Apply X -> X^k to integer coordinates."""
    d = cyclotomic_degree(p, L)
    order = p ** L
    out = [0] * d
    for i, c in enumerate(vals):
        if c:
            xi = ring_power_ints(i * k % order, p, L, mod)
            out = [(o + c * t) % mod for o, t in zip(out, xi)]
    return out


def _removable_value(row, tail, lam: PadicCharacter, cfg: AlgebraConfig) -> CyclotomicScalar:
    """Value of numerator / ((g0 - 1)(g0 - u)) where one factor vanishes."""
    p, u = cfg.p, cfg.u
    x0 = Fraction(u) ** lam.j - 1
    q, rem, qtail = divide_linear(row, tail, x0, p)
    if not rem.is_zero():
        raise DomainError("evaluation point is a genuine pole")
    val = evaluate_row(tuple(q), qtail, lam, cfg).to_padic()
    other = x0 if lam.j == 1 else x0 + 1 - u  # the non-vanishing factor
    return CyclotomicScalar.from_padic(val / other, lam.level)


def evaluate(h: IwasawaElement, lam: PadicCharacter, prec: Optional[int] = None) -> CyclotomicScalar:
    """lambda(h) in the ring of level max(1, c - 1).

    The reported precision already includes the loss from truncation at T^M.
    """
    cfg = h.config
    lam = lam.validate(cfg.p)
    a = lam.branch_index(cfg.p)
    if h.poles[a] and lam.c == 0 and lam.j in (0, 1):
        val = _removable_value(h.branches[a], h.tail, lam, cfg)
    else:
        val = evaluate_row(h.branches[a], h.tail, lam, cfg)
        if h.poles[a]:
            den = _pole_denominator(lam, cfg, val.prec + 10)
            val = ring_divide(val, den, val.prec + 10)
    if prec is not None and val.prec < prec:
        raise PrecisionShortfall(
            f"evaluation reaches precision {val.prec}, {prec} requested; raise M or N",
            needed=prec, available=val.prec)
    return val


def divide_linear(row: Sequence[PadicScalar], tail: Tail, c: Rational, p: int):
    """Synthetic division of a branch series by (T - c), c in pZ_p.

    Returns (quotient row of length len(row) - 1, remainder f(c), quotient
    tail).  Both carry the precision the unstored tail can spoil.
    """
    n = len(row)
    step = vp(c, p) if c != 0 else math.inf
    exact_poly = isinstance(tail, Poly) and tail.degree < n
    g = tail if isinstance(tail, Growth) else UNKNOWN_TAIL
    if c == 0:
        rem = row[0]
        q = list(row[1:])
    else:
        rem = row[-1]
        for x in reversed(row[:-1]):
            rem = rem * c + x
        q = [None] * (n - 1)
        acc = row[n - 1]
        q[n - 2] = acc
        for k in range(n - 3, -1, -1):
            acc = acc * c + row[k + 1]
            q[k] = acc
        if not exact_poly:
            rem = rem.reduce(_floor(_tail_min(g, p, n, step)))
            q = [x.reduce(_floor(_tail_min(g, p, n, step, offset=k + 1))) for k, x in enumerate(q)]
    if isinstance(tail, Poly):
        qtail: Tail = Poly(max(tail.degree - 1, 0))
    else:
        extra = g.r * math.log(2, p) + _shift_constant(g.r, p, step if step != math.inf else 1.0)
        qtail = Growth(g.r, g.C + extra)
    return q, rem, qtail


def order_at(h: IwasawaElement, a: int, j: int) -> int:
    """Order of vanishing of branch a at gamma0 = u^j (negative for a pole)."""
    cfg = h.config
    p = cfg.p
    row = list(h.branch(a))
    tail = h.tail
    if all(c.is_zero() for c in row):
        raise IndeterminateError("branch is zero at working precision")
    c = Fraction(cfg.u) ** j - 1
    order = 0
    while True:
        if not row or all(x.is_zero() for x in row):
            raise IndeterminateError("branch became indistinguishable from zero during division")
        q, rem, qtail = divide_linear(row, tail, c, p)
        if not rem.is_zero():
            break
        if rem.prec <= 0:
            raise IndeterminateError("remainder has no significant digits")
        order += 1
        row, tail = q, qtail
    if h.poles[a % (p - 1)] and j in (0, 1):
        order -= 1
    return order
