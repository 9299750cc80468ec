"""Exact p-adic scalars with absolute precision, Teichmüller lifts and
cyclotomic extension rings (Z/p^N)[X]/Phi_{p^c}(X).

A :class:`PadicScalar` stores ``p^val * unit`` known modulo ``p^prec``
(absolute precision).  The unit is a residue modulo ``p^(prec - val)``.
When nothing survives (``val >= prec``) the scalar is the exhausted-precision
zero, stored with ``val == prec`` and ``unit == 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import DomainError, PrecisionShortfall

Rational = Union[int, Fraction]


def vp(n: Rational, p: int) -> float:
    """Valuation of an exact rational; ``math.inf`` for zero."""
    if n == 0:
        return math.inf
    if isinstance(n, Fraction):
        return vp(n.numerator, p) - vp(n.denominator, p)
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class AtLeast:
    """Valuation report for a scalar that is zero at its precision."""

    bound: int

    def __str__(self) -> str:
        return f">= {self.bound}"


def _normalize(p: int, v: int, n: int, prec: int) -> "PadicScalar":
    if v >= prec:
        return PadicScalar(p, prec, 0, prec)
    n %= p ** (prec - v)
    if n == 0:
        return PadicScalar(p, prec, 0, prec)
    while n % p == 0:
        n //= p
        v += 1
    return PadicScalar(p, v, n % p ** (prec - v), prec)


@dataclass(frozen=True, slots=True)
class PadicScalar:
    p: int
    val: int
    unit: int
    prec: int

    # construction -----------------------------------------------------
    @staticmethod
    def from_int(n: int, p: int, prec: int) -> "PadicScalar":
        return _normalize(p, 0, n, prec)

    @staticmethod
    def from_fraction(q: Rational, p: int, prec: int) -> "PadicScalar":
        q = Fraction(q)
        if q == 0:
            return PadicScalar(p, prec, 0, prec)
        a, b = q.numerator, q.denominator
        v = 0
        while a % p == 0:
            a //= p
            v += 1
        while b % p == 0:
            b //= p
            v -= 1
        if v >= prec:
            return PadicScalar(p, prec, 0, prec)
        mod = p ** (prec - v)
        return PadicScalar(p, v, a * pow(b, -1, mod) % mod, prec)

    @staticmethod
    def zero(p: int, prec: int) -> "PadicScalar":
        return PadicScalar(p, prec, 0, prec)

    @staticmethod
    def one(p: int, prec: int) -> "PadicScalar":
        return _normalize(p, 0, 1, prec)

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.val >= self.prec

    def valuation(self) -> Union[int, AtLeast]:
        return AtLeast(self.prec) if self.is_zero() else self.val

    @property
    def relprec(self) -> int:
        return self.prec - self.val

    def to_fraction(self) -> Fraction:
        """A rational representative (exact for the stored digits)."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def lift(self) -> int:
        """Integer representative in [0, p^prec); requires val >= 0."""
        if self.is_zero():
            return 0
        if self.val < 0:
            raise DomainError("scalar is not integral")
        return self.unit * self.p ** self.val

    def reduce(self, prec: int) -> "PadicScalar":
        if prec >= self.prec:
            return self
        return _normalize(self.p, self.val, self.unit, prec)

    def eq(self, other) -> bool:
        """Equality at the joint precision."""
        return (self - other).is_zero()

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise DomainError("primes differ")
            return other
        if isinstance(other, (int, Fraction)):
            # exact operands carry enough digits never to limit the result
            v = vp(other, self.p)
            v = 0 if v == math.inf else v
            prec = max(self.prec, v + self.relprec) + 1
            return PadicScalar.from_fraction(other, self.p, prec)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        prec = min(self.prec, o.prec)
        m = min(self.val, o.val)
        if m >= prec:
            return PadicScalar(p, prec, 0, prec)
        n = self.unit * p ** (self.val - m) + o.unit * p ** (o.val - m)
        return _normalize(p, m, n, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicScalar(self.p, self.val, (-self.unit) % self.p ** self.relprec, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prec = min(self.val + o.prec, self.prec + o.val)
        return _normalize(self.p, self.val + o.val, self.unit * o.unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self.is_zero():
            raise PrecisionShortfall("cannot invert a scalar that is zero at precision")
        rel = self.relprec
        return PadicScalar(self.p, -self.val, pow(self.unit, -1, self.p ** rel), rel - self.val)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return PadicScalar.one(self.p, self.relprec)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def __repr__(self) -> str:
        if self.is_zero():
            return f"O({self.p}^{self.prec})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.prec})"


def valuation(x) -> Union[int, float, AtLeast]:
    """Valuation of a PadicScalar (AtLeast for exhausted precision) or of an
    exact rational (inf for zero, which is distinct from exhausted precision)."""
    if isinstance(x, PadicScalar):
        return x.valuation()
    if isinstance(x, CyclotomicScalar):
        return x.valuation()
    raise TypeError("valuation of an exact rational needs a prime; use vp(x, p)")


@lru_cache(maxsize=4096)
def teichmuller_int(a: int, p: int, N: int) -> int:
    mod = p ** N
    x = a % mod
    if x % p == 0:
        raise DomainError(f"{a} is divisible by {p}")
    while True:
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y


def teichmuller(a: int, p: int, N: int) -> PadicScalar:
    """The (p-1)-th root of unity congruent to ``a`` modulo p, to p^N."""
    return PadicScalar.from_int(teichmuller_int(a, p, N), p, N)


def one_unit_part(a: int, p: int, N: int) -> int:
    """<a> = a / omega(a) modulo p^N."""
    mod = p ** N
    return a * pow(teichmuller_int(a, p, N), -1, mod) % mod


def padic_log(x: PadicScalar) -> PadicScalar:
    """log_p of a principal unit via the Mercator series."""
    p = x.p
    y = x - 1
    vy = y.val if not y.is_zero() else y.prec
    if vy < 1:
        raise DomainError("padic_log needs x = 1 mod p")
    if y.is_zero():
        return y
    target = x.prec
    total = PadicScalar.zero(p, target)
    power = y
    k = 1
    while k * vy - math.log(k, p) <= target + 1:
        term = power * Fraction((-1) ** (k + 1), k)
        total = total + term
        power = power * y
        k += 1
    return total.reduce(target)


# ---------------------------------------------------------------------------
# cyclotomic extension rings


def cyclotomic_degree(p: int, level: int) -> int:
    return (p - 1) * p ** (level - 1)


@dataclass(frozen=True)
class CyclotomicScalar:
    """Residue in (Z/p^N)[X]/Phi_{p^level}(X) in the power basis 1, X, ..."""

    p: int
    level: int
    coeffs: tuple

    def __post_init__(self):
        if self.level < 1:
            raise DomainError("level must be >= 1")
        if len(self.coeffs) != cyclotomic_degree(self.p, self.level):
            raise DomainError("coefficient vector has the wrong length")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def prec(self) -> int:
        return min(c.prec for c in self.coeffs)

    @staticmethod
    def from_padic(x: PadicScalar, level: int = 1) -> "CyclotomicScalar":
        d = cyclotomic_degree(x.p, level)
        z = PadicScalar.zero(x.p, x.prec)
        return CyclotomicScalar(x.p, level, (x,) + (z,) * (d - 1))

    @staticmethod
    def from_ints(values: Sequence[int], p: int, level: int, prec: int, shift: int = 0) -> "CyclotomicScalar":
        """Build p^(-shift) * sum values[i] X^i (values already reduced)."""
        d = cyclotomic_degree(p, level)
        vals = list(values) + [0] * (d - len(values))
        return CyclotomicScalar(p, level, tuple(_normalize(p, -shift, v, prec) for v in vals))

    @staticmethod
    def constant(c: Rational, p: int, level: int, prec: int) -> "CyclotomicScalar":
        return CyclotomicScalar.from_padic(PadicScalar.from_fraction(c, p, prec), level)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def valuation(self) -> Union[int, AtLeast]:
        """Minimum coordinate valuation in the power basis."""
        vals = [c.val for c in self.coeffs if not c.is_zero()]
        if not vals:
            return AtLeast(self.prec)
        return min(vals)

    def eq(self, other) -> bool:
        return (self - other).is_zero()

    def is_constant(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def to_padic(self) -> PadicScalar:
        if not self.is_constant():
            raise DomainError("element does not lie in the base ring")
        c0 = self.coeffs[0]
        return c0.reduce(self.prec)

    def _coerce(self, other) -> "CyclotomicScalar":
        if isinstance(other, CyclotomicScalar):
            if other.p != self.p:
                raise DomainError("primes differ")
            if other.level != self.level:
                if other.level < self.level:
                    return other.embed(self.level)
                raise DomainError("cannot coerce down to a lower level")
            return other
        if isinstance(other, PadicScalar):
            return CyclotomicScalar.from_padic(other, self.level)
        if isinstance(other, (int, Fraction)):
            rel = max(c.relprec for c in self.coeffs)
            v = vp(other, self.p)
            v = 0 if v == math.inf else v
            prec = max(self.prec, v + rel) + 1
            return CyclotomicScalar.constant(other, self.p, self.level, prec)
        return NotImplemented

    def embed(self, level: int) -> "CyclotomicScalar":
        """Map into a higher level via X -> X^(p^(level - self.level))."""
        if level == self.level:
            return self
        step = self.p ** (level - self.level)
        d = cyclotomic_degree(self.p, level)
        z = PadicScalar.zero(self.p, self.prec)
        out = [z] * d
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        # indices i*step < (p-1)p^(self.level-1)*step = d, so no reduction needed
        return CyclotomicScalar(self.p, level, tuple(out))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.level > self.level:
            return self.embed(o.level) + o
        return CyclotomicScalar(self.p, self.level, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicScalar(self.p, self.level, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return CyclotomicScalar(self.p, self.level, tuple(c * other for c in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.level > self.level:
            return self.embed(o.level) * o
        d = self.degree
        prod = [None] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                t = a * b
                prod[i + j] = t if prod[i + j] is None else prod[i + j] + t
        return CyclotomicScalar(self.p, self.level, tuple(_reduce_phi(prod, self.p, self.level)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not supported in the extension ring")
        result = CyclotomicScalar.constant(1, self.p, self.level, max(c.prec for c in self.coeffs))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self) -> str:
        terms = [f"({c!r})*X^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return f"CyclotomicScalar(level={self.level}: " + (" + ".join(terms) or f"O({self.p}^{self.prec})") + ")"


def _reduce_phi(coeffs: list, p: int, level: int) -> list:
    """Reduce a coefficient list modulo Phi_{p^level}."""
    d = cyclotomic_degree(p, level)
    step = p ** (level - 1)
    coeffs = list(coeffs)
    for t in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[t]
        if c is None:
            continue
        # X^d = -(1 + X^step + ... + X^((p-2) step))
        base = t - d
        for i in range(p - 1):
            idx = base + i * step
            coeffs[idx] = -c if coeffs[idx] is None else coeffs[idx] - c
    return coeffs[:d]


def reduce_phi_ints(coeffs: list, p: int, level: int, mod: int) -> list:
    """Integer version of the reduction, entries taken modulo ``mod``."""
    d = cyclotomic_degree(p, level)
    step = p ** (level - 1)
    coeffs = list(coeffs)
    for t in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[t]
        if not c:
            continue
        base = t - d
        for i in range(p - 1):
            coeffs[base + i * step] -= c
    return [c % mod for c in coeffs[:d]] + [0] * max(0, d - len(coeffs))


def mul_ring_ints(a: list, b: list, p: int, level: int, mod: int) -> list:
    d = cyclotomic_degree(p, level)
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return reduce_phi_ints(prod, p, level, mod)


def primitive_root(p: int, c: int, N: int) -> CyclotomicScalar:
    """The class of X: a primitive p^c-th root of unity."""
    if c < 1:
        raise DomainError("level must be >= 1")
    d = cyclotomic_degree(p, c)
    vals = [0] * d
    if d > 1:
        vals[1] = 1
        return CyclotomicScalar.from_ints(vals, p, c, N)
    raise DomainError("degree-one extension cannot hold a primitive root")


def cyclotomic_value(x, p: int, m: int):
    """Phi_{p^m}(x) = sum_{i<p} x^(i p^(m-1)) for any ring element x."""
    y = x ** (p ** (m - 1))
    total = 1
    acc = 1
    for _ in range(p - 1):
        acc = acc * y
        total = acc + total
    return total


def ring_root_of_unity_power(p: int, level: int, exponent: int, N: int) -> CyclotomicScalar:
    """zeta^exponent where zeta = X is the primitive p^level-th root."""
    order = p ** level
    e = exponent % order
    d = cyclotomic_degree(p, level)
    vals = [0] * (2 * d)
    vals[e] = 1 if e < len(vals) else 0
    if e >= len(vals):
        raise AssertionError("unreachable")
    mod = p ** N
    return CyclotomicScalar.from_ints(reduce_phi_ints(vals[: max(e + 1, d)], p, level, mod), p, level, N)
