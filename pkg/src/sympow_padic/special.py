"""Plus/minus logarithms, p-adic logarithm factors and the Coleman-image
elements, with the checks that tie them together."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import ConvergenceError, DomainError, IndeterminateError, PrecisionShortfall
from .iwasawa import (
    AlgebraConfig,
    Growth,
    IwasawaElement,
    PadicCharacter,
    Poly,
    evaluate,
    multiply,
    twist,
)
from .padic import CyclotomicScalar, PadicScalar, _normalize, padic_log, vp


def _phi_factor_ints(x: int, m: int, p: int, M: int, mod: int) -> list:
    """Phi_{p^m}(x(1+T)) mod T^M with coefficients reduced mod ``mod``."""
    step = p ** (m - 1)
    out = [0] * M
    for i in range(p):
        K = i * step
        xk = pow(x, K, mod)
        b = 1
        for t in range(min(M, K + 1)):
            out[t] += xk * b
            b = b * (K - t) // (t + 1)
    return [o % mod for o in out]


def _mul_trunc(f: list, g: list, M: int, mod: int) -> list:
    out = [0] * M
    for i, a in enumerate(f):
        if a:
            for j in range(M - i):
                out[i + j] += a * g[j]
    return [o % mod for o in out]


def _vmin(vals: list, p: int, cap: int) -> int:
    v = cap
    for c in vals:
        if c:
            v = min(v, int(vp(c, p)))
    return v


@dataclass(frozen=True)
class LogInfo:
    sign: str
    b: int
    shift: int
    stabilization: tuple  # per a: last cyclotomic index that still changed the product
    precision: int


def _sign_indices(sign: str):
    if sign not in ("+", "-"):
        raise DomainError("sign must be '+' or '-'")
    start = 2 if sign == "+" else 1
    m = start
    while True:
        yield m
        m += 2


@lru_cache(maxsize=256)
def _pollack_log_cached(sign: str, b: int, config: AlgebraConfig, shift: int, n_max: int):
    p, N, M, u = config.p, config.N, config.M, config.u
    if b < 0:
        raise DomainError("b must be nonnegative")
    guard = 2 * b * (math.ceil(math.log(max(M, 2), p)) + 2) + 8
    while True:
        W = N + guard
        mod = p ** W
        P = [1] + [0] * (M - 1)
        K, Wp = 0, W
        stab = []
        for a in range(1, b + 1):
            x = pow(u, shift - a, mod)
            last = None
            for count, m in enumerate(_sign_indices(sign)):
                if count >= n_max:
                    raise ConvergenceError(
                        f"log{sign}_{b} did not stabilise within {n_max} factors", residual=last)
                F = _phi_factor_ints(x, m, p, M, mod)
                g = _vmin(F, p, W)
                Fs = [c // p ** g for c in F]
                newWp = min(Wp, W - g)
                newP = _mul_trunc(P, Fs, M, p ** newWp)
                newK = K + 1 - g
                h = _vmin(newP, p, newWp)
                if h:
                    newP = [c // p ** h for c in newP]
                    newWp -= h
                    newK -= h
                # compare old and new element modulo p^N
                Ks = max(K, newK)
                diff = [(o * p ** (Ks - K) - n * p ** (Ks - newK)) for o, n in zip(P, newP)]
                cmp_mod = p ** (N + Ks)
                changed = any(d % cmp_mod for d in diff)
                last = min((int(vp(d, p)) - Ks for d in diff if d % cmp_mod), default=None)
                P, K, Wp = newP, newK, newWp
                if not changed:
                    stab.append(m - 2)
                    break
        if Wp - K >= N:
            break
        guard *= 2
    rows = tuple(_normalize(p, -K, c, N) for c in P)
    element = IwasawaElement(config, (rows,) * (p - 1), Growth(b / 2, float(b)) if b else Poly(0))
    return element, LogInfo(sign, b, shift, tuple(stab), N)


def pollack_log(sign: str, b: int, config: AlgebraConfig, shift: int = 0, n_max: int = 200) -> IwasawaElement:
    """log^+_b = prod_{a<=b} prod_n Phi_{p^{2n}}(u^{-a} g0)/p, log^- with odd indices.

    ``shift`` returns Tw_shift of the product, built exactly by moving the
    exponent of u rather than by substituting into a truncated series.
    """
    return _pollack_log_cached(sign, b, config, shift, n_max)[0]


def pollack_log_info(sign: str, b: int, config: AlgebraConfig, shift: int = 0, n_max: int = 200) -> LogInfo:
    return _pollack_log_cached(sign, b, config, shift, n_max)[1]


def cyclotomic_factor(m: int, a: int, config: AlgebraConfig) -> IwasawaElement:
    """Phi_{p^m}(u^{-a} g0) / p on every branch."""
    p, N, M = config.p, config.N, config.M
    mod = p ** (N + 1)
    F = _phi_factor_ints(pow(config.u, -a, mod), m, p, M, mod)
    row = tuple(_normalize(p, -1, c, N) for c in F)
    deg = (p - 1) * p ** (m - 1)
    tail = Poly(deg) if deg < M else Growth(0.0, 1.0)
    return IwasawaElement(config, (row,) * (p - 1), tail)


def growth_check(elt: IwasawaElement, b: float, branch: int = 0) -> dict:
    """Advisory check of |c_n| <= C n^{b/2}.

    C is fitted on the first half of the window and then tested on the rest.
    """
    p = elt.p
    row = elt.branch(branch)
    M = len(row)
    half = max(2, M // 2)

    def excess(n, c):
        if c.is_zero():
            return -math.inf
        return -c.val - (b / 2) * math.log(max(n, 1), p)

    C = max(excess(n, c) for n, c in enumerate(row[:half]))
    worst = max(excess(n, c) for n, c in enumerate(row))
    return {"fitted_C": C, "window_max": worst, "ok": worst <= C + 1e-9, "rigorous_ok": worst <= b + 1e-9}


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroVerdict:
    zero: bool
    floor: int
    value: Optional[CyclotomicScalar] = None
    valuation: Optional[int] = None


def verify_zero(elt: IwasawaElement, lam: PadicCharacter, min_floor: int = 1) -> ZeroVerdict:
    try:
        val = evaluate(elt, lam)
    except PrecisionShortfall as exc:
        raise IndeterminateError(f"cannot decide vanishing: {exc}") from exc
    P = val.prec
    if P < min_floor:
        raise IndeterminateError(f"precision floor {P} is below the requested {min_floor}")
    if val.is_zero():
        return ZeroVerdict(True, P)
    return ZeroVerdict(False, P, val, val.valuation())


def padic_log_factor(j: int, config: AlgebraConfig) -> IwasawaElement:
    """log_p(u^{-j} g0) = -j log_p(u) + log(1 + T)."""
    p, N, M = config.p, config.N, config.M
    c0 = padic_log(PadicScalar.from_int(config.u, p, N + 2)) * (-j)
    coeffs = [c0.reduce(N)]
    for n in range(1, M):
        coeffs.append(PadicScalar.from_fraction(Fraction((-1) ** (n + 1), n), p, N))
    row = tuple(coeffs)
    return IwasawaElement(config, (row,) * (p - 1), Growth(1.0, 0.0))


def linear_factor(j: int, config: AlgebraConfig) -> IwasawaElement:
    """u^{-j} g0 - 1 as an exact polynomial."""
    uj = Fraction(config.u) ** (-j)
    return config.from_series([uj - 1, uj])


@dataclass
class DetIdentityReport:
    p: int
    k: int
    M: int
    N: int
    slack: int
    corrected_valuation: float
    literal_valuation: float
    lhs_precision: int
    rhs_precision: int

    @property
    def passed(self) -> bool:
        return self.corrected_valuation >= self.N - self.slack

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def det_slack(k: int, config: AlgebraConfig) -> int:
    """Digits that division by p inside log^+, log^- and 1/n may cost on T^M."""
    L = math.floor(math.log(max(config.M - 1, 1), config.p))
    return (k - 1) * (L + 2)


def det_identity_check(k: int, config: AlgebraConfig) -> DetIdentityReport:
    """Compare prod_j log_p(u^{-j} g0) with log^+ log^- prod_j (u^{-j} g0 - 1).

    The corrected right side applies Tw_1 to log^+ log^-: the factor
    Phi_{p^n}(u^{-a} g0) for a = 1..k-1 matches log_p(u^{-j} g0) for
    j = a - 1 only after g0 -> u g0.  The literal product is reported too.
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    b = k - 1
    lhs = padic_log_factor(0, config)
    lin = linear_factor(0, config)
    for j in range(1, k - 1):
        lhs = multiply(lhs, padic_log_factor(j, config))
        lin = multiply(lin, linear_factor(j, config))
    rhs_lit = multiply(multiply(pollack_log("+", b, config), pollack_log("-", b, config)), lin)
    rhs_cor = multiply(multiply(pollack_log("+", b, config, shift=1), pollack_log("-", b, config, shift=1)), lin)
    return DetIdentityReport(
        p=config.p, k=k, M=config.M, N=config.N, slack=det_slack(k, config),
        corrected_valuation=(lhs - rhs_cor).certified_valuation(),
        literal_valuation=(lhs - rhs_lit).certified_valuation(),
        lhs_precision=lhs.precision(), rhs_precision=rhs_cor.precision(),
    )


def little_l(k: int, eps_p: int, a: int, sign: str, config: AlgebraConfig) -> IwasawaElement:
    """The generator of the omega^a-part of the image of Col^sign (all branches)."""
    p = config.p
    if sign == "+":
        out = config.one()
        for j in range(k - 1):
            if (j - a) % (p - 1):
                out = multiply(out, linear_factor(j, config))
        return out
    if sign == "-":
        if eps_p == -1 and k % 2 == 0 and (a - (k // 2 - 1)) % (p - 1) == 0:
            return linear_factor(k // 2 - 1, config)
        return config.one()
    raise DomainError("sign must be '+' or '-'")


def little_l_total(k: int, eps_p: int, sign: str, config: AlgebraConfig) -> IwasawaElement:
    """sum_a e_a l_a: branch a carries the branch-a generator."""
    rows = [little_l(k, eps_p, a, sign, config).branch(a) for a in range(config.p - 1)]
    return IwasawaElement(config, tuple(rows), Poly(k))


@dataclass
class ConditionResult:
    label: str
    status: str  # pass | fail | indeterminate
    detail: str = ""


@dataclass
class MembershipReport:
    conditions: list = field(default_factory=list)
    conductors_checked: tuple = ()

    @property
    def decision(self) -> str:
        st = {c.status for c in self.conditions}
        if "fail" in st:
            return "reject"
        if "indeterminate" in st:
            return "indeterminate"
        return "accept"


def image_membership(F: IwasawaElement, G: IwasawaElement, k: int, eps_p: int, config: AlgebraConfig) -> MembershipReport:
    """Test (F, G) against the description of the image of (Col^+, Col^-).

    The characters of conductor p are exactly omega^b with b != 0, so the
    vanishing conditions are checked exhaustively.
    """
    if eps_p not in (1, -1):
        raise DomainError("eps_p must be +1 or -1")
    if not (F.in_lambda() and G.in_lambda()):
        raise DomainError("F and G must lie in Lambda")
    p = config.p
    rep = MembershipReport(conductors_checked=(p,))
    for j in range(k - 1):
        lam = PadicCharacter(0, 0, 0, j)
        coeff = Fraction(1, eps_p) * Fraction(p) ** (1 + j - k) + Fraction(p) ** (-j - 1)
        try:
            lhs = evaluate(F, lam).to_padic() * coeff
            rhs = evaluate(G, lam).to_padic() * (1 - Fraction(1, p))
            diff = lhs - rhs
            if diff.prec <= 0:
                rep.conditions.append(ConditionResult(f"relation j={j}", "indeterminate", "no digits left"))
            elif diff.is_zero():
                rep.conditions.append(ConditionResult(f"relation j={j}", "pass", f"mod p^{diff.prec}"))
            else:
                rep.conditions.append(ConditionResult(f"relation j={j}", "fail", f"difference has valuation {diff.val}"))
        except PrecisionShortfall as exc:
            rep.conditions.append(ConditionResult(f"relation j={j}", "indeterminate", str(exc)))
        for b in range(1, p - 1):
            lab = f"vanishing omega^{b} chi^{j}"
            try:
                v = verify_zero(F, PadicCharacter(b, 0, 0, j))
                rep.conditions.append(ConditionResult(lab, "pass" if v.zero else "fail", f"floor {v.floor}"))
            except IndeterminateError as exc:
                rep.conditions.append(ConditionResult(lab, "indeterminate", str(exc)))
    return rep


def interpolating_polynomial(points: list, values: list, p: int, prec: int) -> list:
    """Newton interpolation over Q (exact Fractions); returns coefficients in T."""
    n = len(points)
    coef = [Fraction(v) for v in values]
    for lvl in range(1, n):
        for i in range(n - 1, lvl - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (points[i] - points[i - lvl])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (T - points[i]) + coef[i]
        new = [Fraction(0)] * n
        for t, c in enumerate(poly):
            if c:
                if t + 1 < n:
                    new[t + 1] += c
                new[t] -= c * points[i]
        new[0] += coef[i]
        poly = new
    return poly


def image_pair(k: int, eps_p: int, config: AlgebraConfig, R: IwasawaElement) -> tuple:
    """A pair in the image built from an arbitrary R in Lambda.

    F = p^K * (sum_a e_a l^+_a) * R and G = F * c(T), where c interpolates the
    ratio demanded by the linear relation at T = u^j - 1.
    """
    p = config.p
    pts, vals = [], []
    for j in range(k - 1):
        coeff = Fraction(1, eps_p) * Fraction(p) ** (1 + j - k) + Fraction(p) ** (-j - 1)
        pts.append(Fraction(config.u) ** j - 1)
        vals.append(coeff / (1 - Fraction(1, p)))
    c = interpolating_polynomial(pts, vals, p, config.N)
    K = max(0, max(-vp(x, p) for x in c if x) if any(c) else 0)
    K = int(K)
    F = multiply(little_l_total(k, eps_p, "+", config), R) * Fraction(p) ** K
    G = multiply(F, config.from_series(c))
    return F, G


@dataclass
class LocusProbe:
    c: int  # conductor exponent of theta
    j: int
    listed: bool
    zero: bool
    floor: int
    valuation: Optional[int]

    @property
    def agrees(self) -> bool:
        return self.listed == self.zero

    def as_dict(self) -> dict:
        return {"c": self.c, "j": self.j, "listed": self.listed, "zero": self.zero,
                "floor": self.floor, "valuation": self.valuation}


def listed_zero(sign: str, b: int, c: int, j: int) -> bool:
    """theta of wild conductor p^c times chi^j is a zero of log^sign_b iff
    1 <= j <= b and c is odd >= 3 (plus) or even >= 2 (minus)."""
    if not 1 <= j <= b or c < 2:
        return False
    return c % 2 == 1 if sign == "+" else c % 2 == 0


def log_zero_locus(sign: str, b: int, config: AlgebraConfig, c_max: int, tame: int = 1) -> list:
    """Probe log^sign_b at theta trivial, tame of conductor p, and wild of
    conductor p^2 .. p^c_max, for 0 <= j <= b + 1."""
    L = pollack_log(sign, b, config)
    chars = [(0, 0, 0), (tame, 0, 0)] + [(tame, c, 1) for c in range(2, c_max + 1)]
    out = []
    for tb, c, sel in chars:
        for j in range(0, b + 2):
            lam = PadicCharacter(tb, c, sel, j)
            v = verify_zero(L, lam)
            n = lam.conductor_exponent()
            out.append(LocusProbe(n, j, listed_zero(sign, b, c, j), v.zero, v.floor, v.valuation))
    return out
