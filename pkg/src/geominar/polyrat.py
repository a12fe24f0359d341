"""Dense real polynomials, rational functions, and real root finding.

Everything is plain double precision. The probability generating functions
handled elsewhere never exceed degree four after composition, so dense
ascending coefficient vectors plus closed-form or bisection root finding
are adequate and easy to audit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    ComplexRootsError,
    DomainViolationError,
    GeominarError,
    NotAllRealRootsError,
    ZeroDivisorError,
)

# Trailing coefficients below this fraction of the largest magnitude are
# treated as zero when normalizing; composition of exact parameter values
# can leave dust terms of order machine epsilon.
_TRIM_REL = 1e-13

# Default tolerance deciding whether two roots coincide, relative to the
# root magnitude.
DISTINCT_TOL = 1e-9


def _normalized(coeffs) -> tuple[float, ...]:
    cs = [float(c) for c in coeffs]
    if not cs:
        return (0.0,)
    big = max(abs(c) for c in cs)
    if big == 0.0:
        return (0.0,)
    cut = _TRIM_REL * big
    n = len(cs)
    while n > 1 and abs(cs[n - 1]) <= cut:
        n -= 1
    return tuple(cs[:n])


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending coefficients: coeffs[k] multiplies s**k.

    The trailing (highest stored) coefficient is nonzero after construction,
    except for the zero polynomial which is stored as (0.0,).
    """

    coeffs: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalized(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def coeff(self, k: int) -> float:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0

    def __call__(self, s: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def derivative(self) -> Polynomial:
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(k * self.coeffs[k] for k in range(1, len(self.coeffs))))

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __sub__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(k) - other.coeff(k) for k in range(n)))

    def __mul__(self, other: Polynomial) -> Polynomial:
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0.0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def scaled(self, c: float) -> Polynomial:
        return Polynomial(tuple(c * x for x in self.coeffs))


def poly_divmod(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Long division: num = quotient * den + remainder, deg(remainder) < deg(den)."""
    if den.is_zero():
        raise ZeroDivisorError("polynomial division by the zero polynomial")
    dn = den.degree
    if num.degree < dn:
        return Polynomial((0.0,)), num
    r = list(num.coeffs)
    lead = den.coeffs[-1]
    q = [0.0] * (len(r) - dn)
    for k in range(len(r) - 1, dn - 1, -1):
        f = r[k] / lead
        q[k - dn] = f
        for j in range(dn + 1):
            r[k - dn + j] -= f * den.coeffs[j]
    rem = Polynomial(tuple(r[:dn])) if dn > 0 else Polynomial((0.0,))
    return Polynomial(tuple(q)), rem


def deflate(p: Polynomial, root: float) -> Polynomial:
    """Synthetic division of p by (s - root), discarding the remainder."""
    cs = p.coeffs
    if len(cs) == 1:
        return p
    q = [0.0] * (len(cs) - 1)
    acc = cs[-1]
    for k in range(len(cs) - 2, -1, -1):
        q[k] = acc
        acc = cs[k] + acc * root
    return Polynomial(tuple(q))


@dataclass(frozen=True)
class RootSet:
    """Real roots in ascending order; the flag marks a pair closer than tol."""

    roots: tuple[float, ...]
    multiplicity_flag: bool


def _quadratic_roots(c0: float, c1: float, c2: float, tol: float):
    """Stable quadratic formula; returns (roots, clamped_double) or raises."""
    disc = c1 * c1 - 4.0 * c2 * c0
    scale = max(c1 * c1, abs(4.0 * c2 * c0), 1e-300)
    if disc < -tol * scale:
        raise ComplexRootsError(
            f"quadratic discriminant {disc:.3e} is negative beyond tolerance"
        )
    disc = max(disc, 0.0)
    sq = math.sqrt(disc)
    if c1 == 0.0:
        r = sq / (2.0 * abs(c2))
        return sorted((-r, r))
    q = -0.5 * (c1 + math.copysign(sq, c1))
    r1 = q / c2
    r2 = c0 / q if q != 0.0 else r1
    return sorted((r1, r2))


def _cauchy_bound(p: Polynomial) -> float:
    lead = abs(p.coeffs[-1])
    return 1.0 + max(abs(c) for c in p.coeffs[:-1]) / lead


def _bisect(p: Polynomial, lo: float, hi: float) -> float:
    flo = p(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-13 * max(1.0, abs(mid)):
            break
        fm = p(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    # two guarded Newton corrections sharpen the bisection estimate
    dp = p.derivative()
    for _ in range(2):
        d = dp(root)
        if d == 0.0:
            break
        step = p(root) / d
        if abs(step) > 1e-2 * max(1.0, abs(root)):
            break
        root -= step
    return root


def _scan_real_roots(p: Polynomial) -> list[float]:
    """All simple real roots, by bracketing between critical points.

    The polynomial is strictly monotone between consecutive roots of its
    derivative (found recursively, bottoming out at the quadratic formula),
    so every simple real root produces a sign change over one of those
    panels of the Cauchy interval. Even-order (tangent) roots stay
    invisible, consistent with treating repeated roots as errors.
    """
    if p.degree == 1:
        return [-p.coeffs[0] / p.coeffs[1]]
    if p.degree == 2:
        try:
            return list(_quadratic_roots(*p.coeffs, tol=1e-12))
        except ComplexRootsError:
            return []
    bound = _cauchy_bound(p)
    crits = [c for c in _scan_real_roots(p.derivative()) if -bound < c < bound]
    pts = [-bound] + sorted(crits) + [bound]
    roots = []
    for lo, hi in zip(pts, pts[1:]):
        flo, fhi = p(lo), p(hi)
        if flo == 0.0:
            roots.append(lo)
        elif fhi != 0.0 and (flo < 0.0) != (fhi < 0.0):
            roots.append(_bisect(p, lo, hi))
    if p(bound) == 0.0:
        roots.append(bound)
    # Newton polish, then dedupe anything that collapsed to the same point
    dp = p.derivative()
    polished = []
    for r in roots:
        for _ in range(3):
            d = dp(r)
            if d == 0.0:
                break
            step = p(r) / d
            if abs(step) > 1e-2 * max(1.0, abs(r)):
                break
            r -= step
        polished.append(r)
    polished.sort()
    out: list[float] = []
    for r in polished:
        if not out or abs(r - out[-1]) > 1e-13 * max(1.0, abs(r)):
            out.append(r)
    return out


def real_roots_best_effort(p: Polynomial) -> list[float]:
    """All real roots that closed forms or bracketing can find; never raises."""
    if p.degree <= 0:
        return []
    if p.degree == 1:
        return [-p.coeffs[0] / p.coeffs[1]]
    if p.degree == 2:
        try:
            return list(_quadratic_roots(*p.coeffs, tol=1e-12))
        except ComplexRootsError:
            return []
    return _scan_real_roots(p)


def real_distinct_roots(p: Polynomial, tol: float = DISTINCT_TOL) -> RootSet:
    """Find all real roots of p, requiring as many as the degree.

    Degrees one and two are solved in closed form (stable quadratic branch);
    higher degrees by sign-change bracketing on the Cauchy-bound interval
    followed by bisection to 1e-13 relative width.
    """
    if p.degree < 1:
        raise GeominarError("root finding needs degree >= 1")
    if p.degree == 1:
        roots = [-p.coeffs[0] / p.coeffs[1]]
    elif p.degree == 2:
        roots = _quadratic_roots(*p.coeffs, tol=tol)
    else:
        roots = _scan_real_roots(p)
        if len(roots) < p.degree:
            raise NotAllRealRootsError(
                f"found {len(roots)} real roots for degree {p.degree}"
            )
        roots = roots[: p.degree]
    flag = any(
        roots[i + 1] - roots[i] <= tol * max(1.0, abs(roots[i]))
        for i in range(len(roots) - 1)
    )
    return RootSet(tuple(roots), flag)


@dataclass(frozen=True)
class RationalFunction:
    """Quotient of two polynomials, normalized so den(0) == 1.

    radius is the validity radius for evaluation; calls outside it raise.
    When pgf is set the value at s=1 is renormalized to exactly one and the
    value at s=0 is checked to lie in [0, 1].
    """

    num: Polynomial
    den: Polynomial
    radius: float = math.inf
    pgf: bool = False

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisorError("rational function with zero denominator")
        d0 = self.den.coeffs[0]
        scale_guard = max(abs(c) for c in self.den.coeffs)
        if abs(d0) <= 1e-14 * scale_guard:
            raise GeominarError("denominator vanishes at s = 0; b_0 > 0 required")
        num, den = self.num, self.den
        if d0 != 1.0:
            num = num.scaled(1.0 / d0)
            den = den.scaled(1.0 / d0)
        if self.pgf:
            d1 = den(1.0)
            if d1 == 0.0:
                raise GeominarError("pgf denominator vanishes at s = 1")
            v1 = num(1.0) / d1
            if abs(v1 - 1.0) > 1e-9:
                raise GeominarError(f"pgf value at s=1 is {v1!r}, not 1")
            num = num.scaled(1.0 / v1)
            v0 = num(0.0) / den(0.0)
            if not -1e-12 <= v0 <= 1.0 + 1e-12:
                raise GeominarError(f"pgf value at s=0 is {v0!r}, outside [0, 1]")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __call__(self, s: float) -> float:
        if abs(s) >= self.radius:
            raise DomainViolationError(
                f"evaluation at s={s!r} outside validity radius {self.radius!r}"
            )
        return self.num(s) / self.den(s)

    def derivative_value(self, s: float) -> float:
        if abs(s) >= self.radius:
            raise DomainViolationError(
                f"evaluation at s={s!r} outside validity radius {self.radius!r}"
            )
        n, d = self.num, self.den
        dv = d(s)
        return (n.derivative()(s) * dv - n(s) * d.derivative()(s)) / (dv * dv)

    def second_derivative_value(self, s: float) -> float:
        n, d = self.num, self.den
        dn, dd = n.derivative(), d.derivative()
        ddn, ddd = dn.derivative(), dd.derivative()
        dv = d(s)
        first = (dn(s) * dv - n(s) * dd(s)) / (dv * dv)
        return (ddn(s) * dv - n(s) * ddd(s)) / (dv * dv) - 2.0 * dd(s) * first / dv

    def is_constant(self) -> bool:
        return self.num.degree == 0 and self.den.degree == 0


def cancel(rf: RationalFunction, tol: float = DISTINCT_TOL) -> RationalFunction:
    """Remove common real roots of numerator and denominator within tol.

    The result is renormalized (den(0) == 1, and value 1 at s=1 when the
    function is tagged as a pgf). A no-op when no roots are shared.
    """
    num, den = rf.num, rf.den
    while num.degree > 0 and den.degree > 0:
        nroots = real_roots_best_effort(num)
        droots = real_roots_best_effort(den)
        matched = None
        for rd in droots:
            for rn in nroots:
                if abs(rn - rd) <= tol * max(1.0, abs(rd)):
                    matched = (rn, rd)
                    break
            if matched:
                break
        if matched is None:
            break
        num = deflate(num, matched[0])
        den = deflate(den, matched[1])
    return RationalFunction(num, den, radius=rf.radius, pgf=rf.pgf)


def compose_mobius(rf: RationalFunction, m: RationalFunction,
                   tol: float = DISTINCT_TOL) -> RationalFunction:
    """Compose rf with a degree <= 1 rational map m, returning rf(m(s)).

    Clearing denominators: with rf = P/Q of degrees p, q and D = max(p, q),
    the composed numerator is sum_k P_k * m_num^k * m_den^(D-k), and the
    denominator is the same sum over Q. Common factors are cancelled.
    """
    if m.num.degree > 1 or m.den.degree > 1:
        raise DomainViolationError("composition map must have degree <= 1")
    for i in range(33):
        s = i / 32.0
        md = m.den(s)
        if md == 0.0 or not abs(m.num(s) / md) < rf.radius:
            raise DomainViolationError(
                f"map value at s={s} leaves the validity radius {rf.radius!r}"
            )
    d = max(rf.num.degree, rf.den.degree)
    num_pows = [Polynomial((1.0,))]
    den_pows = [Polynomial((1.0,))]
    for _ in range(d):
        num_pows.append(num_pows[-1] * m.num)
        den_pows.append(den_pows[-1] * m.den)

    def expand(p: Polynomial) -> Polynomial:
        acc = Polynomial((0.0,))
        for k, c in enumerate(p.coeffs):
            if c != 0.0:
                acc = acc + (num_pows[k] * den_pows[d - k]).scaled(c)
        return acc

    preserves_one = abs(m.num(1.0) / m.den(1.0) - 1.0) <= 1e-12
    out = RationalFunction(expand(rf.num), expand(rf.den),
                           radius=math.inf, pgf=rf.pgf and preserves_one)
    return cancel(out, tol)


def min_denominator_root_magnitude(den: Polynomial) -> float:
    """Smallest root magnitude of den, used as a pgf validity radius."""
    if den.degree == 0:
        return math.inf
    roots = real_roots_best_effort(den)
    if len(roots) == den.degree:
        return min(abs(r) for r in roots)
    if den.degree == 2 and not roots:
        # complex pair: |root|^2 equals the coefficient ratio c0/c2
        return math.sqrt(abs(den.coeffs[0] / den.coeffs[2]))
    if roots:
        return min(abs(r) for r in roots)
    return math.inf
