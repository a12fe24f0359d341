"""Partial-fraction machinery turning a rational innovation pgf into a pmf.

Four routes produce the same law and cross-check each other:

* partial_fractions: residues at the real denominator roots, giving point
  masses (from the polynomial quotient) plus signed geometric terms
  rho_i / s_i^(m+1);
* linear_closed_form: the (a + b s)/(c + d s) family solved in closed form;
* quadratic_closed_form: quadratic-over-quadratic quotients reduced to a
  hurdle representation (atom pi at zero, signed two-geometric mixture
  above), covering both the equal-leading-coefficient case and the general
  one;
* pmf_recursive: direct power-series division of numerator by denominator.

All weights may be negative individually; validity means the combined pmf is
nonnegative, checked explicitly on the table and certified on the tail by a
dominance argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    ConstraintViolationError,
    GeominarError,
    NegativeProbabilityError,
    NoGeometricTermsError,
    RepeatedRootsError,
    RootInsideDiskError,
    ZeroConstantDenominatorError,
)
from .polyrat import (
    DISTINCT_TOL,
    Polynomial,
    RationalFunction,
    poly_divmod,
    real_distinct_roots,
)

# Entries in [-CLAMP_TOL, 0) are floating-point dust and are clamped to zero;
# anything below raises NegativeProbabilityError.
CLAMP_TOL = 1e-12

DEFAULT_TARGET_MASS = 1.0 - 1e-12


@dataclass(frozen=True)
class FractionalDecomposition:
    """Atoms plus geometric terms: pmf(m) = atom_poly[m] + sum_i rho_i / s_i^(m+1).

    terms are (rho_i, s_i) pairs sorted by ascending s_i; every s_i must
    exceed one or the series diverges.
    """

    atom_poly: Polynomial
    terms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        terms = tuple(sorted(((float(r), float(s)) for r, s in self.terms),
                             key=lambda t: t[1]))
        for _, s in terms:
            if s <= 1.0:
                raise RootInsideDiskError(f"geometric term with root s={s!r} <= 1")
        object.__setattr__(self, "terms", terms)

    def pmf(self, m: int) -> float:
        v = self.atom_poly.coeff(m)
        for rho, s in self.terms:
            v += rho * s ** (-(m + 1))  # negative power underflows to 0, never overflows
        return v

    def pgf_value(self, s: float) -> float:
        """Evaluate atom_poly(s) + sum rho_i / (s_i - s)."""
        v = self.atom_poly(s)
        for rho, si in self.terms:
            v += rho / (si - s)
        return v

    def remaining_mass(self, m: int) -> float:
        """Exact mass of all geometric terms beyond index m."""
        return sum(rho * s ** (-(m + 2)) / (s - 1.0) for rho, s in self.terms)

    def total_mass(self) -> float:
        return sum(self.atom_poly.coeffs) + sum(r / (s - 1.0) for r, s in self.terms)

    def mixture_components(self) -> tuple[tuple[float, float], ...]:
        """Geometric-mixture view: (weight c_i, mean mu_i) per term, with
        c_i = rho_i / (s_i - 1) and mu_i = 1 / (s_i - 1)."""
        return tuple((r / (s - 1.0), 1.0 / (s - 1.0)) for r, s in self.terms)


@dataclass(frozen=True)
class InnovationDistribution:
    """Tabulated innovation pmf with its decomposition and geometric tail.

    pmf_table covers m = 0..truncation; beyond that the smallest-root
    geometric term (tail_rho, tail_s) carries the residual mass and the
    decomposition formula stays exact.
    """

    decomposition: FractionalDecomposition
    truncation: int
    pmf_table: tuple[float, ...]
    tail_rho: float
    tail_s: float

    def pmf(self, m: int) -> float:
        if m < 0:
            return 0.0
        if m <= self.truncation:
            return self.pmf_table[m]
        return max(self.decomposition.pmf(m), 0.0)

    def pgf_value(self, s: float) -> float:
        return self.decomposition.pgf_value(s)

    def table_mass(self) -> float:
        return sum(self.pmf_table)

    def total_mass(self) -> float:
        return self.table_mass() + self.decomposition.remaining_mass(self.truncation)

    def mean(self) -> float:
        """Exact series mean: atoms plus sum_i rho_i / (s_i - 1)^2."""
        atoms = sum(m * c for m, c in enumerate(self.decomposition.atom_poly.coeffs))
        return atoms + sum(r / (s - 1.0) ** 2 for r, s in self.decomposition.terms)

    def variance(self) -> float:
        """Exact series variance via E[X^2] = atoms + sum rho_i (s_i+1)/(s_i-1)^3."""
        atoms = sum(m * m * c for m, c in enumerate(self.decomposition.atom_poly.coeffs))
        m2 = atoms + sum(r * (s + 1.0) / (s - 1.0) ** 3 for r, s in self.decomposition.terms)
        mu = self.mean()
        return m2 - mu * mu


@dataclass(frozen=True)
class HurdleForm:
    """Hurdle law: atom pi at zero, signed two-geometric mixture above.

    pmf(m) = pi at m=0 and (1-pi) * [w1 (1-p1) p1^(m-1) + w2 (1-p2) p2^(m-1)]
    for m >= 1. Weights sum to one but may individually be negative; validity
    of the combined pmf is checked, not per-component nonnegativity.
    """

    pi: float
    p1: float
    p2: float
    w1: float
    w2: float

    def __post_init__(self):
        if not -CLAMP_TOL <= self.pi < 1.0:
            raise ConstraintViolationError(f"hurdle atom pi={self.pi!r} outside [0, 1)")
        if not 0.0 <= self.p2 <= self.p1 < 1.0:
            raise ConstraintViolationError(
                f"hurdle ratios need 0 <= p2 <= p1 < 1, got p1={self.p1!r} p2={self.p2!r}")
        wscale = max(1.0, abs(self.w1), abs(self.w2))
        if abs(self.w1 + self.w2 - 1.0) > 1e-12 * wscale:
            raise ConstraintViolationError(
                f"hurdle weights must sum to 1, got {self.w1 + self.w2!r}")
        _check_hurdle_nonnegative(self)


def hurdle_pmf(h: HurdleForm, m: int) -> float:
    """Evaluate the hurdle pmf at m, with the 0**0 == 1 convention at p == 0."""
    if m < 0:
        return 0.0
    if m == 0:
        return h.pi
    t1 = h.w1 * (1.0 - h.p1) * _pow_conv(h.p1, m - 1)
    t2 = h.w2 * (1.0 - h.p2) * _pow_conv(h.p2, m - 1)
    return (1.0 - h.pi) * (t1 + t2)


def _pow_conv(p: float, k: int) -> float:
    if k == 0:
        return 1.0  # 0**0 == 1 so a p == 0 component contributes only at m = 1
    return p ** k


def _check_hurdle_nonnegative(h: HurdleForm, m_max: int = 400) -> None:
    if h.w1 >= 0.0 and h.w2 >= 0.0:
        return
    for m in range(1, m_max + 1):
        if hurdle_pmf(h, m) < -CLAMP_TOL:
            raise NegativeProbabilityError(
                f"hurdle pmf negative at m={m}: {hurdle_pmf(h, m)!r}")
    # tail certificate: the positive leading component must dominate from
    # m_max on, i.e. w1 (1-p1) >= |w2| (1-p2) (p2/p1)^(m-1); the ratio only
    # shrinks with m so checking the last explicit index certifies the rest
    if h.w2 < 0.0:
        if h.w1 <= 0.0 or h.p1 <= 0.0:
            raise NegativeProbabilityError("hurdle tail is negative")
        lead = h.w1 * (1.0 - h.p1)
        other = abs(h.w2) * (1.0 - h.p2) * (h.p2 / h.p1) ** (m_max - 1)
        if lead + CLAMP_TOL < other:
            raise NegativeProbabilityError("hurdle tail dominance certificate failed")
    elif h.p1 > h.p2:
        # w1 < 0: the p1 component decays strictly slower than the p2 one,
        # so a negative leading weight makes the far tail negative
        raise NegativeProbabilityError("negative weight on the dominant hurdle component")
    # p1 == p2: one effective component with weight w1 + w2 = 1, always valid


def partial_fractions(rf: RationalFunction, tol: float = DISTINCT_TOL) -> FractionalDecomposition:
    """Residue decomposition of a rational pgf with real distinct roots > 1.

    The polynomial quotient becomes the atom part; each denominator root s_i
    contributes rho_i = -remainder(s_i) / den'(s_i).
    """
    num, den = rf.num, rf.den
    if den.degree == 0:
        dec = FractionalDecomposition(num.scaled(1.0 / den.coeffs[0]), ())
        _check_mass(dec, rf)
        return dec
    quotient, remainder = poly_divmod(num, den)
    roots = real_distinct_roots(den, tol)
    if roots.multiplicity_flag:
        raise RepeatedRootsError(f"denominator roots {roots.roots} are not distinct")
    for s in roots.roots:
        if s <= 1.0:
            raise RootInsideDiskError(f"denominator root s={s!r} <= 1: pmf would diverge")
    dden = den.derivative()
    terms = []
    for s in roots.roots:
        rho = -remainder(s) / dden(s)
        terms.append((rho, s))
    scale = max(1.0, sum(abs(r) for r, _ in terms))
    terms = [(r, s) for r, s in terms if abs(r) > 1e-14 * scale]
    dec = FractionalDecomposition(quotient, tuple(terms))
    _check_mass(dec, rf)
    return dec


def _check_mass(dec: FractionalDecomposition, rf: RationalFunction) -> None:
    target = rf.num(1.0) / rf.den(1.0)
    if abs(dec.total_mass() - target) > 1e-10:
        raise GeominarError(
            f"decomposition mass {dec.total_mass()!r} does not reconstruct {target!r}")


def pmf_from_decomposition(dec: FractionalDecomposition,
                           target_mass: float = DEFAULT_TARGET_MASS) -> InnovationDistribution:
    """Tabulate the pmf until the accumulated mass reaches target_mass.

    Entries below -1e-12 raise NegativeProbabilityError (invalid model
    parameters); dust in [-1e-12, 0) is clamped to zero. The truncation index
    is the smallest m with cumulative mass >= target_mass, never less than
    the atom support, and the tail is certified nonnegative by dominance of
    the smallest-root term.
    """
    if not 0.0 < target_mass < 1.0:
        raise ConstraintViolationError(f"target_mass must be in (0,1), got {target_mass!r}")
    terms = dec.terms
    if terms:
        rho_min, s_min = terms[0]
        if rho_min < -CLAMP_TOL:
            raise NegativeProbabilityError(
                f"smallest-root residue rho={rho_min!r} < 0: tail is eventually negative")
    table = []
    cum = 0.0
    m = 0
    cap = 1_000_000
    while True:
        v = dec.pmf(m)
        if v < -CLAMP_TOL:
            raise NegativeProbabilityError(f"pmf entry at m={m} is {v!r}")
        v = max(v, 0.0)
        table.append(v)
        cum += v
        if m >= dec.atom_poly.degree:
            remaining = dec.remaining_mass(m)
            if cum >= target_mass or abs(remaining) < 1e-15:
                if _tail_certified(terms, m):
                    break
        m += 1
        if m > cap:
            raise GeominarError("pmf truncation did not converge within 1e6 entries")
    if terms:
        tail_rho, tail_s = terms[0]
    else:
        tail_rho, tail_s = 0.0, math.inf
    return InnovationDistribution(dec, m, tuple(table), tail_rho, tail_s)


def _tail_certified(terms, m: int) -> bool:
    """True when rho_min dominates all other residues from index m+1 on."""
    if len(terms) <= 1:
        return True
    rho_min, s_min = terms[0]
    if any(r < 0.0 for r, _ in terms[1:]):
        bound = sum(abs(r) * (s_min / s) ** (m + 2) for r, s in terms[1:])
        return rho_min - bound >= -CLAMP_TOL
    return True


def linear_closed_form(a: float, b: float, c: float, d: float,
                       target_mass: float = DEFAULT_TARGET_MASS) -> InnovationDistribution:
    """Closed-form pmf of the linear rational pgf (a + b s) / (c + d s).

    Requires a < c, a + b = c + d, d != 0 and -c/d > 1; the law is the atom
    b/d at zero plus the geometric term rho / s1^(m+1) with s1 = -c/d and
    rho = b c / d^2 - a / d.
    """
    scale = max(abs(a), abs(b), abs(c), abs(d), 1.0)
    if abs(d) <= 1e-14 * scale:
        raise ConstraintViolationError("linear form requires d != 0")
    if c <= 0.0:
        raise ConstraintViolationError(f"linear form requires c > 0, got c={c!r}")
    if not a < c:
        raise ConstraintViolationError(f"linear form requires a < c, got a={a!r} c={c!r}")
    if abs((a + b) - (c + d)) > 1e-9 * scale:
        raise ConstraintViolationError(
            f"linear form requires a + b = c + d, got {a + b!r} vs {c + d!r}")
    s1 = -c / d
    if not s1 > 1.0:
        raise ConstraintViolationError(f"linear form requires -c/d > 1, got {s1!r}")
    if not a / c < 1.0:
        raise ConstraintViolationError(f"linear form requires value < 1 at s=0, got {a / c!r}")
    rho = b * c / (d * d) - a / d
    atom = b / d
    dec = FractionalDecomposition(Polynomial((atom,)), ((rho, s1),) if rho != 0.0 else ())
    return pmf_from_decomposition(dec, target_mass)


def quadratic_closed_form(a: float, b: float, c: float,
                          abar: float, bbar: float, cbar: float,
                          tol: float = DISTINCT_TOL) -> HurdleForm:
    """Hurdle representation of (a s^2 + b s + c) / (abar s^2 + bbar s + cbar).

    With equal leading coefficients the ratios and weights come straight from
    the roots: w1 = p1/(p1-p2), w2 = p2/(p2-p1). Otherwise the numerator
    degree is reduced first and the weights come from the residues:
    w_i = rho_i p_i^2 / ((1-p_i)(1-pi)). A vanishing leading pair (a = abar
    = 0) degrades to the linear case, which is the p2 = 0 hurdle.
    """
    scale = max(abs(x) for x in (a, b, c, abar, bbar, cbar))
    if scale == 0.0:
        raise ConstraintViolationError("all coefficients are zero")
    if cbar <= 0.0:
        raise ConstraintViolationError(f"requires cbar > 0, got {cbar!r}")
    if c > cbar + 1e-12 * scale:
        raise ConstraintViolationError(f"requires c <= cbar, got c={c!r} cbar={cbar!r}")
    if abs((a + b + c) - (abar + bbar + cbar)) > 1e-9 * scale:
        raise ConstraintViolationError(
            "requires equal coefficient sums (pgf value 1 at s=1), got "
            f"{a + b + c!r} vs {abar + bbar + cbar!r}")
    pi = c / cbar
    if not pi < 1.0:
        raise ConstraintViolationError(f"requires value < 1 at s=0, got {pi!r}")
    pi = max(pi, 0.0)

    if abs(abar) <= 1e-12 * scale:
        if abs(a) > 1e-12 * scale:
            raise ConstraintViolationError(
                "numerator degree exceeds denominator degree (a != 0 while abar = 0)")
        if abs(bbar) <= 1e-12 * scale:
            raise ConstraintViolationError("denominator must have degree >= 1")
        s1 = -cbar / bbar
        if not s1 > 1.0:
            raise RootInsideDiskError(f"denominator root s={s1!r} <= 1")
        p1 = 1.0 / s1
        rho = -(c - b * cbar / bbar) / bbar
        w1 = rho * p1 * p1 / ((1.0 - p1) * (1.0 - pi))
        return HurdleForm(pi, p1, 0.0, w1, 1.0 - w1)

    roots = real_distinct_roots(Polynomial((cbar, bbar, abar)), tol)
    if roots.multiplicity_flag:
        raise RepeatedRootsError(f"denominator roots {roots.roots} are not distinct")
    s1, s2 = roots.roots
    if not s1 > 1.0:
        raise RootInsideDiskError(f"denominator root s={s1!r} <= 1")
    if abs(a - abar) <= 1e-12 * scale:
        w1, w2 = _weights_equal_leading(1.0 / s1, 1.0 / s2)
    else:
        w1, w2 = _weights_from_residues(a, b, c, abar, bbar, cbar, s1, s2, pi)
    return HurdleForm(pi, 1.0 / s1, 1.0 / s2, w1, w2)


def _weights_equal_leading(p1: float, p2: float) -> tuple[float, float]:
    """Mixture weights when numerator and denominator share the leading
    coefficient: w1 = p1/(p1-p2), w2 = p2/(p2-p1)."""
    return p1 / (p1 - p2), p2 / (p2 - p1)


def _weights_from_residues(a: float, b: float, c: float,
                           abar: float, bbar: float, cbar: float,
                           s1: float, s2: float, pi: float) -> tuple[float, float]:
    """General-case weights: reduce the numerator degree, take residues at
    the roots, then w_i = rho_i p_i^2 / ((1-p_i)(1-pi))."""
    u1 = (b - a * bbar / abar) / abar
    u0 = (c - a * cbar / abar) / abar
    rho1 = -(u1 * s1 + u0) / (s1 - s2)
    rho2 = -(u1 * s2 + u0) / (s2 - s1)
    p1, p2 = 1.0 / s1, 1.0 / s2
    w1 = rho1 * p1 * p1 / ((1.0 - p1) * (1.0 - pi))
    if p2 == 0.0:
        return w1, 1.0 - w1
    w2 = rho2 * p2 * p2 / ((1.0 - p2) * (1.0 - pi))
    return w1, w2


def hurdle_to_decomposition(h: HurdleForm) -> FractionalDecomposition:
    """Rewrite a hurdle law in atom-plus-geometric-terms form.

    Each positive-ratio component becomes rho_i = (1-pi) w_i (1-p_i) / p_i^2
    at s_i = 1/p_i; the zero atom absorbs the difference pi - sum rho_i/s_i.
    """
    terms = []
    for w, p in ((h.w1, h.p1), (h.w2, h.p2)):
        if p > 0.0 and w != 0.0:
            terms.append(((1.0 - h.pi) * w * (1.0 - p) / (p * p), 1.0 / p))
    atom = h.pi - sum(r / s for r, s in terms)
    return FractionalDecomposition(Polynomial((atom,)), tuple(terms))


def pmf_recursive(rf: RationalFunction, n: int) -> list[float]:
    """First n+1 pmf values by power-series division of num by den.

    c_l = (a_l - sum_{i=max(0,l-q)}^{l-1} c_i b_{l-i}) / b_0 with a_l = 0
    beyond the numerator degree; identical to the staged triangular solves of
    the matrix formulation because those systems are lower-triangular
    Toeplitz in the denominator coefficients.
    """
    b = rf.den.coeffs
    if b[0] <= 0.0:
        raise ZeroConstantDenominatorError(f"b_0 = {b[0]!r} <= 0 after normalization")
    a = rf.num.coeffs
    q = len(b) - 1
    out = []
    for el in range(n + 1):
        acc = a[el] if el < len(a) else 0.0
        for i in range(max(0, el - q), el):
            acc -= out[i] * b[el - i]
        out.append(acc / b[0])
    return out


def tail_geometric_approx(dec: FractionalDecomposition, m: int) -> float:
    """Smallest-root geometric approximation rho_min / s_min^(m+1).

    The relative error against the exact pmf decays like (s_min/s_next)^m,
    so the single-term tail is accurate for large m.
    """
    if not dec.terms:
        raise NoGeometricTermsError("decomposition has no geometric terms")
    rho, s = dec.terms[0]
    return rho * s ** (-(m + 1))
