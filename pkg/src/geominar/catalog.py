"""Named INAR(1) model families with validity regions and closed-form moments.

Eight entries ship:

==============  ============================  =====================  ========
name            marginal                      thinning               method
==============  ============================  =====================  ========
ginar           Geometric(theta)              binomial(alpha)        linear
nginar          GeometricMean(mu)             neg. binomial(alpha)   residues
zmg             (innovation only)             none (alpha = 0)       linear
two-param       (innovation only)             none (alpha = 0)       linear
rho-geo-bin     RhoGeometric(mu, rho)         binomial(alpha)        hurdle
hurdle-geo-bin  HurdleGeometric(mu, rho)      binomial(alpha)        hurdle
rho-geo-nb      RhoGeometric(mu, rho)         neg. binomial(alpha)   hurdle
hurdle-geo-nb   HurdleGeometric(mu, rho)      neg. binomial(alpha)   hurdle
==============  ============================  =====================  ========

zmg is the zero-modified geometric innovation law (atom k at zero, weight
1-k on a geometric with mean mu); two-param is the linear family with pgf
1 - m(1-s)/(1+r(1-s)). Both behave as iid models (alpha = 0) whose marginal
equals the innovation law.

Innovation variances are computed from the mixture representation, which
always agrees with the pgf derivatives; simplified polynomial shortcuts for
the hurdle families are numerically inconsistent with the pmf and are kept
only in the test suite as rejected candidates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from . import pgf as pgfmod
from .decompose import (
    HurdleForm,
    InnovationDistribution,
    hurdle_to_decomposition,
    linear_closed_form,
    partial_fractions,
    pmf_from_decomposition,
    pmf_recursive,
    quadratic_closed_form,
)
from .errors import GeominarError, ValidityViolationError
from .pgf import (
    BinomialThinning,
    Geometric,
    GeometricMean,
    HurdleGeometric,
    ModelSpec,
    NegativeBinomialThinning,
    RhoGeometric,
    counting_pgf,
    innovation_pgf,
    marginal_mean,
    marginal_pgf,
    marginal_variance,
)
from .polyrat import Polynomial, RationalFunction

MODEL_NAMES = (
    "ginar",
    "nginar",
    "zmg",
    "two-param",
    "rho-geo-bin",
    "hurdle-geo-bin",
    "rho-geo-nb",
    "hurdle-geo-nb",
)

_MARGIN_CAP = 1e18


@dataclass(frozen=True)
class Constraint:
    """A named validity condition with a signed margin (positive = inside)."""

    name: str
    satisfied: bool
    margin: float


@dataclass(frozen=True)
class Moments:
    marginal_mean: float
    marginal_var: float
    marginal_dispersion: float
    innovation_mean: float
    innovation_var: float
    innovation_dispersion: float


@dataclass(frozen=True)
class DispersionClass:
    marginal: str
    innovation: str


@dataclass(frozen=True)
class INARModel:
    """A fully derived model: pgfs, innovation law, optional hurdle form, moments."""

    name: str
    params: Mapping[str, float]
    spec: ModelSpec
    marginal_rf: RationalFunction
    counting_rf: RationalFunction
    innovation_rf: RationalFunction
    innovation: InnovationDistribution
    hurdle: HurdleForm | None
    moments: Moments
    notes: tuple[str, ...] = ()

    @property
    def alpha(self) -> float:
        return self.spec.thinning.alpha

    def marginal_pmf(self, k: int) -> float:
        if self.spec.marginal is None:
            return self.innovation.pmf(k)
        return pgfmod.marginal_pmf(self.spec.marginal, k)


def _cap(x: float) -> float:
    return max(min(x, _MARGIN_CAP), -_MARGIN_CAP)


def _constraint(name: str, satisfied: bool, margin: float) -> Constraint:
    return Constraint(name, bool(satisfied), _cap(margin))


def _open01(label: str, v: float) -> Constraint:
    return _constraint(f"{label} in (0,1)", 0.0 < v < 1.0, min(v, 1.0 - v))


def _alpha_dom(a: float) -> Constraint:
    return _constraint("alpha in [0,1)", 0.0 <= a < 1.0, min(a, 1.0 - a) if a > 0 else 1.0 - a)


def _hurdle_params(name: str, mu: float, rho: float, alpha: float):
    """Closed-form (pi, p1, p2, w1, w2) of the hurdle innovation families."""
    if name == "rho-geo-bin":
        denom = 1.0 - rho * (1.0 - alpha)
        pi = (1.0 - rho + alpha * (mu + rho)) / ((1.0 + mu) * denom)
        p1 = (rho + mu) / (1.0 + mu)
        p2 = alpha * rho / denom
        d = (rho + mu) * denom - alpha * rho * (1.0 + mu)
        return pi, p1, p2, (rho + mu) * denom / d, -alpha * rho * (1.0 + mu) / d
    if name == "hurdle-geo-bin":
        k = rho - mu * (1.0 + rho)
        pi = 1.0 - (1.0 - alpha) * mu / (1.0 + alpha * k)
        p1 = rho / (1.0 + rho)
        p2 = alpha * k / (1.0 + alpha * k)
        d = rho - alpha * k
        return pi, p1, p2, rho * (1.0 + alpha * k) / d, -alpha * (1.0 + rho) * k / d
    if name == "rho-geo-nb":
        pi = 1.0 - mu * (1.0 - rho) / ((1.0 + mu) * (1.0 - rho + alpha))
        p1 = (rho + mu) / (1.0 + mu)
        p2 = alpha / (1.0 - rho + alpha)
        w1 = ((alpha - rho + 1.0) * (alpha * mu + alpha - mu - rho)
              / ((rho - 1.0) * (mu + rho - alpha)))
        w2 = (alpha * (1.0 + mu) * (alpha - rho)
              / ((rho - 1.0) * (alpha - mu - rho)))
        return pi, p1, p2, w1, w2
    if name == "hurdle-geo-nb":
        g = alpha * (1.0 + rho) * (1.0 - mu)
        pi = (g - mu + 1.0) / (g + 1.0)
        p1 = rho / (1.0 + rho)
        p2 = g / (1.0 + g)
        d = alpha * (mu - 1.0) * (rho + 1.0) + rho
        w1 = (alpha * rho + alpha - rho) * (alpha * (mu - 1.0) * (rho + 1.0) - 1.0) / d
        w2 = -(alpha * (rho + 1.0)
               * (alpha * (mu - 1.0) * (rho + 1.0) - mu * (rho + 1.0) + rho)) / d
        return pi, p1, p2, w1, w2
    raise GeominarError(f"no hurdle parameterization for {name!r}")


def _hurdle_roots(name: str, mu: float, rho: float, alpha: float) -> tuple[float, float]:
    """Closed-form denominator roots (s1, s2) with s2 = inf at degenerate points."""
    if name == "rho-geo-bin":
        s1 = (1.0 + mu) / (rho + mu)
        s2 = (1.0 - rho * (1.0 - alpha)) / (rho * alpha) if rho * alpha > 0.0 else math.inf
    elif name == "hurdle-geo-bin":
        k = rho - mu * (1.0 + rho)
        s1 = (1.0 + rho) / rho
        s2 = (1.0 + alpha * k) / (alpha * k) if alpha * k > 0.0 else math.inf
    elif name == "rho-geo-nb":
        s1 = (1.0 + mu) / (rho + mu)
        s2 = (1.0 - rho + alpha) / alpha if alpha > 0.0 else math.inf
    elif name == "hurdle-geo-nb":
        g = alpha * (1.0 + rho) * (1.0 - mu)
        s1 = (1.0 + rho) / rho
        s2 = (1.0 + g) / g if g > 0.0 else math.inf
    else:
        raise GeominarError(f"no root formulas for {name!r}")
    return s1, s2


def _mixture_variance(pi: float, p1: float, p2: float, w1: float, w2: float) -> float:
    """Variance of the hurdle law from its shifted-geometric mixture."""
    mu_z = w1 / (1.0 - p1) + w2 / (1.0 - p2)
    ez2 = w1 * (1.0 + p1) / (1.0 - p1) ** 2 + w2 * (1.0 + p2) / (1.0 - p2) ** 2
    mean = (1.0 - pi) * mu_z
    return (1.0 - pi) * ez2 - mean * mean


def _linear_moments(bd: float, s1: float) -> tuple[float, float]:
    """Mean and variance of the linear law: atom bd at zero plus geometric at s1."""
    theta = 1.0 - 1.0 / s1
    mean = (1.0 - theta) / theta * (1.0 - bd)
    var = mean * ((1.0 + bd) / theta - bd)
    return mean, var


def _numeric_pmf_constraint(rf: RationalFunction, n: int = 400) -> Constraint:
    table = pmf_recursive(rf, n)
    worst = min(table)
    return _constraint("innovation pmf nonnegative (numeric)", worst >= -1e-12, worst)


def _domain_constraints(name: str, p: dict) -> list[Constraint]:
    if name == "ginar":
        return [_open01("theta", p["theta"]), _alpha_dom(p["alpha"])]
    if name == "nginar":
        return [_constraint("mu > 0", p["mu"] > 0.0, p["mu"]), _alpha_dom(p["alpha"])]
    if name == "zmg":
        mu, k = p["mu"], p["k"]
        out = [_constraint("mu > 0", mu > 0.0, mu)]
        if mu > 0.0:
            out.append(_constraint("k >= -1/mu", k + 1.0 / mu >= -1e-12, k + 1.0 / mu))
        out.append(_constraint("k < 1", k < 1.0, 1.0 - k))
        return out
    if name == "two-param":
        r, m = p["r"], p["m"]
        return [
            _constraint("r > 0", r > 0.0, r),
            _constraint("m > 0", m > 0.0, m),
            _constraint("m <= 1 + r", m <= 1.0 + r + 1e-12, 1.0 + r - m),
        ]
    mu, rho, alpha = p["mu"], p["rho"], p["alpha"]
    out = []
    if name in ("rho-geo-bin", "rho-geo-nb"):
        out.append(_constraint("mu > 0", mu > 0.0, mu))
        out.append(_constraint("rho in [0,1)", 0.0 <= rho < 1.0,
                               min(rho, 1.0 - rho) if rho > 0 else 1.0 - rho))
    else:
        out.append(_open01("mu", mu))
        out.append(_open01("rho", rho))
    out.append(_alpha_dom(alpha))
    return out


def validate_params(name: str, **params: float) -> tuple[Constraint, ...]:
    """Every applicable validity condition with a boolean and signed margin.

    The model is buildable iff all entries are satisfied. Conditions without
    a usable closed form are established numerically: the first few hundred
    pmf values are computed by the series recursion (which needs no root
    geometry) and checked for nonnegativity.
    """
    entry = _entry(name)
    p = _coerce_params(entry, params)
    out = _domain_constraints(name, p)
    if not all(c.satisfied for c in out):
        return tuple(out)

    if name == "nginar":
        bound = p["mu"] / (1.0 + p["mu"])
        out.append(_constraint("alpha <= mu/(1+mu)", p["alpha"] <= bound + 1e-12,
                               bound - p["alpha"]))
    elif name in ("rho-geo-bin", "hurdle-geo-bin", "rho-geo-nb", "hurdle-geo-nb"):
        mu, rho, alpha = p["mu"], p["rho"], p["alpha"]
        if name == "hurdle-geo-bin":
            bound = rho / (1.0 + rho)
            out.append(_constraint("mu <= rho/(1+rho)", mu <= bound + 1e-12, bound - mu))
        s1, s2 = _hurdle_roots(name, mu, rho, alpha)
        out.append(_constraint("roots ordered s2 >= s1 > 1",
                               s1 > 1.0 and s2 >= s1 - 1e-12,
                               min(s1 - 1.0, s2 - s1)))
        try:
            _, _, _, w1, _ = _hurdle_params(name, mu, rho, alpha)
            out.append(_constraint("dominant tail weight w1 >= 0", w1 >= -1e-12, w1))
        except ZeroDivisionError:
            out.append(_constraint("dominant tail weight w1 >= 0", False, -math.inf))

    # the numeric check runs whenever the domain admits an innovation pgf,
    # even if a closed-form condition above already failed: the recursion
    # needs no root geometry, so the report stays informative
    try:
        rf = _innovation_rf(name, p)
        out.append(_numeric_pmf_constraint(rf))
    except GeominarError as exc:
        out.append(_constraint(f"innovation pmf nonnegative (numeric: {exc})", False,
                               -math.inf))
    return tuple(out)


def _innovation_rf(name: str, p: dict) -> RationalFunction:
    spec = _model_spec(name, p)
    if spec.marginal is not None:
        return innovation_pgf(spec)
    if name == "zmg":
        mu, k = p["mu"], p["k"]
        num = Polynomial((1.0 + k * mu, -k * mu))
        den = Polynomial((1.0 + mu, -mu))
    else:
        r, m = p["r"], p["m"]
        num = Polynomial((1.0 + r - m, m - r))
        den = Polynomial((1.0 + r, -r))
    return RationalFunction(num, den, radius=-den.coeff(0) / den.coeff(1), pgf=True)


def _model_spec(name: str, p: dict) -> ModelSpec:
    if name == "ginar":
        return ModelSpec(Geometric(p["theta"]), BinomialThinning(p["alpha"]), name)
    if name == "nginar":
        return ModelSpec(GeometricMean(p["mu"]), NegativeBinomialThinning(p["alpha"]), name)
    if name == "rho-geo-bin":
        return ModelSpec(RhoGeometric(p["mu"], p["rho"]), BinomialThinning(p["alpha"]), name)
    if name == "hurdle-geo-bin":
        return ModelSpec(HurdleGeometric(p["mu"], p["rho"]), BinomialThinning(p["alpha"]), name)
    if name == "rho-geo-nb":
        return ModelSpec(RhoGeometric(p["mu"], p["rho"]),
                         NegativeBinomialThinning(p["alpha"]), name)
    if name == "hurdle-geo-nb":
        return ModelSpec(HurdleGeometric(p["mu"], p["rho"]),
                         NegativeBinomialThinning(p["alpha"]), name)
    # innovation-only entries behave as iid models with alpha = 0
    return ModelSpec(None, BinomialThinning(0.0), name)


def closed_form_moments(name: str, **params: float) -> Moments:
    """All six moment fields from closed forms (no table summation)."""
    entry = _entry(name)
    p = _coerce_params(entry, params)
    if name == "ginar":
        theta, alpha = p["theta"], p["alpha"]
        mm = (1.0 - theta) / theta
        mv = (1.0 - theta) / theta ** 2
        im, iv = _linear_moments(alpha, 1.0 / (1.0 - theta))
    elif name == "nginar":
        mu, alpha = p["mu"], p["alpha"]
        mm, mv = mu, mu * (1.0 + mu)
        w2 = alpha * mu / (mu - alpha) if alpha > 0.0 else 0.0
        w1 = 1.0 - w2
        im = w1 * mu + w2 * alpha
        ez2 = w1 * (mu + 2.0 * mu * mu) + w2 * (alpha + 2.0 * alpha * alpha)
        iv = ez2 - im * im
    elif name == "zmg":
        mu, k = p["mu"], p["k"]
        im = (1.0 - k) * mu
        iv = (1.0 - k) * mu * (1.0 + mu + k * mu)
        mm, mv = im, iv
    elif name == "two-param":
        r, m = p["r"], p["m"]
        im = m
        iv = m * (1.0 + 2.0 * r - m)
        mm, mv = im, iv
    else:
        mu, rho, alpha = p["mu"], p["rho"], p["alpha"]
        spec = _model_spec(name, p)
        mm = marginal_mean(spec.marginal)
        mv = marginal_variance(spec.marginal)
        im = mm * (1.0 - alpha)
        iv = _mixture_variance(*_hurdle_params(name, mu, rho, alpha))
    return Moments(mm, mv, mv / mm if mm > 0 else math.nan,
                   im, iv, iv / im if im > 0 else math.nan)


def dispersion_class(m: Moments, tol: float = 1e-12) -> DispersionClass:
    """Classify marginal and innovation as under/equi/over dispersed."""

    def classify(i: float) -> str:
        if abs(i - 1.0) <= tol:
            return "equi"
        return "over" if i > 1.0 else "under"

    return DispersionClass(classify(m.marginal_dispersion),
                           classify(m.innovation_dispersion))


def build_model(name: str, **params: float) -> INARModel:
    """Validate parameters, derive the innovation law by the family's method,
    and attach closed-form moments.

    Raises ValidityViolationError naming the first violated constraint and
    its margin when the parameters are outside the validity region.
    """
    entry = _entry(name)
    p = _coerce_params(entry, params)
    constraints = validate_params(name, **p)
    for c in constraints:
        if not c.satisfied:
            raise ValidityViolationError(
                f"{name}: constraint '{c.name}' violated (margin {c.margin:.6g})")
    spec = _model_spec(name, p)
    rf = _innovation_rf(name, p)
    notes: list[str] = []

    hurdle = None
    if name in ("ginar", "zmg", "two-param"):
        a, b = rf.num.coeff(0), rf.num.coeff(1)
        c_, d = rf.den.coeff(0), rf.den.coeff(1)
        innovation = linear_closed_form(a, b, c_, d)
    elif name == "nginar":
        innovation = pmf_from_decomposition(partial_fractions(rf))
    else:
        hurdle = quadratic_closed_form(rf.num.coeff(2), rf.num.coeff(1), rf.num.coeff(0),
                                       rf.den.coeff(2), rf.den.coeff(1), rf.den.coeff(0))
        innovation = pmf_from_decomposition(hurdle_to_decomposition(hurdle))
        notes.append("innovation variance from the mixture representation "
                     "(matches the pgf derivatives; simplified polynomial "
                     "shortcuts do not)")

    _cross_check(rf, innovation)

    if spec.marginal is not None:
        marg_rf = marginal_pgf(spec.marginal)
    else:
        marg_rf = rf
    moments = closed_form_moments(name, **p)
    return INARModel(name, dict(p), spec, marg_rf, counting_pgf(spec.thinning), rf,
                     innovation, hurdle, moments, tuple(notes))


def _cross_check(rf: RationalFunction, innovation: InnovationDistribution,
                 n: int = 32, tol: float = 1e-9) -> None:
    recursive = pmf_recursive(rf, n)
    for m, expected in enumerate(recursive):
        if abs(innovation.pmf(m) - expected) > tol:
            raise GeominarError(
                f"innovation construction mismatch at m={m}: "
                f"{innovation.pmf(m)!r} (closed form) vs {expected!r} (recursion)")


@dataclass(frozen=True)
class _Entry:
    name: str
    param_names: tuple[str, ...]
    summary: str
    constraints_doc: tuple[str, ...] = field(default=())


_ENTRIES = {
    "ginar": _Entry(
        "ginar", ("theta", "alpha"),
        "geometric marginal, binomial thinning; zero-inflated geometric innovations",
        ("theta in (0,1)", "alpha in [0,1)")),
    "nginar": _Entry(
        "nginar", ("mu", "alpha"),
        "geometric marginal (mean mu), negative binomial thinning",
        ("mu > 0", "alpha in [0, mu/(1+mu)]")),
    "zmg": _Entry(
        "zmg", ("mu", "k"),
        "zero-modified geometric innovation law (iid model, alpha = 0)",
        ("mu > 0", "-1/mu <= k < 1")),
    "two-param": _Entry(
        "two-param", ("r", "m"),
        "two-parameter linear innovation law (iid model, alpha = 0)",
        ("r > 0", "0 < m <= 1 + r")),
    "rho-geo-bin": _Entry(
        "rho-geo-bin", ("mu", "rho", "alpha"),
        "zero-inflated geometric marginal, binomial thinning; hurdle innovations",
        ("mu > 0", "rho in [0,1)", "alpha in [0,1)",
         "root ordering and numeric pmf nonnegativity")),
    "hurdle-geo-bin": _Entry(
        "hurdle-geo-bin", ("mu", "rho", "alpha"),
        "hurdle geometric marginal, binomial thinning; hurdle innovations",
        ("mu in (0,1)", "rho in (0,1)", "alpha in [0,1)",
         "mu <= rho/(1+rho)", "numeric pmf nonnegativity")),
    "rho-geo-nb": _Entry(
        "rho-geo-nb", ("mu", "rho", "alpha"),
        "zero-inflated geometric marginal, negative binomial thinning",
        ("mu > 0", "rho in [0,1)", "alpha in [0,1)",
         "root ordering and numeric pmf nonnegativity")),
    "hurdle-geo-nb": _Entry(
        "hurdle-geo-nb", ("mu", "rho", "alpha"),
        "hurdle geometric marginal, negative binomial thinning",
        ("mu in (0,1)", "rho in (0,1)", "alpha in [0,1)",
         "root ordering and numeric pmf nonnegativity")),
}


def _entry(name: str) -> _Entry:
    try:
        return _ENTRIES[name]
    except KeyError:
        raise ValidityViolationError(
            f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}") from None


def _coerce_params(entry: _Entry, params: Mapping[str, float]) -> dict:
    unknown = set(params) - set(entry.param_names)
    if unknown:
        raise ValidityViolationError(
            f"{entry.name}: unknown parameter(s) {sorted(unknown)}; "
            f"expected {list(entry.param_names)}")
    missing = [n for n in entry.param_names if n not in params]
    if missing:
        raise ValidityViolationError(f"{entry.name}: missing parameter(s) {missing}")
    return {n: float(params[n]) for n in entry.param_names}


def model_entries() -> tuple[_Entry, ...]:
    """Catalog listing for the CLI: names, parameters, constraint summaries."""
    return tuple(_ENTRIES[n] for n in MODEL_NAMES)
