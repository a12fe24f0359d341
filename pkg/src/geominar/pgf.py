"""Marginal, counting-series and innovation probability generating functions.

The stationary law of an INAR(1) process X_t = a (.) X_{t-1} + e_t ties three
pgfs together: phi_X(s) = phi_X(phi_N(s)) * phi_e(s), where phi_N is the pgf
of the thinning counting series. Given a rational marginal pgf and an affine
or Moebius counting pgf, the innovation pgf is the rational quotient
phi_X(s) / phi_X(phi_N(s)); this module builds all three as RationalFunction
values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DegenerateModelError, DomainViolationError, InvalidParameterError
from .polyrat import (
    Polynomial,
    RationalFunction,
    cancel,
    compose_mobius,
    min_denominator_root_magnitude,
)


@dataclass(frozen=True)
class Geometric:
    """Geometric marginal on {0,1,...}: Pr[X=m] = (1-theta)^m * theta."""

    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise InvalidParameterError(f"Geometric requires theta in (0,1), got {self.theta!r}")


@dataclass(frozen=True)
class GeometricMean:
    """Geometric marginal parameterized by its mean mu: Pr[X=m] = (mu/(1+mu))^m / (1+mu)."""

    mu: float

    def __post_init__(self):
        if not self.mu > 0.0:
            raise InvalidParameterError(f"GeometricMean requires mu > 0, got {self.mu!r}")


@dataclass(frozen=True)
class RhoGeometric:
    """Zero-inflated (rho-)geometric marginal with mean mu/(1-rho).

    Pr[X=m] = rho/(mu+rho) at 0 plus the complementary geometric component
    with ratio (mu+rho)/(1+mu).
    """

    mu: float
    rho: float

    def __post_init__(self):
        if not self.mu > 0.0:
            raise InvalidParameterError(f"RhoGeometric requires mu > 0, got {self.mu!r}")
        if not 0.0 <= self.rho < 1.0:
            raise InvalidParameterError(f"RhoGeometric requires rho in [0,1), got {self.rho!r}")


@dataclass(frozen=True)
class HurdleGeometric:
    """Hurdle geometric marginal: 1-mu at zero, shifted geometric above.

    Pr[X=0] = 1-mu and Pr[X=m] = mu * (rho/(1+rho))^(m-1) / (1+rho) for m >= 1.
    """

    mu: float
    rho: float

    def __post_init__(self):
        if not 0.0 < self.mu < 1.0:
            raise InvalidParameterError(f"HurdleGeometric requires mu in (0,1), got {self.mu!r}")
        if not 0.0 < self.rho < 1.0:
            raise InvalidParameterError(f"HurdleGeometric requires rho in (0,1), got {self.rho!r}")


MarginalSpec = Union[Geometric, GeometricMean, RhoGeometric, HurdleGeometric]


@dataclass(frozen=True)
class BinomialThinning:
    """Binomial thinning: counting series of iid Bernoulli(alpha) variables."""

    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise InvalidParameterError(f"thinning requires alpha in [0,1), got {self.alpha!r}")


@dataclass(frozen=True)
class NegativeBinomialThinning:
    """Negative binomial thinning: counting series of iid geometrics with mean alpha."""

    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise InvalidParameterError(f"thinning requires alpha in [0,1), got {self.alpha!r}")


ThinningOperator = Union[BinomialThinning, NegativeBinomialThinning]


@dataclass(frozen=True)
class ModelSpec:
    """Marginal plus thinning operator; marginal is None for pure-innovation
    catalog entries, which behave as iid models with alpha = 0."""

    marginal: MarginalSpec | None
    thinning: ThinningOperator
    label: str = ""


def marginal_pgf(m: MarginalSpec) -> RationalFunction:
    """Rational pgf of the marginal, with its analytic validity radius."""
    if isinstance(m, Geometric):
        q = 1.0 - m.theta
        return RationalFunction(Polynomial((m.theta,)), Polynomial((1.0, -q)),
                                radius=1.0 / q, pgf=True)
    if isinstance(m, GeometricMean):
        return RationalFunction(Polynomial((1.0,)), Polynomial((1.0 + m.mu, -m.mu)),
                                radius=(1.0 + m.mu) / m.mu, pgf=True)
    if isinstance(m, RhoGeometric):
        num = Polynomial((1.0, -m.rho))
        den = Polynomial((1.0 + m.mu, -(m.rho + m.mu)))
        return RationalFunction(num, den, radius=(1.0 + m.mu) / (m.rho + m.mu), pgf=True)
    if isinstance(m, HurdleGeometric):
        k = m.mu + m.mu * m.rho - m.rho
        num = Polynomial((1.0 - k, k))
        den = Polynomial((1.0 + m.rho, -m.rho))
        return RationalFunction(num, den, radius=(1.0 + m.rho) / m.rho, pgf=True)
    raise InvalidParameterError(f"unknown marginal kind {type(m).__name__}")


def marginal_mean(m: MarginalSpec) -> float:
    if isinstance(m, Geometric):
        return (1.0 - m.theta) / m.theta
    if isinstance(m, GeometricMean):
        return m.mu
    if isinstance(m, RhoGeometric):
        return m.mu / (1.0 - m.rho)
    if isinstance(m, HurdleGeometric):
        return m.mu * (1.0 + m.rho)
    raise InvalidParameterError(f"unknown marginal kind {type(m).__name__}")


def marginal_variance(m: MarginalSpec) -> float:
    if isinstance(m, Geometric):
        q = 1.0 - m.theta
        return q / (m.theta * m.theta)
    if isinstance(m, GeometricMean):
        return m.mu * (1.0 + m.mu)
    if isinstance(m, RhoGeometric):
        return m.mu * (1.0 + m.mu + m.rho) / (1.0 - m.rho) ** 2
    if isinstance(m, HurdleGeometric):
        return m.mu * (1.0 + m.rho) * (m.rho + (1.0 + m.rho) * (1.0 - m.mu))
    raise InvalidParameterError(f"unknown marginal kind {type(m).__name__}")


def marginal_pmf(m: MarginalSpec, k: int) -> float:
    """Closed-form marginal probability mass at k."""
    if k < 0:
        return 0.0
    if isinstance(m, Geometric):
        return (1.0 - m.theta) ** k * m.theta
    if isinstance(m, GeometricMean):
        r = m.mu / (1.0 + m.mu)
        return r ** k / (1.0 + m.mu)
    if isinstance(m, RhoGeometric):
        atom = m.rho / (m.mu + m.rho)
        r = (m.mu + m.rho) / (1.0 + m.mu)
        body = (1.0 - atom) * r ** k * (1.0 - m.rho) / (1.0 + m.mu)
        return body + (atom if k == 0 else 0.0)
    if isinstance(m, HurdleGeometric):
        if k == 0:
            return 1.0 - m.mu
        r = m.rho / (1.0 + m.rho)
        return m.mu * r ** (k - 1) / (1.0 + m.rho)
    raise InvalidParameterError(f"unknown marginal kind {type(m).__name__}")


def counting_pgf(t: ThinningOperator) -> RationalFunction:
    """Pgf of one counting-series variable: affine for binomial thinning,
    Moebius 1/(1+alpha-alpha*s) for negative binomial thinning."""
    a = t.alpha
    if isinstance(t, BinomialThinning):
        return RationalFunction(Polynomial((1.0 - a, a)), Polynomial((1.0,)),
                                radius=math.inf, pgf=True)
    if isinstance(t, NegativeBinomialThinning):
        if a == 0.0:
            return RationalFunction(Polynomial((1.0,)), Polynomial((1.0,)),
                                    radius=math.inf, pgf=True)
        return RationalFunction(Polynomial((1.0,)), Polynomial((1.0 + a, -a)),
                                radius=(1.0 + a) / a, pgf=True)
    raise InvalidParameterError(f"unknown thinning kind {type(t).__name__}")


def innovation_pgf(spec: ModelSpec) -> RationalFunction:
    """Innovation pgf phi_e = phi_X / phi_X(phi_N) as a cancelled rational.

    The validity radius of the result is the smallest denominator root
    magnitude; evaluation beyond it raises rather than extrapolates.
    """
    if spec.marginal is None:
        raise InvalidParameterError("innovation_pgf needs a marginal; "
                                    "pure-innovation models supply their pgf directly")
    phi_x = marginal_pgf(spec.marginal)
    phi_n = counting_pgf(spec.thinning)
    composed = compose_mobius(phi_x, phi_n)
    quotient = RationalFunction(phi_x.num * composed.den, phi_x.den * composed.num,
                                radius=math.inf, pgf=True)
    rf = cancel(quotient)
    radius = min_denominator_root_magnitude(rf.den)
    rf = RationalFunction(rf.num, rf.den, radius=radius, pgf=True)
    for i in range(33):
        if rf.den(i / 32.0) <= 0.0:
            raise DomainViolationError("innovation denominator vanishes on [0, 1]")
    if rf.is_constant():
        if spec.thinning.alpha > 0.0:
            raise DegenerateModelError("innovation collapsed to a point mass at zero "
                                       "while alpha > 0")
    if rf.num(0.0) >= 1.0 and rf.num.degree + rf.den.degree > 0:
        raise DegenerateModelError(f"innovation pgf at 0 is {rf.num(0.0)!r} >= 1")
    return rf
