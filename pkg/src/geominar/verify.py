"""Verification oracles: every claim the library makes is checked here.

Checks never raise on failure; they return VerificationReport values whose
entries carry (observed, expected, tolerance) so the CLI can serialize them
and CI can gate on the overall flag. Each check is falsifiable: perturbing a
correct model makes it fail (the test suite injects such faults).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .catalog import INARModel
from .decompose import InnovationDistribution, hurdle_pmf, pmf_recursive, tail_geometric_approx
from .simulate import SeriesSample


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: float
    expected: float
    tolerance: float


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def merged(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(self.checks + other.checks)

    def to_dict(self) -> dict:
        return {"overall": self.overall, "checks": [asdict(c) for c in self.checks]}


def _check(name: str, observed: float, expected: float, tol: float) -> CheckResult:
    return CheckResult(name, bool(abs(observed - expected) <= tol),
                       float(observed), float(expected), float(tol))


def check_pgf_identity(model: INARModel, grid_points: int = 50,
                       tol: float = 1e-10) -> VerificationReport:
    """Stationarity identity phi_X(s) = phi_X(phi_N(s)) * phi_e(s) on a grid.

    phi_e is evaluated from the derived decomposition (atoms plus residue
    terms), so a perturbed residue or root shows up as a deviation.
    """
    worst = 0.0
    for i in range(grid_points):
        s = 0.99 * i / (grid_points - 1) if grid_points > 1 else 0.0
        lhs = model.marginal_rf(s)
        rhs = model.marginal_rf(model.counting_rf(s)) * model.innovation.pgf_value(s)
        worst = max(worst, abs(lhs - rhs))
    return VerificationReport((_check("pgf_identity_max_abs_deviation", worst, 0.0, tol),))


def check_pmf_validity(d: InnovationDistribution, tol: float = 1e-10) -> VerificationReport:
    """Nonnegativity, total mass, and the signed-tail dominance certificate."""
    checks = []
    worst = min(d.pmf_table) if d.pmf_table else 0.0
    checks.append(_check("pmf_min_entry", min(worst, 0.0), 0.0, 1e-12))
    checks.append(_check("pmf_total_mass", d.total_mass(), 1.0, tol))
    terms = d.decomposition.terms
    if len(terms) >= 2 and any(r < 0.0 for r, _ in terms):
        rho_min, s_min = terms[0]
        bound = sum(abs(r) * (s_min / s) ** (d.truncation + 2) for r, s in terms[1:])
        checks.append(_check("tail_dominance_margin", min(rho_min - bound, 0.0), 0.0, 1e-12))
    return VerificationReport(tuple(checks))


def check_cross_method(model: INARModel, n: int = 200,
                       tol: float = 1e-10) -> VerificationReport:
    """Entrywise agreement of the recursion, the residue decomposition, and
    (when the model has one) the hurdle closed form, for m <= n."""
    recursive = pmf_recursive(model.innovation_rf, n)
    dec = model.innovation.decomposition
    worst_rd = max(abs(dec.pmf(m) - recursive[m]) for m in range(n + 1))
    checks = [_check("recursion_vs_decomposition", worst_rd, 0.0, tol)]
    if model.hurdle is not None:
        worst_h = max(abs(hurdle_pmf(model.hurdle, m) - recursive[m]) for m in range(n + 1))
        checks.append(_check("recursion_vs_hurdle_form", worst_h, 0.0, tol))
    return VerificationReport(tuple(checks))


def _ess_factor(alpha: float) -> float:
    return (1.0 + alpha) / (1.0 - alpha)


def _marginal_central_moments(model: INARModel) -> tuple[float, float, float, float]:
    """mean, m2, m3, m4 of the marginal law, summed to negligible tail."""
    mean = model.moments.marginal_mean
    var = model.moments.marginal_var
    span = int(mean + 40.0 * math.sqrt(var) + 60)
    ks = np.arange(span + 1)
    ps = np.array([model.marginal_pmf(int(k)) for k in ks])
    mu = float(ps @ ks)
    centered = ks - mu
    m2 = float(ps @ centered**2)
    m3 = float(ps @ centered**3)
    m4 = float(ps @ centered**4)
    return mu, m2, m3, m4


def check_moments(model: INARModel, sample: SeriesSample,
                  rel_tol: float = 1e-7, n_se: float = 4.0) -> VerificationReport:
    """Three-way moment comparison.

    Closed forms vs pmf sums at rel_tol; empirical values from the sample vs
    closed forms within n_se standard errors, inflated by the effective
    sample size factor (1+alpha)/(1-alpha) for the autocorrelated series.
    """
    checks = []
    mom = model.moments

    pm_mean = model.innovation.mean()
    pm_var = model.innovation.variance()
    checks.append(_check("innovation_mean_pmf_vs_closed", pm_mean, mom.innovation_mean,
                         rel_tol * max(1.0, abs(mom.innovation_mean))))
    checks.append(_check("innovation_var_pmf_vs_closed", pm_var, mom.innovation_var,
                         rel_tol * max(1.0, abs(mom.innovation_var))))
    mg_mean, mg_m2, mg_m3, mg_m4 = _marginal_central_moments(model)
    checks.append(_check("marginal_mean_pmf_vs_closed", mg_mean, mom.marginal_mean,
                         rel_tol * max(1.0, abs(mom.marginal_mean))))
    checks.append(_check("marginal_var_pmf_vs_closed", mg_m2, mom.marginal_var,
                         rel_tol * max(1.0, abs(mom.marginal_var))))

    xs = sample.values.astype(np.float64)
    n = len(xs)
    alpha = model.alpha
    ess = _ess_factor(alpha)
    emp_mean = float(xs.mean())
    emp_var = float(xs.var())
    se_mean = math.sqrt(mom.marginal_var * ess / n)
    se_var = math.sqrt(max(mg_m4 - mg_m2**2, 0.0) * ess / n)
    checks.append(_check("marginal_mean_empirical", emp_mean, mom.marginal_mean,
                         n_se * se_mean))
    checks.append(_check("marginal_var_empirical", emp_var, mom.marginal_var,
                         n_se * se_var))
    disp = mom.marginal_dispersion
    mean, var = mom.marginal_mean, mom.marginal_var
    # delta method for var/mean including the mean-variance covariance m3/n
    g_var = (se_var / mean) ** 2 + (var * se_mean / mean**2) ** 2 \
        - 2.0 * var / mean**3 * mg_m3 * ess / n
    se_disp = math.sqrt(max(g_var, 1e-30))
    checks.append(_check("marginal_dispersion_empirical", emp_var / emp_mean, disp,
                         n_se * se_disp))
    if n > 2:
        centered = xs - emp_mean
        lag1 = float(centered[1:] @ centered[:-1] / (centered @ centered))
        checks.append(_check("lag1_autocorrelation_empirical", lag1, alpha,
                             n_se * (1.0 + 2.0 * alpha) / math.sqrt(n)))
    return VerificationReport(tuple(checks))


def check_tail_quality(d: InnovationDistribution, m_start: int = 5) -> VerificationReport:
    """Relative error of the smallest-root geometric tail at m, 2m, 4m.

    Passes iff the error sequence is strictly decreasing; vacuously true for
    single-term decompositions, where the approximation is exact.
    """
    if len(d.decomposition.terms) < 2:
        return VerificationReport(
            (CheckResult("tail_error_strictly_decreasing", True, 0.0, 0.0, 0.0),))
    errs = []
    for m in (m_start, 2 * m_start, 4 * m_start):
        exact = d.pmf(m)
        approx = tail_geometric_approx(d.decomposition, m)
        errs.append(abs(approx - exact) / abs(exact) if exact != 0.0 else math.inf)
    decreasing = errs[0] > errs[1] > errs[2]
    checks = [CheckResult("tail_error_strictly_decreasing", bool(decreasing),
                          errs[2], 0.0, errs[0])]
    for m, e in zip((m_start, 2 * m_start, 4 * m_start), errs):
        checks.append(CheckResult(f"tail_rel_error_m{m}", bool(decreasing), e, 0.0,
                                  math.inf))
    return VerificationReport(tuple(checks))


def run_all_checks(model: INARModel, sample: SeriesSample,
                   grid_points: int = 50, cross_n: int = 200,
                   tol: float = 1e-10) -> VerificationReport:
    """The full suite behind the CLI verify subcommand."""
    report = check_pgf_identity(model, grid_points, tol)
    report = report.merged(check_pmf_validity(model.innovation, tol))
    report = report.merged(check_cross_method(model, cross_n, tol))
    report = report.merged(check_moments(model, sample))
    report = report.merged(check_tail_quality(model.innovation))
    return report
