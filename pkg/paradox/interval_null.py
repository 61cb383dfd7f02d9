"""Interval nulls H0: |theta - theta0| <= delta.

The Bayes factor is a ratio of two likelihood-times-prior integrals, both
carried in log space: each piece of a region is integrated with the
likelihood scaled by its value at the piece's best point, and the scale is
added back as a log. B01 passes 10^4000 along the just-significant sequence,
so only the log is always returned.
"""

import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import special

from . import config
from .errors import DomainError, provenance
from .numerics import integrate, std_normal_quantile, two_sided_p_value
from .point_null import LOG_2PI, _check_alpha, point_null_report, unit_information_prior
from .schemas import (
    EquivalenceVerdict,
    IntervalBayesFactor,
    IntervalNullSpec,
    LaplaceExpansion,
    ParadoxClassification,
    PriorSpec,
    QuadratureSettings,
    Scenario,
    TruncatedNormalPrior,
)

logger = logging.getLogger(__name__)

LOG_2 = math.log(2.0)


# ----------------------------
# region priors
# ----------------------------
def _log_band_mass(scale: float, a: float, b: float) -> float:
    """log P(a <= |U| <= b) for U ~ N(0, scale^2), kept accurate in the far tail."""
    upper = special.log_ndtr(-a / scale)
    lower = special.log_ndtr(-b / scale)
    return LOG_2 + upper + math.log1p(-math.exp(lower - upper))


def _region_log_pdf(prior, theta0: float, a: float, b: float) -> Callable[[float], float]:
    """Log density of ``prior`` placed on the band a <= |theta - theta0| <= b."""
    if isinstance(prior, TruncatedNormalPrior):
        s = prior.scale
        log_norm = -math.log(s) - 0.5 * LOG_2PI - _log_band_mass(s, a, b)
        return lambda theta: log_norm - 0.5 * ((theta - theta0) / s) ** 2
    log_uniform = -math.log(2.0 * (b - a))
    return lambda theta: log_uniform


def _inside(spec: IntervalNullSpec, theta0: float) -> Tuple[List[Tuple[float, float]], Callable[[float], float]]:
    pieces = [(theta0 - spec.delta, theta0 + spec.delta)]
    return pieces, _region_log_pdf(spec.inside_prior, theta0, 0.0, spec.delta)


def _outside(spec: IntervalNullSpec, theta0: float) -> Tuple[List[Tuple[float, float]], Callable[[float], float]]:
    pieces = [(theta0 - spec.outer_bound, theta0 - spec.delta), (theta0 + spec.delta, theta0 + spec.outer_bound)]
    return pieces, _region_log_pdf(spec.outside_prior, theta0, spec.delta, spec.outer_bound)


def prior_normalization(spec: IntervalNullSpec, settings: Optional[QuadratureSettings] = None) -> Tuple[float, float]:
    """Prior mass of the inside and outside regions by quadrature; both should be 1."""
    masses = []
    for pieces, log_pdf in (_inside(spec, 0.0), _outside(spec, 0.0)):
        total = 0.0
        for lo, hi in pieces:
            total += integrate(lambda theta: math.exp(log_pdf(theta)), lo, hi, settings, points=[0.0])
        masses.append(total)
    return masses[0], masses[1]


# ----------------------------
# Bayes factor
# ----------------------------
def _log_likelihood(scenario: Scenario) -> Callable[[float], float]:
    se = scenario.standard_error
    xbar = scenario.xbar
    log_norm = -math.log(se) - 0.5 * LOG_2PI
    return lambda theta: log_norm - 0.5 * ((xbar - theta) / se) ** 2


def _log_region_integral(
    scenario: Scenario,
    pieces: List[Tuple[float, float]],
    log_prior: Callable[[float], float],
    settings: Optional[QuadratureSettings],
) -> float:
    se, xbar = scenario.standard_error, scenario.xbar
    log_lik = _log_likelihood(scenario)
    logs = []
    for lo, hi in pieces:
        peak = min(max(xbar, lo), hi)
        shift = log_lik(peak) + log_prior(peak)
        # beyond this reach the scaled likelihood is below exp(-LIKELIHOOD_WINDOW)
        reach = math.sqrt((xbar - peak) ** 2 + 2.0 * config.LIKELIHOOD_WINDOW * se * se)
        a, b = max(lo, xbar - reach), min(hi, xbar + reach)

        def scaled(theta: float) -> float:
            return math.exp(log_lik(theta) + log_prior(theta) - shift)

        mass = integrate(scaled, a, b, settings, points=[peak])
        logs.append(math.log(mass) + shift if mass > 0.0 else -math.inf)
    return float(np.logaddexp.reduce(logs))


def interval_bf01(
    scenario: Scenario, spec: IntervalNullSpec, settings: Optional[QuadratureSettings] = None
) -> IntervalBayesFactor:
    """B01 for the interval null against its complement, truncated at the outer bound."""
    log_num = _log_region_integral(scenario, *_inside(spec, scenario.theta0), settings)
    log_den = _log_region_integral(scenario, *_outside(spec, scenario.theta0), settings)

    se, xbar, theta0 = scenario.standard_error, scenario.xbar, scenario.theta0
    tail = float(
        special.ndtr((theta0 - spec.outer_bound - xbar) / se) + special.ndtr((xbar - theta0 - spec.outer_bound) / se)
    )
    result = IntervalBayesFactor(
        log_bf01=log_num - log_den, log_numerator=log_num, log_denominator=log_den, tail_mass=tail
    )
    logger.debug("interval log B01 = %.6g (n=%d, z=%g, delta=%g)", result.log_bf01, scenario.n, scenario.z, spec.delta)
    return result


# ----------------------------
# Laplace expansion
# ----------------------------
LAPLACE_TERMS = (
    "log B01 ~ t^2/2 + log t + [log pi0(xbar) - log pi1(boundary) + log(2 pi)/2], "
    "t = (delta - |xbar - theta0|) sqrt(n) / sigma at the nearest boundary; numerator by Laplace at the "
    "MLE (the likelihood integrates to 1 inside), denominator by the Mills ratio at each boundary; "
    "relative error O(1/t^2)"
)


def laplace_expansion(scenario: Scenario, delta: float, spec: Optional[IntervalNullSpec] = None) -> LaplaceExpansion:
    """Asymptotic log B01 once the MLE sits inside the interval.

    Default priors are the uniform ones of :meth:`IntervalNullSpec.with_defaults`.
    """
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    if spec is None:
        spec = IntervalNullSpec.with_defaults(delta, scenario.sigma)
    elif not math.isclose(spec.delta, delta):
        raise DomainError(f"delta {delta} disagrees with the interval spec ({spec.delta})")

    offset = scenario.xbar - scenario.theta0
    if abs(offset) >= delta:
        raise DomainError(
            f"the MLE {scenario.xbar:.6g} lies outside [theta0 - delta, theta0 + delta]; "
            "the Laplace expansion does not apply"
        )
    se = scenario.standard_error
    _, log_pi0 = _inside(spec, scenario.theta0)
    _, log_pi1 = _outside(spec, scenario.theta0)

    sides = []
    for boundary, t in (
        (scenario.theta0 + delta, (delta - offset) / se),
        (scenario.theta0 - delta, (delta + offset) / se),
    ):
        sides.append((log_pi1(boundary) - 0.5 * t * t - math.log(t) - 0.5 * LOG_2PI, t))
    log_den = float(np.logaddexp(sides[0][0], sides[1][0]))
    log_bf01 = log_pi0(scenario.xbar) - log_den

    t_near = min(t for _, t in sides)
    exponential = 0.5 * t_near * t_near
    log_term = math.log(t_near)
    return LaplaceExpansion(
        log_bf01=log_bf01,
        leading_term=scenario.n * delta * delta / (2.0 * scenario.sigma ** 2),
        exponential_term=exponential,
        log_term=log_term,
        constant_term=log_bf01 - exponential - log_term,
        terms=LAPLACE_TERMS,
    )


def laplace_log_bf01(scenario: Scenario, delta: float, spec: Optional[IntervalNullSpec] = None) -> float:
    return laplace_expansion(scenario, delta, spec).log_bf01


# ----------------------------
# TOST
# ----------------------------
def tost_equivalence(scenario: Scenario, delta: float, alpha: float) -> EquivalenceVerdict:
    """Two one-sided z tests of |theta - theta0| < delta (known sigma)."""
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"TOST needs alpha in (0, 0.5), got {alpha}")
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    se = scenario.standard_error
    lower_t = (scenario.xbar - (scenario.theta0 - delta)) / se
    upper_t = ((scenario.theta0 + delta) - scenario.xbar) / se
    critical = std_normal_quantile(1.0 - alpha)
    p_value = float(max(special.ndtr(-lower_t), special.ndtr(-upper_t)))
    return EquivalenceVerdict(
        lower_t=lower_t,
        upper_t=upper_t,
        critical_value=critical,
        p_value=p_value,
        concluded_equivalence=bool(lower_t > critical and upper_t > critical),
        alpha=alpha,
    )


# ----------------------------
# agreement
# ----------------------------
def classify(
    p_value: float,
    alpha: float,
    posterior_h0: float,
    reference_posterior_h0: float,
    interval_log_bf01: float,
    tost_concluded: bool,
) -> Tuple[str, str, str]:
    """(point-null label, interval label, overall label).

    A point-null conflict is ``bartlett-inflated`` when it disappears under
    the unit-information slab (``reference_posterior_h0``), otherwise
    ``jl-conflict``. All comparisons are strict.
    """
    reject = p_value < alpha
    if reject and posterior_h0 > 1.0 - alpha:
        point = "jl-conflict" if reference_posterior_h0 > 1.0 - alpha else "bartlett-inflated"
    elif reject and posterior_h0 < 0.5:
        point = "agreement-reject-h0"
    elif not reject and posterior_h0 > 0.5:
        point = "agreement-support-h0"
    else:
        point = "indeterminate"

    if tost_concluded and interval_log_bf01 > 0.0:
        interval = "agreement-support-h0"
    elif not tost_concluded and interval_log_bf01 < 0.0:
        interval = "agreement-reject-h0"
    else:
        interval = "indeterminate"

    if point in ("jl-conflict", "bartlett-inflated"):
        overall = point
    elif interval == "agreement-support-h0":
        overall = interval
    elif point == interval == "agreement-reject-h0":
        overall = point
    else:
        overall = "indeterminate"
    return point, interval, overall


def agreement_report(
    scenario: Scenario,
    prior: PriorSpec,
    spec: IntervalNullSpec,
    alpha: float,
    settings: Optional[QuadratureSettings] = None,
) -> ParadoxClassification:
    """Point-null test and posterior next to the interval Bayes factor and TOST."""
    _check_alpha(alpha)
    p_value = two_sided_p_value(scenario.z)
    with provenance("point_null"):
        report = point_null_report(scenario, prior)
        reference = point_null_report(scenario, unit_information_prior(prior, scenario.sigma))
    with provenance("interval_bf01"):
        ibf = interval_bf01(scenario, spec, settings)
    with provenance("tost_equivalence"):
        tost = tost_equivalence(scenario, spec.delta, alpha)

    point, interval, overall = classify(
        p_value, alpha, report.posterior_h0, reference.posterior_h0, ibf.log_bf01, tost.concluded_equivalence
    )
    logger.info("classified n=%d z=%g: %s (point %s, interval %s)", scenario.n, scenario.z, overall, point, interval)
    return ParadoxClassification(
        point_null_frequentist="reject" if p_value < alpha else "retain",
        point_null_p_value=p_value,
        point_null_bayes_posterior=report.posterior_h0,
        interval_bayes_bf01=ibf.bf01,
        interval_log_bf01=ibf.log_bf01,
        tost=tost,
        point_null_label=point,
        interval_label=interval,
        label=overall,
    )
