"""Posterior probability of a point null under a spike-and-slab prior.

All posteriors go through log odds so that z up to 40 and n up to 1e12 stay
representable: ``P(H0 | x) = expit(log prior odds + log B01)``.
"""

import logging
import math
from typing import Optional

import numpy as np
from pydantic import ValidationError
from scipy import special

from . import config
from .errors import DomainError
from .numerics import integrate, std_normal_quantile
from .schemas import (
    BayesReport,
    CalibrationSpec,
    ConjugateSlab,
    PriorSpec,
    QuadratureSettings,
    Scenario,
    UniformSlab,
)

logger = logging.getLogger(__name__)

LOG_2PI = math.log(2.0 * math.pi)


def _check_c(c: float) -> float:
    c = float(c)
    if not 0.0 < c < 1.0:
        raise DomainError(f"mass on the null must lie in (0, 1), got {c}")
    return c


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def _check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return value


def _check_n(n: float) -> float:
    if not n >= 1:
        raise DomainError(f"sample size must be at least 1, got {n}")
    return n


def critical_z(alpha: float, quote_z: bool = False) -> float:
    """lambda_{alpha/2}; ``quote_z`` swaps in the rounded 1.96 for alpha = 0.05."""
    alpha = _check_alpha(alpha)
    if quote_z and math.isclose(alpha, 0.05):
        return config.QUOTED_Z
    return std_normal_quantile(1.0 - alpha / 2.0)


def just_significant_mean(theta0: float, sigma: float, n: int, alpha: float) -> float:
    sigma = _check_positive(sigma, "sigma")
    _check_n(n)
    return theta0 + critical_z(alpha) * sigma / math.sqrt(n)


def resolve_scenario(
    theta0: float = config.DEFAULT_THETA0,
    sigma: float = config.DEFAULT_SIGMA,
    n: Optional[int] = None,
    z: Optional[float] = None,
    alpha: Optional[float] = None,
    xbar: Optional[float] = None,
    quote_z: bool = False,
) -> Scenario:
    """Build a Scenario from whichever of z, alpha and the sample mean were given.

    When more than one is given they must describe the same z.
    """
    if n is None:
        raise DomainError("a scenario needs a sample size n")
    sources = {}
    if z is not None:
        sources["z"] = float(z)
    if alpha is not None:
        sources["alpha"] = critical_z(alpha, quote_z)
    if xbar is not None:
        sources["xbar"] = (xbar - theta0) * math.sqrt(n) / _check_positive(sigma, "sigma")
    if not sources:
        raise DomainError("a scenario needs one of z, alpha or xbar")

    values = list(sources.values())
    if max(values) - min(values) > config.Z_AGREEMENT_TOL:
        described = ", ".join(f"{k} -> z={v:.12g}" for k, v in sources.items())
        raise DomainError(f"inconsistent scenario: {described}")
    try:
        return Scenario(theta0=theta0, sigma=sigma, n=n, z=values[0])
    except ValidationError as exc:
        raise DomainError(f"invalid scenario: {exc.errors()[0]['msg']}") from exc


# ----------------------------
# Lindley / Bartlett closed forms
# ----------------------------
def _log_slab_weight(c: float, sigma: float, n: float, width: float = 1.0) -> float:
    # log of ((1 - c) / I) * sigma * sqrt(2 pi / n)
    return math.log1p(-c) - math.log(width) + math.log(sigma) + 0.5 * (LOG_2PI - math.log(n))


def _log_point_odds(c: float, z: float, sigma: float, n: float, width: float = 1.0) -> float:
    return math.log(c) - 0.5 * z * z - _log_slab_weight(c, sigma, n, width)


def lindley_log_odds(c: float, z: float, sigma: float, n: float) -> float:
    return _log_point_odds(c, z, sigma, n)


def lindley_posterior(c: float, z: float, sigma: float, n: float) -> float:
    """Lindley's posterior for the point null, with the slab density left implicit."""
    c = _check_c(c)
    sigma = _check_positive(sigma, "sigma")
    _check_n(n)
    return float(special.expit(_log_point_odds(c, z, sigma, n)))


def bartlett_posterior(c: float, z: float, sigma: float, n: float, interval_width: float) -> float:
    """Lindley's posterior with the uniform slab density 1/I restored."""
    c = _check_c(c)
    sigma = _check_positive(sigma, "sigma")
    width = _check_positive(interval_width, "interval width")
    _check_n(n)
    return float(special.expit(_log_point_odds(c, z, sigma, n, width)))


def laplace_uniform_posterior_odds(c: float, z: float, sigma: float, n: float, width: float) -> float:
    """(c/(1-c)) * I * sqrt(n / (2 pi sigma^2)) * exp(-z^2/2): Laplace on the slab integral."""
    c = _check_c(c)
    sigma = _check_positive(sigma, "sigma")
    width = _check_positive(width, "interval width")
    _check_n(n)
    log_odds = (
        math.log(c) - math.log1p(-c) + math.log(width)
        + 0.5 * (math.log(n) - LOG_2PI) - math.log(sigma) - 0.5 * z * z
    )
    return math.exp(log_odds)


def uniform_slab_log_bf01(scenario: Scenario, width: float, settings: Optional[QuadratureSettings] = None) -> float:
    """Exactly normalised log B01 for a uniform slab of width I centred on theta0.

    The H1 marginal is the quadrature of the likelihood over the slab, times 1/I.
    """
    width = _check_positive(width, "interval width")
    se = scenario.standard_error
    lo, hi = scenario.theta0 - width / 2.0, scenario.theta0 + width / 2.0
    log_f0 = -0.5 * scenario.z ** 2 - math.log(se) - 0.5 * LOG_2PI

    # likelihood scaled by its peak inside the slab so the integral stays O(se)
    peak = min(max(scenario.xbar, lo), hi)
    log_peak = -0.5 * ((scenario.xbar - peak) / se) ** 2

    def scaled(theta: float) -> float:
        return math.exp(-0.5 * ((scenario.xbar - theta) / se) ** 2 - log_peak)

    # the window always contains the peak
    reach = math.sqrt((scenario.xbar - peak) ** 2 + 2.0 * config.LIKELIHOOD_WINDOW * se * se)
    a, b = max(lo, scenario.xbar - reach), min(hi, scenario.xbar + reach)
    mass = integrate(scaled, a, b, settings, points=[peak])
    log_m1 = math.log(mass) + log_peak - math.log(se) - 0.5 * LOG_2PI - math.log(width)
    return log_f0 - log_m1


def uniform_slab_bf01(scenario: Scenario, width: float, settings: Optional[QuadratureSettings] = None) -> float:
    return math.exp(uniform_slab_log_bf01(scenario, width, settings))


# ----------------------------
# conjugate normal slab
# ----------------------------
def _conjugate_log_bf01(z, n, tau):
    """Vectorised log B01; accepts numpy arrays for z."""
    info = n * tau * tau
    shrink = info / (1.0 + info)
    return 0.5 * np.log1p(info) - 0.5 * np.square(z) * shrink


def conjugate_log_bf01(z: float, n: float, tau: float) -> float:
    tau = float(tau)
    if not tau >= 0.0 or not math.isfinite(tau):
        raise DomainError(f"tau must be nonnegative and finite, got {tau}")
    _check_n(n)
    return float(_conjugate_log_bf01(float(z), float(n), tau))


def conjugate_bf01(z: float, n: float, tau: float) -> float:
    """sqrt(1 + n tau^2) * exp(-(z^2/2) * n tau^2 / (1 + n tau^2))."""
    return math.exp(conjugate_log_bf01(z, n, tau))


# ----------------------------
# reports
# ----------------------------
def report_from_log_bf(
    log_bf01: float, c: float, scenario: Optional[Scenario] = None, prior: Optional[PriorSpec] = None
) -> BayesReport:
    c = _check_c(c)
    log_odds = math.log(c) - math.log1p(-c) + log_bf01
    return BayesReport(
        bf01=math.exp(log_bf01) if log_bf01 < 709.0 else math.inf,
        log_bf01=log_bf01,
        posterior_h0=float(special.expit(log_odds)),
        posterior_odds=math.exp(log_odds) if log_odds < 709.0 else math.inf,
        scenario=scenario,
        prior=prior,
    )


def posterior_from_bf(bf01: float, c: float) -> BayesReport:
    bf01 = _check_positive(bf01, "Bayes factor")
    return report_from_log_bf(math.log(bf01), c)


def point_null_report(scenario: Scenario, prior: PriorSpec) -> BayesReport:
    """Posterior of the point null under ``prior``, whichever slab it carries."""
    slab = prior.slab
    if isinstance(slab, UniformSlab):
        # Bartlett form: B01 = I * exp(-z^2/2) / (sigma * sqrt(2 pi / n))
        log_bf01 = (
            math.log(slab.width) - 0.5 * scenario.z ** 2
            - math.log(scenario.sigma) - 0.5 * (LOG_2PI - math.log(scenario.n))
        )
    elif isinstance(slab, ConjugateSlab):
        log_bf01 = conjugate_log_bf01(scenario.z, scenario.n, slab.tau)
    else:
        raise DomainError(f"unsupported slab {slab!r}")
    return report_from_log_bf(log_bf01, prior.mass_on_null, scenario, prior)


def unit_information_prior(prior: PriorSpec, sigma: float) -> PriorSpec:
    """Same spike, slab rescaled to carry one observation's worth of information."""
    if isinstance(prior.slab, UniformSlab):
        slab = UniformSlab(width=sigma * math.sqrt(12.0))
    else:
        slab = ConjugateSlab(tau=1.0)
    return PriorSpec(mass_on_null=prior.mass_on_null, slab=slab)


# ----------------------------
# calibrated prior odds
# ----------------------------
def calibrated_posterior_odds(z: float, n: int, sigma0_over_sigma: float, spec: CalibrationSpec) -> float:
    """Posterior odds on H0 when the prior odds are tied to the slab scale.

    literal: rho0 = 1 - k * (sigma0/sigma), defined only below sigma0/sigma = 1/k.
    odds-cancellation: prior odds q / (sigma0/sigma); the result tends to
    q * sqrt(n) * exp(-z^2/2) as the slab widens.
    """
    ratio = _check_positive(sigma0_over_sigma, "sigma0/sigma")
    log_bf01 = conjugate_log_bf01(z, n, ratio)
    if spec.mode == "literal":
        bound = 1.0 / spec.constant
        if ratio >= bound:
            raise DomainError(
                f"literal calibration needs sigma0/sigma < 1/k = {bound:.6g}, got {ratio:.6g}"
            )
        rho0 = 1.0 - spec.constant * ratio
        log_prior_odds = math.log(rho0) - math.log1p(-rho0)
    else:
        log_prior_odds = math.log(spec.constant) - math.log(ratio)
    logger.debug("calibrated odds (%s, constant=%g, ratio=%g)", spec.mode, spec.constant, ratio)
    log_odds = log_prior_odds + log_bf01
    return math.exp(log_odds) if log_odds < 709.0 else math.inf


def calibration_limit(z: float, n: int, q: float) -> float:
    """Finite limit q * sqrt(n) * exp(-z^2/2) of the odds-cancellation mode."""
    return q * math.sqrt(n) * math.exp(-0.5 * z * z)
