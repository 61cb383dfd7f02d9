"""Where the Jeffreys-Lindley paradox bites: Table 1 sample sizes, Figure 1
series, the conflict band in z, and how often conflicts happen by simulation."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Literal, Sequence

import numpy as np
from pydantic import ValidationError
from scipy import special

from . import config
from .errors import CappedSearchError, DomainError
from .numerics import find_root, std_normal_cdf, two_sided_p_value
from .point_null import (
    _check_alpha,
    _check_c,
    _check_positive,
    _conjugate_log_bf01,
    conjugate_log_bf01,
    critical_z,
    lindley_log_odds,
)
from .schemas import (
    ConflictZone,
    CurvePoint,
    CurveSeries,
    RootBracket,
    SimulationResult,
    StrongContrastQuery,
)

logger = logging.getLogger(__name__)


def _logit(p: float) -> float:
    if p <= 0.0:
        return -math.inf
    return math.log(p) - math.log1p(-p)


# ----------------------------
# Table 1
# ----------------------------
def _posterior_log_odds(query: StrongContrastQuery, z: float) -> Callable[[float], float]:
    if query.setup == "lindley-uniform":
        return lambda n: lindley_log_odds(query.c, z, query.sigma, n)
    log_prior_odds = math.log(query.c) - math.log1p(-query.c)
    return lambda n: log_prior_odds + float(_conjugate_log_bf01(z, n, query.tau))


def min_n_strong_contrast(query: StrongContrastQuery) -> int:
    """Smallest n at which just-significant data give P(H0 | x) >= 1 - alpha."""
    z = critical_z(query.alpha, query.quote_z)
    log_odds = _posterior_log_odds(query, z)
    target = _logit(1.0 - query.alpha)

    def gap(n: float) -> float:
        return log_odds(n) - target

    if gap(1.0) >= 0.0:
        return 1
    cap = float(config.SAMPLE_SIZE_CAP)
    if gap(cap) < 0.0:
        raise CappedSearchError(
            f"no sample size below {config.SAMPLE_SIZE_CAP:.0e} reaches posterior {1.0 - query.alpha:g} "
            f"({query.setup}, alpha={query.alpha:g})"
        )

    root = find_root(gap, RootBracket(lo=1.0, hi=cap, tol=config.SAMPLE_SIZE_TOL))
    n = max(1, math.ceil(root))
    # the solver stops within tol of the real root; settle on the exact integer
    while gap(n) < 0.0:
        n += 1
    while n > 1 and gap(n - 1) >= 0.0:
        n -= 1
    logger.debug("min n (%s, alpha=%g) = %d from real root %.3f", query.setup, query.alpha, n, root)
    return n


def lindley_min_n_closed_form(alpha: float, c: float = config.DEFAULT_C, sigma: float = config.DEFAULT_SIGMA) -> float:
    """n* = 2 pi sigma^2 ((1-c)/c)^2 ((1-alpha)/alpha)^2 exp(z^2), Lindley's posterior inverted."""
    alpha, c = _check_alpha(alpha), _check_c(c)
    z = critical_z(alpha)
    return 2.0 * math.pi * sigma ** 2 * ((1.0 - c) / c) ** 2 * ((1.0 - alpha) / alpha) ** 2 * math.exp(z * z)


# ----------------------------
# Figure 1
# ----------------------------
def _check_grid(grid: Sequence[float], name: str) -> None:
    if len(grid) == 0:
        raise DomainError(f"{name} grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError(f"{name} grid must be strictly increasing")


def lindley_curve(z: float, tau: float, c: float, n_grid: Sequence[int]) -> CurveSeries:
    """Posterior of H0 as n grows with z (hence the p-value) and the prior held fixed."""
    c, tau = _check_c(c), _check_positive(tau, "tau")
    _check_grid(n_grid, "n")
    p = two_sided_p_value(z)
    points = []
    for n in n_grid:
        log_odds = math.log(c) - math.log1p(-c) + conjugate_log_bf01(z, n, tau)
        points.append(CurvePoint(abscissa=n, posterior_h0=float(special.expit(log_odds)), p_value=p))
    return CurveSeries(axis_label="n", points=points)


def bartlett_curve(z: float, n: int, c: float, tau_grid: Sequence[float]) -> CurveSeries:
    """Posterior of H0 as the slab widens with the data (z, n) held fixed."""
    c = _check_c(c)
    _check_grid(tau_grid, "tau")
    p = two_sided_p_value(z)
    points = []
    for tau in tau_grid:
        log_odds = math.log(c) - math.log1p(-c) + conjugate_log_bf01(z, n, _check_positive(tau, "tau"))
        points.append(CurvePoint(abscissa=tau, posterior_h0=float(special.expit(log_odds)), p_value=p))
    return CurveSeries(axis_label="tau", points=points)


# ----------------------------
# conflict zone
# ----------------------------
def conflict_zone(n: int, alpha: float, tau: float, c: float, posterior_threshold: float) -> ConflictZone:
    """|z| band with p < alpha and P(H0 | z) >= threshold under the conjugate slab.

    The posterior falls monotonically in |z|, so the band runs from the
    rejection quantile up to the root of ``posterior(z) = threshold``.
    """
    alpha, c, tau = _check_alpha(alpha), _check_c(c), _check_positive(tau, "tau")
    if not 0.0 <= posterior_threshold < 1.0:
        raise DomainError(f"posterior threshold must lie in [0, 1), got {posterior_threshold}")
    z_lo = critical_z(alpha)
    if posterior_threshold == 0.0:
        return ConflictZone(z_lo=z_lo, z_hi=math.inf, empty=False)

    target = _logit(posterior_threshold)
    log_prior_odds = math.log(c) - math.log1p(-c)

    def gap(z: float) -> float:
        return log_prior_odds + conjugate_log_bf01(z, n, tau) - target

    if gap(z_lo) <= 0.0:
        return ConflictZone(empty=True)
    z_hi = max(2.0 * z_lo, 1.0)
    while gap(z_hi) > 0.0:
        z_hi *= 2.0
    z_top = find_root(gap, RootBracket(lo=z_lo, hi=z_hi))
    return ConflictZone(z_lo=z_lo, z_hi=z_top, empty=False)


def zone_probability(zone: ConflictZone) -> float:
    """P(|Z| in zone) for standard normal Z: the conflict rate when H0 holds."""
    if zone.empty:
        return 0.0
    upper = 1.0 if math.isinf(zone.z_hi) else std_normal_cdf(zone.z_hi)
    return 2.0 * (upper - std_normal_cdf(zone.z_lo))


# ----------------------------
# Monte Carlo
# ----------------------------
MIXTURE_NOTE = (
    "under 'mixture' each draw is null with probability c, otherwise the effect is drawn "
    "from the normal slab with sd tau*sigma and standardised with the sampling sd"
)


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    # one independent substream per (seed, chunk index), whatever thread runs it
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _count_chunk(
    index: int, size: int, n: int, z_crit: float, tau: float, c: float,
    threshold: float, truth: str, seed: int,
) -> int:
    rng = _chunk_rng(seed, index)
    z = rng.standard_normal(size)
    if truth == "mixture":
        # an effect delta ~ N(0, (tau sigma)^2) shifts z by delta sqrt(n) / sigma
        alternative = rng.random(size) >= c
        shift = rng.standard_normal(size) * tau * math.sqrt(n)
        z = z + np.where(alternative, shift, 0.0)
    log_odds = math.log(c) - math.log1p(-c) + _conjugate_log_bf01(z, float(n), tau)
    rejects = np.abs(z) > z_crit
    favours_null = log_odds > _logit(threshold)
    return int(np.count_nonzero(rejects & favours_null))


def simulate_conflict_rate(
    n: int,
    alpha: float,
    tau: float,
    c: float,
    truth: Literal["null-true", "mixture"],
    reps: int,
    seed: int,
    workers: int = 1,
    threshold: float = config.DEFAULT_THRESHOLD,
) -> SimulationResult:
    """Fraction of simulated datasets where the test rejects but P(H0 | data) > threshold.

    Replicates are cut into fixed chunks, each with its own substream, so the
    count does not depend on ``workers``.
    """
    alpha, c, tau = _check_alpha(alpha), _check_c(c), _check_positive(tau, "tau")
    if reps < 1:
        raise DomainError(f"reps must be at least 1, got {reps}")
    if workers < 1:
        raise DomainError(f"workers must be at least 1, got {workers}")
    if truth not in ("null-true", "mixture"):
        raise DomainError(f"unknown truth {truth!r}")
    if not 0.0 <= threshold < 1.0:
        raise DomainError(f"posterior threshold must lie in [0, 1), got {threshold}")
    z_crit = critical_z(alpha)

    size = config.MC_CHUNK_SIZE
    chunks = [(i, min(size, reps - i * size)) for i in range(math.ceil(reps / size))]

    def run(chunk):
        index, count = chunk
        return _count_chunk(index, count, n, z_crit, tau, c, threshold, truth, seed)

    if workers == 1:
        counts = [run(chunk) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run, chunks))

    conflicts = sum(counts)
    rate = conflicts / reps
    logger.info("simulated %d reps (%s, n=%d): %d conflicts", reps, truth, n, conflicts)
    try:
        return SimulationResult(
            truth=truth,
            reps=reps,
            seed=seed,
            conflicts=conflicts,
            rate=rate,
            standard_error=math.sqrt(rate * (1.0 - rate) / reps),
            metadata={"substreams": f"SeedSequence(seed, spawn_key=(chunk,)), chunk size {size}",
                      "slab": MIXTURE_NOTE},
        )
    except ValidationError as exc:
        raise DomainError(f"invalid simulation settings: {exc.errors()[0]['msg']}") from exc
