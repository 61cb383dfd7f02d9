"""Special functions, bracketed root finding and adaptive quadrature.

Thin, validated wrappers over scipy: ``scipy.special`` for the normal CDF
and quantile, QUADPACK (``scipy.integrate.quad``) for integrals and Brent's
method (``scipy.optimize.brentq``) for roots. Every failure mode is turned
into one of the errors in :mod:`paradox.errors`.
"""

import logging
import math
from typing import Callable, Optional, Sequence

from scipy import integrate as _integrate
from scipy import optimize, special

from . import config
from .errors import BracketError, DomainError, NonConvergenceError
from .schemas import QuadratureSettings, RootBracket

logger = logging.getLogger(__name__)


def _finite(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x}")
    return x


def std_normal_cdf(x: float) -> float:
    return float(special.ndtr(_finite(x)))


def log_std_normal_cdf(x: float) -> float:
    """log Phi(x), accurate far into the lower tail."""
    return float(special.log_ndtr(_finite(x)))


def std_normal_quantile(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile needs p in (0, 1), got {p}")
    return float(special.ndtri(p))


def two_sided_p_value(z: float) -> float:
    return 2.0 * float(special.ndtr(-abs(_finite(z, "z"))))


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    settings: Optional[QuadratureSettings] = None,
    points: Optional[Sequence[float]] = None,
) -> float:
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[lo, hi]``.

    ``points`` are interior abscissae where the integrand peaks or kinks;
    QUADPACK starts its bisection there.
    """
    settings = settings or QuadratureSettings()
    lo, hi = _finite(lo, "lo"), _finite(hi, "hi")
    if not lo < hi:
        raise DomainError(f"integrate needs lo < hi, got [{lo}, {hi}]")
    interior = sorted(p for p in (points or ()) if lo < p < hi) or None

    result = _integrate.quad(
        f,
        lo,
        hi,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=settings.max_subdivisions,
        points=interior,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3:
        # ier != 0: QUADPACK appends its message
        raise NonConvergenceError(
            f"quadrature on [{lo}, {hi}] did not converge (error estimate {abserr:.3g}): {result[3]}",
            best_estimate=value,
        )
    logger.debug("integrate [%g, %g] -> %.17g (+- %.3g, %d evals)", lo, hi, value, abserr, result[2]["neval"])
    return value


def find_root(f: Callable[[float], float], bracket: RootBracket, max_iter: int = config.ROOT_MAX_ITER) -> float:
    """Root of a monotone ``f`` inside ``bracket`` by Brent's method."""
    f_lo, f_hi = f(bracket.lo), f(bracket.hi)
    if f_lo == 0.0:
        return bracket.lo
    if f_hi == 0.0:
        return bracket.hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise BracketError(
            f"no sign change on [{bracket.lo}, {bracket.hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )

    root, info = optimize.brentq(
        f, bracket.lo, bracket.hi, xtol=bracket.tol, maxiter=max_iter, full_output=True, disp=False
    )
    if not info.converged:
        raise NonConvergenceError(
            f"root finding stopped after {info.iterations} iterations ({info.flag})", best_estimate=root
        )
    logger.debug("find_root [%g, %g] -> %.17g after %d iterations", bracket.lo, bracket.hi, root, info.iterations)
    return root
