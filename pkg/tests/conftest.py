import math

import numpy as np
import pytest
from scipy import special

from paradox.schemas import IntervalNullSpec, Scenario

Z_05 = float(special.ndtri(0.975))


@pytest.fixture
def just_significant():
    """Scenario whose mean sits exactly on the alpha = 0.05 two-sided boundary."""

    def make(n, theta0=0.0, sigma=1.0, z=Z_05):
        return Scenario(theta0=theta0, sigma=sigma, n=n, z=z)

    return make


@pytest.fixture
def desk_spec():
    return IntervalNullSpec(delta=0.3, outer_bound=3.0)


def _midpoint(f, a, b, nodes):
    h = (b - a) / nodes
    x = a + h * (np.arange(nodes) + 0.5)
    return float(np.sum(f(x)) * h)


@pytest.fixture
def riemann_bf01():
    """Uniform-prior interval B01 by a 10^6-node midpoint sum per region."""

    def oracle(scenario, delta, outer_bound, nodes=1_000_000):
        se, xbar, theta0 = scenario.standard_error, scenario.xbar, scenario.theta0

        def lik(theta):
            return np.exp(-0.5 * ((xbar - theta) / se) ** 2) / (se * math.sqrt(2.0 * math.pi))

        inside = _midpoint(lik, theta0 - delta, theta0 + delta, nodes) / (2.0 * delta)
        band = _midpoint(lik, theta0 - outer_bound, theta0 - delta, nodes) + _midpoint(
            lik, theta0 + delta, theta0 + outer_bound, nodes
        )
        return inside / (band / (2.0 * (outer_bound - delta)))

    return oracle
