"""Tests for point-null posteriors: Lindley, Bartlett, conjugate and calibrated odds."""

import math

import numpy as np
import pytest
from scipy import special

from paradox.errors import DomainError
from paradox.numerics import two_sided_p_value
from paradox.point_null import (
    bartlett_posterior,
    calibrated_posterior_odds,
    calibration_limit,
    conjugate_bf01,
    conjugate_log_bf01,
    critical_z,
    just_significant_mean,
    laplace_uniform_posterior_odds,
    lindley_posterior,
    point_null_report,
    posterior_from_bf,
    report_from_log_bf,
    resolve_scenario,
    uniform_slab_bf01,
    unit_information_prior,
)
from paradox.schemas import CalibrationSpec, ConjugateSlab, PriorSpec, Scenario, UniformSlab

Z_05 = float(special.ndtri(0.975))


class TestJustSignificantMean:
    def test_hundred(self):
        assert just_significant_mean(0.0, 1.0, 100, 0.05) == pytest.approx(0.196, abs=5e-5)

    def test_thousand(self):
        assert just_significant_mean(0.0, 1.0, 1000, 0.05) == pytest.approx(0.06199, abs=2e-5)

    def test_p_value_is_alpha(self):
        mean = just_significant_mean(0.0, 1.0, 100, 0.05)
        assert two_sided_p_value(mean * math.sqrt(100)) == pytest.approx(0.05, abs=1e-12)

    def test_alpha_near_one_leaves_theta0(self):
        assert just_significant_mean(5.0, 2.0, 4, 1.0 - 1e-12) == pytest.approx(5.0, abs=1e-6)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2])
    def test_invalid_alpha(self, alpha):
        with pytest.raises(DomainError, match="alpha"):
            just_significant_mean(0.0, 1.0, 100, alpha)

    def test_quoted_z(self):
        assert critical_z(0.05, quote_z=True) == 1.96
        assert critical_z(0.01, quote_z=True) == pytest.approx(2.575829, abs=1e-6)


class TestLindleyPosterior:
    def test_table_row(self):
        assert lindley_posterior(0.5, 1.9599640, 1.0, 105685) == pytest.approx(0.95, abs=5e-5)

    def test_small_sample(self):
        assert lindley_posterior(0.5, 1.96, 1.0, 100) == pytest.approx(0.3689, abs=1e-4)

    @pytest.mark.parametrize("c", [0.1, 0.5, 0.9])
    def test_decreasing_in_z(self, c):
        assert lindley_posterior(c, 0.0, 1.0, 50) > lindley_posterior(c, 5.0, 1.0, 50)

    @pytest.mark.parametrize("c", [0.0, 1.0])
    def test_degenerate_mass(self, c):
        with pytest.raises(DomainError, match="mass on the null"):
            lindley_posterior(c, 1.96, 1.0, 100)

    def test_jeffreys_lindley_limit(self):
        """Posterior climbs to 1 along n with the p-value held at 0.05."""
        series = [lindley_posterior(0.5, 1.9599640, 1.0, 10.0 ** k) for k in range(2, 10)]
        assert all(b > a for a, b in zip(series, series[1:]))
        # odds 584.5 at n = 1e8; 0.999 needs n above 2.9e8
        assert series[-2] == pytest.approx(0.99829, abs=5e-5)
        assert series[-1] > 0.999


class TestBartlettPosterior:
    def test_unit_width_is_lindley(self):
        for n in (10, 100, 12345):
            assert bartlett_posterior(0.5, 1.96, 1.0, n, 1.0) == lindley_posterior(0.5, 1.96, 1.0, n)

    def test_width_ten(self):
        assert bartlett_posterior(0.5, 1.96, 1.0, 100, 10.0) == pytest.approx(0.8539, abs=1e-4)

    def test_silly_answer(self):
        assert bartlett_posterior(0.5, 1.96, 1.0, 100, 1e8) >= 0.999999
        assert bartlett_posterior(0.5, 2.5, 1.0, 100, 1e8) > 0.999999

    def test_increasing_in_width(self):
        series = [bartlett_posterior(0.5, 2.5, 1.0, 100, w) for w in np.logspace(0, 8, 17)]
        assert all(b > a for a, b in zip(series, series[1:]))

    def test_nonpositive_width(self):
        with pytest.raises(DomainError, match="width"):
            bartlett_posterior(0.5, 1.96, 1.0, 100, 0.0)

    def test_laplace_odds_match_bartlett(self):
        odds = laplace_uniform_posterior_odds(0.5, 1.96, 1.0, 400, 3.0)
        assert odds / (1.0 + odds) == pytest.approx(bartlett_posterior(0.5, 1.96, 1.0, 400, 3.0), rel=1e-12)


class TestUniformSlab:
    def test_exact_normalisation_approaches_laplace_form(self):
        scenario = Scenario(n=10_000, z=1.96)
        exact = uniform_slab_bf01(scenario, 1.0)
        laplace = laplace_uniform_posterior_odds(0.5, 1.96, 1.0, 10_000, 1.0)
        assert exact == pytest.approx(laplace, rel=1e-6)

    def test_small_n_differs_from_laplace(self):
        """With se comparable to the slab the truncated likelihood mass matters."""
        scenario = Scenario(n=4, z=1.96)
        se, xbar = 0.5, 0.98
        mass = special.ndtr((0.5 - xbar) / se) - special.ndtr((-0.5 - xbar) / se)
        f0 = math.exp(-0.5 * 1.96 ** 2) / (se * math.sqrt(2.0 * math.pi))
        assert uniform_slab_bf01(scenario, 1.0) == pytest.approx(f0 / mass, rel=1e-9)


class TestConjugateBf01:
    def test_zero_statistic(self):
        assert conjugate_bf01(0.0, 3, 1.0) == pytest.approx(2.0, rel=1e-15)

    def test_table_row(self):
        assert conjugate_bf01(1.9599640, 16816, 1.0) == pytest.approx(19.0, abs=1e-3)

    def test_figure_inputs(self):
        assert conjugate_bf01(2.5, 100, 1.0) == pytest.approx(0.45544, abs=1e-5)

    def test_no_slab_is_one(self):
        assert conjugate_bf01(2.5, 100, 0.0) == 1.0

    def test_negative_tau(self):
        with pytest.raises(DomainError, match="tau"):
            conjugate_bf01(2.5, 100, -1.0)

    def test_sqrt_n_growth(self):
        for n in (1e6, 1e8):
            assert conjugate_bf01(1.96, 4 * n, 1.0) / conjugate_bf01(1.96, n, 1.0) == pytest.approx(2.0, rel=0.01)

    def test_linear_growth_in_tau(self):
        ratio = conjugate_bf01(2.5, 100, 4e3) / conjugate_bf01(2.5, 100, 1e3)
        assert ratio == pytest.approx(4.0, rel=0.01)

    def test_log_stays_finite_far_out(self):
        assert math.isfinite(conjugate_log_bf01(40.0, 1e12, 1.0))


class TestPosteriorFromBf:
    def test_nineteen_to_one(self):
        assert posterior_from_bf(19.0, 0.5).posterior_h0 == pytest.approx(0.95, rel=1e-12)

    def test_uninformative(self):
        assert posterior_from_bf(1.0, 0.5).posterior_h0 == pytest.approx(0.5, rel=1e-12)

    def test_figure_point(self):
        assert posterior_from_bf(0.45544, 0.5).posterior_h0 == pytest.approx(0.3129, abs=1e-4)

    @pytest.mark.parametrize("c", [0.2, 0.5, 0.8])
    def test_report_invariants(self, c):
        for bf01 in np.logspace(-6, 6, 25):
            report = posterior_from_bf(bf01, c)
            assert report.posterior_odds == pytest.approx(c / (1.0 - c) * bf01, rel=1e-12)
            odds = report.posterior_odds
            assert report.posterior_h0 == pytest.approx(odds / (1.0 + odds), rel=1e-12)

    def test_nonpositive_bf(self):
        with pytest.raises(DomainError):
            posterior_from_bf(0.0, 0.5)

    def test_unrepresentable_bf(self):
        report = report_from_log_bf(800.0, 0.5)
        assert report.bf01 == math.inf
        assert report.posterior_h0 == 1.0
        assert report.log_bf01 == 800.0


class TestPointNullReport:
    def test_conjugate_large_n(self):
        prior = PriorSpec(mass_on_null=0.5, slab=ConjugateSlab(tau=1.0))
        report = point_null_report(Scenario(n=1_000_000, z=1.96), prior)
        assert report.posterior_h0 == pytest.approx(0.9932, abs=5e-4)
        assert report.prior == prior

    def test_uniform_is_bartlett(self):
        prior = PriorSpec(mass_on_null=0.3, slab=UniformSlab(width=10.0))
        report = point_null_report(Scenario(n=100, z=1.96), prior)
        assert report.posterior_h0 == pytest.approx(bartlett_posterior(0.3, 1.96, 1.0, 100, 10.0), rel=1e-12)

    def test_two_phenomena(self):
        """Growing n with the prior fixed, or growing the slab with the data fixed, both push P(H0) to 1."""
        prior = PriorSpec(slab=ConjugateSlab(tau=1.0))
        by_n = [point_null_report(Scenario(n=int(n), z=1.96), prior).posterior_h0 for n in np.logspace(1, 10, 10)]
        assert all(b > a for a, b in zip(by_n, by_n[1:]))
        assert by_n[-1] > 0.99

        data = Scenario(n=100, z=2.5)
        by_tau = [
            point_null_report(data, PriorSpec(slab=ConjugateSlab(tau=t))).posterior_h0 for t in np.logspace(0, 5, 11)
        ]
        assert all(b > a for a, b in zip(by_tau, by_tau[1:]))
        assert by_tau[-1] > 0.99

        by_width = [
            point_null_report(data, PriorSpec(slab=UniformSlab(width=w))).posterior_h0 for w in np.logspace(0, 6, 13)
        ]
        assert all(b > a for a, b in zip(by_width, by_width[1:]))
        assert by_width[-1] > 0.99

    def test_unit_information_prior(self):
        wide = PriorSpec(mass_on_null=0.4, slab=UniformSlab(width=1000.0))
        unit = unit_information_prior(wide, 2.0)
        assert unit.mass_on_null == 0.4
        assert unit.slab.width == pytest.approx(2.0 * math.sqrt(12.0))
        assert unit_information_prior(PriorSpec(slab=ConjugateSlab(tau=50.0)), 2.0).slab.tau == 1.0


class TestResolveScenario:
    def test_from_alpha(self):
        scenario = resolve_scenario(n=100, alpha=0.05)
        assert scenario.z == pytest.approx(Z_05, rel=1e-15)
        assert scenario.xbar == pytest.approx(0.196, abs=5e-5)

    def test_from_mean(self):
        scenario = resolve_scenario(theta0=1.0, sigma=2.0, n=16, xbar=2.0)
        assert scenario.z == pytest.approx(2.0)

    def test_agreeing_sources(self):
        xbar = Z_05 / 10.0
        assert resolve_scenario(n=100, alpha=0.05, xbar=xbar, z=Z_05).z == pytest.approx(Z_05)

    def test_disagreeing_sources(self):
        with pytest.raises(DomainError, match="inconsistent scenario"):
            resolve_scenario(n=100, alpha=0.05, z=1.96)

    def test_quoted_z_agrees_with_rounded_value(self):
        assert resolve_scenario(n=100, alpha=0.05, z=1.96, quote_z=True).z == 1.96

    def test_needs_a_source(self):
        with pytest.raises(DomainError, match="one of z, alpha or xbar"):
            resolve_scenario(n=100)

    def test_invalid_sample_size(self):
        with pytest.raises(DomainError, match="invalid scenario"):
            resolve_scenario(n=0, z=1.0)


class TestCalibratedOdds:
    def test_cancellation_limit(self):
        spec = CalibrationSpec(mode="odds-cancellation", constant=1.0)
        limit = calibration_limit(2.5, 100, 1.0)
        assert limit == pytest.approx(0.4394, rel=1e-3)
        wide = calibrated_posterior_odds(2.5, 100, 1e6, spec)
        assert wide == pytest.approx(limit, rel=0.01)
        assert calibrated_posterior_odds(2.5, 100, 1e4, spec) == pytest.approx(wide, rel=0.01)

    def test_literal_even_odds(self):
        spec = CalibrationSpec(mode="literal", constant=0.1)
        assert calibrated_posterior_odds(2.5, 100, 5.0, spec) == pytest.approx(conjugate_bf01(2.5, 100, 5.0), rel=1e-12)

    def test_huge_odds_saturate(self):
        spec = CalibrationSpec(mode="odds-cancellation", constant=1e300)
        assert calibrated_posterior_odds(0.0, 100, 1e-10, spec) == math.inf

    @pytest.mark.parametrize("ratio", [10.0, 50.0])
    def test_literal_domain(self, ratio):
        spec = CalibrationSpec(mode="literal", constant=0.1)
        with pytest.raises(DomainError, match="1/k"):
            calibrated_posterior_odds(2.5, 100, ratio, spec)
