"""
Tests for the analytic coverage service: closed-form oracles, normalization
of the received-power distributions, breakpoint continuity, degenerate cases
and the reference coverage levels.
"""

import math

import pytest
from scipy.integrate import quad

from app.config.settings import get_reference_network
from app.models.results import CoverageRegion, Scheme
from app.services import analytic_service as analytic
from app.services import params_service
from app.services.errors import ConfigError
from app.services.params_service import db_to_linear, derive
from app.services.specfun_service import integrate, rho


def _mass(pdf, params, scale, s_split=None):
    """
    Integral of pdf(t) dt over (0, inf), taken in y = scale * t^(-2/alpha).

    s_split is the image of the breakpoint; the integral is split there.
    """
    alpha = params.alpha

    def g(y):
        s = y / scale
        return pdf(s ** (-alpha / 2.0), params) * (alpha / 2.0) * s ** (-alpha / 2.0 - 1.0) / scale

    if s_split is None:
        return integrate(g, 0.0, math.inf)
    y_split = scale * s_split
    return integrate(g, 0.0, y_split) + integrate(g, y_split, math.inf)


def _s_star(params):
    return derive(params).breakpoint_t ** (-2.0 / params.alpha)


def _interference_factor(density, power, threshold, t, r_min, alpha):
    """
    exp(-2 pi density int_{r_min}^inf r q r^-alpha / (1 + q r^-alpha) dr), q = threshold * power / t,
    integrated in w = r / r_min.
    """
    q = threshold * power / (t * r_min ** alpha)
    value, _ = quad(lambda w: w / (1.0 + w ** alpha / q), 1.0, math.inf, epsabs=1e-14, epsrel=1e-12, limit=500)
    return math.exp(-2.0 * math.pi * density * r_min ** 2 * value)


class TestClosedFormOracles:

    @pytest.mark.parametrize("alpha", [3.0, 4.0, 5.0])
    @pytest.mark.parametrize("threshold_db", [-5.0, 0.0, 5.0, 10.0])
    def test_interference_limited_uniform(self, threshold_db, alpha):
        params = params_service.params_from_config(
            get_reference_network(alpha=alpha, noise_dbm=-math.inf, inner_radius_m=0.0)
        )
        threshold = db_to_linear(threshold_db)
        expected = 1.0 / (1.0 + rho(threshold, alpha))
        assert analytic.coverage_uniform(threshold, params) == pytest.approx(expected, abs=1e-6)

    def test_noise_lowers_coverage(self, uniform_params):
        noiseless = params_service.with_overrides(uniform_params, noise_dbm=-math.inf)
        assert analytic.coverage_uniform(1.0, uniform_params) < analytic.coverage_uniform(1.0, noiseless)


class TestReceivedPowerDistributions:

    def test_uniform_pdf_normalizes(self, reference_params):
        scale = math.pi * derive(reference_params).xi
        assert _mass(analytic.pdf_q_uniform, reference_params, scale) == pytest.approx(1.0, abs=1e-8)

    def test_outer_pdf_normalizes(self, reference_params):
        scale = math.pi * derive(reference_params).xi
        mass = _mass(analytic.pdf_q_outer, reference_params, scale, _s_star(reference_params))
        assert mass == pytest.approx(1.0, abs=1e-8)

    def test_inner_pdf_normalizes(self, reference_params):
        scale = math.pi * derive(reference_params).xi
        mass = _mass(analytic.pdf_q_inner, reference_params, scale, _s_star(reference_params))
        assert mass == pytest.approx(1.0, abs=1e-8)

    def test_uniform_pdf_is_derivative_at_breakpoint(self, reference_params):
        t = derive(reference_params).breakpoint_t
        h = t * 1e-5
        slope = (analytic.cdf_q_uniform(t + h, reference_params) - analytic.cdf_q_uniform(t - h, reference_params)) / (2 * h)
        assert slope == pytest.approx(analytic.pdf_q_uniform(t, reference_params), rel=1e-6)

    def test_inner_cdf_limits(self, reference_params):
        t_star = derive(reference_params).breakpoint_t
        assert analytic.cdf_q_inner(t_star, reference_params) == 0.0
        assert analytic.cdf_q_inner(t_star * 1e12, reference_params) == pytest.approx(1.0, abs=1e-5)

    def test_outer_cdf_is_monotone(self, reference_params):
        t_star = derive(reference_params).breakpoint_t
        values = [analytic.cdf_q_outer(t_star * f, reference_params) for f in (0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_outer_falls_back_to_uniform_without_inner_region(self, uniform_params):
        assert analytic.cdf_q_outer(1e-10, uniform_params) == analytic.cdf_q_uniform(1e-10, uniform_params)

    def test_inner_requires_inner_region(self, uniform_params):
        with pytest.raises(ConfigError):
            analytic.cdf_q_inner(1e-10, uniform_params)


class TestBreakpointContinuity:

    def test_outer_cdf(self, reference_params):
        t_star = derive(reference_params).breakpoint_t
        left = analytic.cdf_q_outer(t_star, reference_params)
        right = analytic.cdf_q_outer(math.nextafter(t_star, math.inf), reference_params)
        assert right == pytest.approx(left, rel=1e-12)

    def test_inner_cdf(self, reference_params):
        t_star = derive(reference_params).breakpoint_t
        right = analytic.cdf_q_inner(math.nextafter(t_star, math.inf), reference_params)
        assert right == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("threshold_db", [-5.0, 0.0, 10.0])
    def test_outer_laplace(self, reference_params, threshold_db):
        threshold = db_to_linear(threshold_db)
        t_star = derive(reference_params).breakpoint_t
        left = analytic.laplace_outer(threshold, t_star, reference_params)
        right = analytic.laplace_outer(threshold, math.nextafter(t_star, math.inf), reference_params)
        assert right == pytest.approx(left, rel=1e-12)


class TestDegenerateCases:

    @pytest.mark.parametrize("threshold_db", [-5.0, 0.0, 5.0])
    def test_zero_radius_is_uniform(self, uniform_params, threshold_db):
        threshold = db_to_linear(threshold_db)
        assert analytic.coverage_overall(threshold, uniform_params) == pytest.approx(
            analytic.coverage_uniform(threshold, uniform_params), abs=1e-8
        )
        assert analytic.coverage_outer(threshold, uniform_params) == pytest.approx(
            analytic.coverage_uniform(threshold, uniform_params), abs=1e-8
        )

    def test_small_radius_outer_approaches_uniform(self, reference_params):
        tiny = params_service.with_overrides(reference_params, inner_radius_m=1.0)
        assert analytic.coverage_outer(1.0, tiny) == pytest.approx(
            analytic.coverage_uniform(1.0, tiny), abs=1e-4
        )

    @pytest.mark.parametrize("threshold_db", [-5.0, 0.0, 5.0])
    def test_no_femtos_collapses_schemes(self, reference_params, threshold_db):
        params = params_service.with_overrides(reference_params, femto_density_per_m2=0.0)
        threshold = db_to_linear(threshold_db)
        single = analytic.coverage_for_scheme(threshold, params, Scheme.SINGLE_TIER)
        assert analytic.coverage_for_scheme(threshold, params, Scheme.UNIFORM) == pytest.approx(single, abs=1e-8)
        assert analytic.coverage_for_scheme(threshold, params, Scheme.COVERAGE_ORIENTED) == pytest.approx(
            single, abs=1e-8
        )

    def test_single_tier_regions_mix_to_overall(self, reference_params):
        weight = params_service.inner_probability(reference_params)
        inner = analytic.coverage_single_tier_region(1.0, reference_params, CoverageRegion.INNER)
        outer = analytic.coverage_single_tier_region(1.0, reference_params, CoverageRegion.OUTER)
        overall = analytic.coverage_single_tier_region(1.0, reference_params, CoverageRegion.OVERALL)
        assert weight * inner + (1.0 - weight) * outer == pytest.approx(overall, abs=1e-8)


class TestCoverage:

    @pytest.mark.parametrize("fn", [
        analytic.coverage_uniform,
        analytic.coverage_outer,
        analytic.coverage_inner,
        analytic.coverage_overall,
    ])
    def test_decreasing_in_threshold(self, reference_params, fn):
        values = [fn(db_to_linear(t), reference_params) for t in (-10.0, -5.0, 0.0, 5.0, 10.0, 20.0)]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_inner_users_fare_better_than_outer(self, reference_params):
        assert analytic.coverage_inner(1.0, reference_params) > analytic.coverage_outer(1.0, reference_params)

    def test_overall_is_region_mixture(self, reference_params):
        weight = params_service.inner_probability(reference_params)
        mixture = (
            weight * analytic.coverage_inner(1.0, reference_params)
            + (1.0 - weight) * analytic.coverage_outer(1.0, reference_params)
        )
        assert analytic.coverage_overall(1.0, reference_params) == pytest.approx(mixture, abs=1e-12)

    def test_reference_levels_at_500m(self, reference_params):
        params = params_service.with_overrides(reference_params, inner_radius_m=500.0)
        assert analytic.coverage_overall(1.0, params) == pytest.approx(0.56, abs=0.02)
        assert analytic.coverage_uniform(1.0, params) == pytest.approx(0.53, abs=0.02)
        assert analytic.coverage_for_scheme(1.0, params, Scheme.SINGLE_TIER) == pytest.approx(0.50, abs=0.02)

    def test_uniform_has_no_region_values(self, reference_params):
        with pytest.raises(ConfigError):
            analytic.coverage_for_scheme(1.0, reference_params, Scheme.UNIFORM, CoverageRegion.INNER)

    @pytest.mark.parametrize("threshold", [0.0, -1.0])
    def test_threshold_must_be_positive(self, reference_params, threshold):
        with pytest.raises(ConfigError):
            analytic.coverage_overall(threshold, reference_params)


class TestLaplaceTransforms:

    @pytest.fixture
    def tiers(self, reference_params):
        d = derive(reference_params)
        macro = (reference_params.macro.density_per_m2, d.p1_linear)
        femto = (reference_params.femto.density_per_m2, d.p2_linear)
        return d, macro, femto

    @staticmethod
    def _exclusion(power, t, alpha):
        return (power / t) ** (1.0 / alpha)

    @pytest.mark.parametrize("threshold_db", [-5.0, 0.0, 10.0])
    def test_outer_above_breakpoint(self, reference_params, tiers, threshold_db):
        d, macro, femto = tiers
        alpha, radius = reference_params.alpha, reference_params.inner_radius_m
        threshold, t = db_to_linear(threshold_db), 2.0 * d.breakpoint_t
        expected = (
            _interference_factor(*macro, threshold, t, radius, alpha)
            * _interference_factor(*femto, threshold, t, self._exclusion(d.p2_linear, t, alpha), alpha)
        )
        assert analytic.laplace_outer(threshold, t, reference_params) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("threshold_db", [-5.0, 0.0, 10.0])
    def test_outer_below_breakpoint(self, reference_params, tiers, threshold_db):
        d, macro, femto = tiers
        alpha = reference_params.alpha
        threshold, t = db_to_linear(threshold_db), 0.5 * d.breakpoint_t
        expected = (
            _interference_factor(*macro, threshold, t, self._exclusion(d.p1_linear, t, alpha), alpha)
            * _interference_factor(*femto, threshold, t, self._exclusion(d.p2_linear, t, alpha), alpha)
        )
        assert analytic.laplace_outer(threshold, t, reference_params) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("threshold_db", [-5.0, 0.0, 10.0])
    def test_inner(self, reference_params, tiers, threshold_db):
        d, macro, femto = tiers
        alpha, radius = reference_params.alpha, reference_params.inner_radius_m
        threshold, t = db_to_linear(threshold_db), 2.0 * d.breakpoint_t
        expected = (
            _interference_factor(*macro, threshold, t, self._exclusion(d.p1_linear, t, alpha), alpha)
            * _interference_factor(*femto, threshold, t, radius, alpha)
        )
        assert analytic.laplace_inner(threshold, t, reference_params) == pytest.approx(expected, abs=1e-10)

    def test_inner_without_femtos_is_macro_only(self, reference_params):
        params = params_service.with_overrides(reference_params, femto_density_per_m2=0.0)
        d = derive(params)
        t = 2.0 * d.breakpoint_t
        s = t ** (-2.0 / params.alpha)
        macro = params.macro.density_per_m2 * d.p1_linear ** (2.0 / params.alpha)
        expected = math.exp(-math.pi * macro * rho(1.0, params.alpha) * s)
        assert analytic.laplace_inner(1.0, t, params) == pytest.approx(expected, rel=1e-12)


class TestInnerRadiusLimits:

    def test_radius_at_cap_matches_single_tier(self, reference_params):
        params = params_service.with_overrides(
            reference_params, inner_radius_m=params_service.max_inner_radius(reference_params)
        )
        single = analytic.coverage_for_scheme(1.0, params, Scheme.SINGLE_TIER)
        assert analytic.coverage_overall(1.0, params) == pytest.approx(single, abs=1e-3)

    @pytest.mark.parametrize("threshold_db", [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0])
    def test_inner_close_to_single_tier_inner(self, reference_params, threshold_db):
        threshold = db_to_linear(threshold_db)
        single = analytic.coverage_single_tier_region(threshold, reference_params, CoverageRegion.INNER)
        assert abs(analytic.coverage_inner(threshold, reference_params) - single) < 0.03
