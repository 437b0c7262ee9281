"""
Tests for the experiment drivers: sweeps, optimal inner radius and the
scheme comparison.
"""

import numpy as np
import pytest

from app.config.settings import get_reference_network, grid_values
from app.models.results import CoverageRegion, Scheme
from app.services import analytic_service, params_service, sweep_service
from app.services.errors import ConfigError
from app.services.params_service import db_to_linear
from app.services.sweep_service import McConfig, SearchConfig


@pytest.fixture(scope="module")
def optimal_by_threshold():
    params = params_service.params_from_config(get_reference_network())
    return {t: sweep_service.optimal_d(params, t) for t in (-5.0, 0.0, 5.0, 10.0)}


class TestOptimalD:

    def test_decreases_with_threshold(self, optimal_by_threshold):
        d_star = [optimal_by_threshold[t].d_star_m for t in (-5.0, 0.0, 5.0, 10.0)]
        assert all(b < a for a, b in zip(d_star, d_star[1:]))

    def test_decreases_with_density_ratio(self, optimal_by_threshold, dense_femto_params):
        dense = sweep_service.optimal_d(dense_femto_params, 0.0)
        assert dense.d_star_m < optimal_by_threshold[0.0].d_star_m

    def test_dense_network_reference_levels(self, dense_femto_params):
        best = sweep_service.optimal_d(dense_femto_params, 0.0)
        assert best.coverage_at_star == pytest.approx(0.61, abs=0.02)
        assert analytic_service.coverage_uniform(1.0, dense_femto_params) == pytest.approx(0.55, abs=0.02)

    def test_interior_optimum(self, optimal_by_threshold):
        result = optimal_by_threshold[0.0]
        assert not result.at_boundary
        assert result.search_trace
        assert (result.d_star_m, result.coverage_at_star) in result.search_trace
        assert result.coverage_at_star == max(value for _, value in result.search_trace)

    def test_beats_verification_grid(self, reference_params, optimal_by_threshold):
        result = optimal_by_threshold[0.0]
        cap = params_service.max_inner_radius(reference_params)
        for d in np.linspace(10.0, cap, 200):
            candidate = params_service.with_overrides(reference_params, inner_radius_m=float(d))
            assert result.coverage_at_star >= analytic_service.coverage_overall(1.0, candidate) - 1e-6

    def test_agrees_with_radius_sweep(self, reference_params, optimal_by_threshold):
        grid = grid_values(0.0, 1000.0, 25.0)
        sweep = sweep_service.sweep_d(reference_params, grid, 0.0)
        values = [p.value for p in sweep.series["analytic_overall"]]
        grid_best = grid[int(np.argmax(values))]
        assert abs(grid_best - optimal_by_threshold[0.0].d_star_m) <= 25.0

    def test_boundary_flag(self, reference_params):
        result = sweep_service.optimal_d(reference_params, 0.0, SearchConfig(d_lo_m=10.0, d_hi_m=50.0))
        assert result.at_boundary
        assert result.d_star_m == pytest.approx(50.0, abs=1.0)

    def test_bad_bounds(self, reference_params):
        with pytest.raises(ConfigError):
            sweep_service.optimal_d(reference_params, 0.0, SearchConfig(d_lo_m=500.0, d_hi_m=100.0))
        with pytest.raises(ConfigError):
            sweep_service.optimal_d(reference_params, 0.0, SearchConfig(d_hi_m=1e6))


class TestSweepThreshold:

    def test_series_layout(self, reference_params):
        result = sweep_service.sweep_threshold(reference_params, [-5.0, 0.0, 5.0])
        assert result.axis_name == "threshold_db"
        assert set(result.series) == {
            "analytic_single_tier",
            "analytic_single_tier_inner",
            "analytic_single_tier_outer",
            "analytic_uniform",
            "analytic_inner",
            "analytic_outer",
            "analytic_overall",
        }
        for points in result.series.values():
            assert len(points) == 3
            assert all(b.value < a.value for a, b in zip(points, points[1:]))

    def test_uniform_deployment_has_overall_series_only(self, uniform_params):
        result = sweep_service.sweep_threshold(uniform_params, [0.0])
        assert set(result.series) == {"analytic_single_tier", "analytic_uniform", "analytic_overall"}
        assert result.series["analytic_overall"][0].value == pytest.approx(
            result.series["analytic_uniform"][0].value, abs=1e-12
        )

    def test_with_monte_carlo(self, reference_params):
        mc = McConfig(n_realizations=200, seed=3)
        result = sweep_service.sweep_threshold(reference_params, [0.0], schemes=[Scheme.COVERAGE_ORIENTED], mc=mc)
        assert {"mc_inner", "mc_outer", "mc_overall"} <= set(result.series)
        assert result.series["mc_overall"][0].std_err > 0.0

    def test_uniform_monte_carlo_split_by_inner_radius(self, reference_params):
        mc = McConfig(n_realizations=200, seed=1)
        result = sweep_service.sweep_threshold(reference_params, [0.0], schemes=[Scheme.UNIFORM], mc=mc)
        assert {"mc_uniform", "mc_uniform_inner", "mc_uniform_outer"} <= set(result.series)
        assert "analytic_uniform_inner" not in result.series
        inner = result.series["mc_uniform_inner"][0]
        assert inner.region == CoverageRegion.INNER
        assert inner.inner_radius_m == 0.0

    def test_analytic_within_monte_carlo_band(self, reference_params):
        grid = grid_values(-10.0, 20.0, 5.0)
        mc = McConfig(n_realizations=2000, seed=5)
        result = sweep_service.sweep_threshold(reference_params, grid, schemes=[Scheme.COVERAGE_ORIENTED], mc=mc)
        hits = total = 0
        for region in ("inner", "outer", "overall"):
            for analytic, simulated in zip(result.series[f"analytic_{region}"], result.series[f"mc_{region}"]):
                total += 1
                hits += abs(analytic.value - simulated.value) <= 2.576 * simulated.std_err
        assert hits >= 0.9 * total

    @pytest.mark.parametrize("grid", [[], [0.0, 0.0], [5.0, 0.0], [float("nan")]])
    def test_invalid_grid(self, reference_params, grid):
        with pytest.raises(ConfigError):
            sweep_service.sweep_threshold(reference_params, grid)

    def test_parallel_grid_matches_serial(self, reference_params):
        serial = sweep_service.sweep_threshold(reference_params, [-5.0, 0.0], schemes=[Scheme.UNIFORM])
        parallel = sweep_service.sweep_threshold(reference_params, [-5.0, 0.0], schemes=[Scheme.UNIFORM], workers=2)
        assert serial == parallel


class TestSweepD:

    def test_zero_radius_row_is_uniform(self, reference_params):
        result = sweep_service.sweep_d(reference_params, [0.0, 200.0, 400.0], 0.0)
        assert result.series["analytic_overall"][0].value == pytest.approx(
            result.series["analytic_uniform"][0].value, abs=1e-12
        )
        flat = [p.value for p in result.series["analytic_single_tier"]]
        assert len(set(flat)) == 1

    def test_radius_above_cap(self, reference_params):
        with pytest.raises(ConfigError):
            sweep_service.sweep_d(reference_params, [0.0, 1e5], 0.0)

    def test_negative_radius(self, reference_params):
        with pytest.raises(ConfigError):
            sweep_service.sweep_d(reference_params, [-1.0], 0.0)


class TestCompareSchemes:

    def test_reference_ordering(self, reference_params):
        params = params_service.with_overrides(reference_params, inner_radius_m=500.0)
        comparison = sweep_service.compare_schemes(params, 0.0)
        single = comparison.row(Scheme.SINGLE_TIER).analytic
        uniform = comparison.row(Scheme.UNIFORM).analytic
        oriented = comparison.row(Scheme.COVERAGE_ORIENTED).analytic
        assert single < uniform < oriented
        assert oriented == pytest.approx(analytic_service.coverage_overall(db_to_linear(0.0), params))
        assert comparison.row(Scheme.UNIFORM).mc is None

    def test_with_monte_carlo(self, uniform_params):
        comparison = sweep_service.compare_schemes(uniform_params, 0.0, mc=McConfig(n_realizations=500, seed=1))
        for row in comparison.rows:
            assert row.mc is not None
            assert abs(row.mc - row.analytic) <= max(3.0 * row.mc_std_err, 0.03)
