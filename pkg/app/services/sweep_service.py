"""
Sweep Service

Experiment drivers on top of the analytic and Monte Carlo services:
threshold sweeps, inner-radius sweeps, the optimal inner-radius search and
the three-scheme comparison.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

import numpy as np
from pydantic import BaseModel, Field

from app.config.settings import (
    DEFAULT_REALIZATIONS,
    DEFAULT_SEED,
    MIN_REALIZATIONS,
    OPTIMAL_D_GRID_POINTS,
    OPTIMAL_D_LOWER_M,
    OPTIMAL_D_WIDTH_M,
)
from app.models.params import NetworkParams
from app.models.results import (
    CoveragePoint,
    CoverageRegion,
    McCoverage,
    Method,
    OptimalD,
    Scheme,
    SchemeComparison,
    SchemeRow,
    SweepResult,
)
from app.services import analytic_service, mc_service, params_service
from app.services.errors import ConfigError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class McConfig(BaseModel):
    """Monte Carlo settings attached to a sweep or comparison."""

    n_realizations: int = Field(DEFAULT_REALIZATIONS, ge=MIN_REALIZATIONS)
    seed: int = Field(DEFAULT_SEED, ge=0)
    window_radius_m: Optional[float] = Field(None, gt=0.0)
    workers: int = Field(1, ge=1)

    class Config:
        allow_mutation = False


class SearchConfig(BaseModel):
    """
    Bounds and resolution of the optimal inner-radius search.

    d_hi_m defaults to the inner-radius cap 10 / sqrt(pi * lambda_1).
    """

    d_lo_m: float = Field(OPTIMAL_D_LOWER_M, gt=0.0)
    d_hi_m: Optional[float] = Field(None, gt=0.0)
    grid_points: int = Field(OPTIMAL_D_GRID_POINTS, ge=3)
    width_m: float = Field(OPTIMAL_D_WIDTH_M, gt=0.0)

    class Config:
        allow_mutation = False


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    # results follow the input order whatever the completion order
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _scheme_params(params: NetworkParams, scheme: Scheme) -> NetworkParams:
    # the single tier keeps D so its users can still be labelled inner/outer
    if scheme == Scheme.SINGLE_TIER:
        return params_service.with_overrides(params, femto_density_per_m2=0.0)
    if scheme == Scheme.UNIFORM:
        return params_service.uniform(params)
    return params


def _regions_for(scheme: Scheme, params: NetworkParams, method: Method = Method.ANALYTIC) -> List[CoverageRegion]:
    # uniform inner/outer values exist only as Monte Carlo strata labelled by D
    if params.inner_radius_m == 0.0 or (scheme == Scheme.UNIFORM and method == Method.ANALYTIC):
        return [CoverageRegion.OVERALL]
    return [CoverageRegion.INNER, CoverageRegion.OUTER, CoverageRegion.OVERALL]


def series_name(method: Method, scheme: Scheme, region: CoverageRegion) -> str:
    """Series key, e.g. analytic_overall, mc_inner, analytic_uniform, mc_single_tier_outer."""
    prefix = "analytic" if method == Method.ANALYTIC else "mc"
    if scheme == Scheme.COVERAGE_ORIENTED:
        return f"{prefix}_{region.value}"
    if region == CoverageRegion.OVERALL:
        return f"{prefix}_{scheme.value}"
    return f"{prefix}_{scheme.value}_{region.value}"


def _analytic_value(threshold_db: float, params: NetworkParams, scheme: Scheme, region: CoverageRegion) -> float:
    threshold = params_service.db_to_linear(threshold_db)
    return analytic_service.coverage_for_scheme(threshold, params, scheme, region)


def _mc_points(
    params: NetworkParams,
    thresholds_db: Sequence[float],
    scheme: Scheme,
    regions: Sequence[CoverageRegion],
    mc: McConfig,
    inner_radius_m: Optional[float] = None,
) -> Dict[CoverageRegion, List[Optional[CoveragePoint]]]:
    estimates: List[McCoverage] = mc_service.estimate_coverage(
        _scheme_params(params, scheme),
        thresholds_db,
        mc.n_realizations,
        mc.seed,
        mc.window_radius_m,
        mc.workers,
        label_radius_m=params.inner_radius_m,
    )
    out: Dict[CoverageRegion, List[Optional[CoveragePoint]]] = {}
    for region in regions:
        points: List[Optional[CoveragePoint]] = []
        for threshold_db, estimate in zip(thresholds_db, estimates):
            e = estimate.for_region(region)
            points.append(None if e is None else CoveragePoint(
                threshold_db=threshold_db,
                value=e.value,
                region=region,
                method=Method.MONTE_CARLO,
                std_err=e.std_err,
                scheme=scheme,
                inner_radius_m=inner_radius_m,
            ))
        out[region] = points
    return out


def _validate_grid(name: str, grid: Sequence[float], strictly_increasing: bool = False) -> List[float]:
    values = [float(v) for v in grid]
    if not values:
        raise ConfigError(f"{name} must not be empty")
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(f"{name} must hold finite values")
    if strictly_increasing and any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{name} must be strictly increasing")
    return values


def sweep_threshold(
    params: NetworkParams,
    t_grid_db: Sequence[float],
    schemes: Sequence[Scheme] = (Scheme.SINGLE_TIER, Scheme.UNIFORM, Scheme.COVERAGE_ORIENTED),
    mc: Optional[McConfig] = None,
    workers: int = 1,
) -> SweepResult:
    """
    Coverage versus SINR threshold for each scheme (CDF = 1 - coverage).

    Single tier and coverage-oriented series are emitted per region
    (inner, outer, overall) when D > 0; the analytic uniform series is overall
    only. Monte Carlo series are attached when mc is given, the uniform ones
    split by the same D as the other schemes; a series whose stratum has no
    samples at some threshold is dropped.
    """
    grid = _validate_grid("t_grid_db", t_grid_db, strictly_increasing=True)
    if not schemes:
        raise ConfigError("schemes must not be empty")

    logger.info(f"📈 Threshold sweep over {len(grid)} points, schemes={[s.value for s in schemes]}")
    series: Dict[str, List[CoveragePoint]] = {}
    for scheme in schemes:
        regions = _regions_for(scheme, params)
        radius = _scheme_params(params, scheme).inner_radius_m
        for region in regions:
            fn = partial(_analytic_value, params=params, scheme=scheme, region=region)
            values = map_ordered(fn, grid, workers)
            series[series_name(Method.ANALYTIC, scheme, region)] = [
                CoveragePoint(
                    threshold_db=t,
                    value=v,
                    region=region,
                    scheme=scheme,
                    inner_radius_m=radius,
                )
                for t, v in zip(grid, values)
            ]
        if mc is not None:
            mc_regions = _regions_for(scheme, params, Method.MONTE_CARLO)
            for region, points in _mc_points(params, grid, scheme, mc_regions, mc, radius).items():
                if all(p is not None for p in points):
                    series[series_name(Method.MONTE_CARLO, scheme, region)] = points

    return SweepResult(axis_name="threshold_db", axis_values=grid, series=series)


def _overall_at(inner_radius_m: float, params: NetworkParams, threshold: float) -> float:
    candidate = params_service.with_overrides(params, inner_radius_m=inner_radius_m)
    return analytic_service.coverage_overall(threshold, candidate)


def sweep_d(
    params: NetworkParams,
    d_grid_m: Sequence[float],
    threshold_db: float,
    mc: Optional[McConfig] = None,
    workers: int = 1,
) -> SweepResult:
    """
    Overall coverage versus inner radius D at one threshold.

    Flat reference series for the uniform deployment and the single tier are
    included; with mc, an MC overall series is attached (one run per D).
    """
    grid = _validate_grid("d_grid_m", d_grid_m)
    if any(d < 0.0 for d in grid):
        raise ConfigError("d_grid_m must be nonnegative")
    cap = params_service.max_inner_radius(params)
    if any(d > cap * (1.0 + 1e-12) for d in grid):
        raise ConfigError(f"d_grid_m must not exceed {cap:.1f} m")

    threshold = params_service.db_to_linear(threshold_db)
    logger.info(f"📈 Inner-radius sweep over {len(grid)} points at T={threshold_db} dB")

    overall = map_ordered(partial(_overall_at, params=params, threshold=threshold), grid, workers)
    uniform_value = analytic_service.coverage_uniform(threshold, params)
    single_value = analytic_service.coverage_uniform(threshold, params_service.single_tier(params))

    def flat(value: float, scheme: Scheme) -> List[CoveragePoint]:
        return [
            CoveragePoint(threshold_db=threshold_db, value=value, scheme=scheme, inner_radius_m=d)
            for d in grid
        ]

    series = {
        "analytic_overall": [
            CoveragePoint(threshold_db=threshold_db, value=v, inner_radius_m=d)
            for d, v in zip(grid, overall)
        ],
        "analytic_uniform": flat(uniform_value, Scheme.UNIFORM),
        "analytic_single_tier": flat(single_value, Scheme.SINGLE_TIER),
    }

    if mc is not None:
        points = []
        for d in grid:
            candidate = params_service.with_overrides(params, inner_radius_m=d)
            estimate = mc_service.estimate_coverage(
                candidate, [threshold_db], mc.n_realizations, mc.seed, mc.window_radius_m, mc.workers
            )[0].overall
            points.append(CoveragePoint(
                threshold_db=threshold_db,
                value=estimate.value,
                method=Method.MONTE_CARLO,
                std_err=estimate.std_err,
                inner_radius_m=d,
            ))
        series["mc_overall"] = points

    return SweepResult(axis_name="inner_radius_m", axis_values=grid, series=series)


def optimal_d(
    params: NetworkParams,
    threshold_db: float,
    search: SearchConfig = SearchConfig(),
) -> OptimalD:
    """
    Inner radius maximizing analytic overall coverage at one threshold.

    A log-spaced coarse scan brackets the best grid cell, then golden-section
    refinement runs between the neighbours of that cell down to width_m.
    The coverage curve is not known to be unimodal, so the result is the best
    of all evaluations, and a result on the bounds is flagged.
    """
    if not math.isfinite(threshold_db):
        raise ConfigError(f"threshold_db must be finite, got {threshold_db}")
    d_hi = search.d_hi_m if search.d_hi_m is not None else params_service.max_inner_radius(params)
    d_lo = search.d_lo_m
    if not 0.0 < d_lo < d_hi <= params_service.max_inner_radius(params) * (1.0 + 1e-12):
        raise ConfigError(f"search bounds must satisfy 0 < d_lo < d_hi <= cap, got ({d_lo}, {d_hi})")

    threshold = params_service.db_to_linear(threshold_db)
    trace: List[tuple] = []

    def evaluate(d: float) -> float:
        value = _overall_at(d, params, threshold)
        trace.append((d, value))
        return value

    grid = np.geomspace(d_lo, d_hi, search.grid_points)
    grid[0], grid[-1] = d_lo, d_hi
    values = [evaluate(float(d)) for d in grid]
    k = int(np.argmax(values))
    a = float(grid[max(k - 1, 0)])
    b = float(grid[min(k + 1, len(grid) - 1)])

    # golden-section maximization on [a, b], reusing one interior point per step
    c = b - INV_PHI * (b - a)
    e = a + INV_PHI * (b - a)
    fc, fe = evaluate(c), evaluate(e)
    while b - a > search.width_m:
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - INV_PHI * (b - a)
            fc = evaluate(c)
        else:
            a, c, fc = c, e, fe
            e = a + INV_PHI * (b - a)
            fe = evaluate(e)

    d_star, best = max(trace, key=lambda item: item[1])
    at_boundary = d_star - d_lo <= search.width_m or d_hi - d_star <= search.width_m
    if at_boundary:
        logger.warning(f"⚠️ Optimal D at T={threshold_db} dB lies on the search boundary ({d_star:.1f} m)")
    logger.info(f"✅ Optimal D at T={threshold_db} dB: {d_star:.1f} m, coverage={best:.6f}")

    return OptimalD(
        threshold_db=threshold_db,
        d_star_m=d_star,
        coverage_at_star=best,
        search_trace=trace,
        at_boundary=at_boundary,
    )


def compare_schemes(
    params: NetworkParams,
    threshold_db: float,
    mc: Optional[McConfig] = None,
) -> SchemeComparison:
    """
    Single tier, uniform two-tier and coverage-oriented coverage at one threshold.

    The coverage-oriented scheme uses the D of params. With mc, each scheme is
    also simulated with the same seed.
    """
    rows = []
    for scheme in (Scheme.SINGLE_TIER, Scheme.UNIFORM, Scheme.COVERAGE_ORIENTED):
        scheme_params = _scheme_params(params, scheme)
        analytic = _analytic_value(threshold_db, scheme_params, scheme, CoverageRegion.OVERALL)
        mc_value = mc_err = None
        if mc is not None:
            estimate = mc_service.estimate_coverage(
                scheme_params, [threshold_db], mc.n_realizations, mc.seed, mc.window_radius_m, mc.workers
            )[0].overall
            mc_value, mc_err = estimate.value, estimate.std_err
        rows.append(SchemeRow(scheme=scheme, analytic=analytic, mc=mc_value, mc_std_err=mc_err))
    return SchemeComparison(threshold_db=threshold_db, inner_radius_m=params.inner_radius_m, rows=rows)
