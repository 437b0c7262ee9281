"""
Command-line front end.

Every command resolves one network (a JSON --config file or inline flags,
never both), computes all rows first and only then writes one CSV file.
Logs and the echoed seed go to standard error.

Exit status: 0 success, 2 configuration error, 3 quadrature failure,
4 I/O failure, 5 simulation aborted.
"""

import functools
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import pandas as pd
from click.core import ParameterSource
from pydantic import ValidationError

from app.config.settings import (
    DEFAULT_REALIZATIONS,
    DEFAULT_SEED,
    INNER_RADIUS_GRID_M,
    MIN_REALIZATIONS,
    OPTIMAL_D_LOWER_M,
    REFERENCE_NETWORK,
    THRESHOLD_GRID_DB,
    grid_values,
)
from app.models.params import NetworkParams
from app.models.results import CoverageRegion, SweepResult
from app.services import mc_service, params_service, sweep_service
from app.services.errors import ConfigError, QuadratureError, SimulationAbortedError

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_QUADRATURE = 3
EXIT_IO = 4
EXIT_ABORTED = 5

FLOAT_FORMAT = "%.6f"

NETWORK_FLAGS = {
    "macro_tx_dbm": ("--macro-tx-dbm", "Macro transmit power in dBm."),
    "femto_tx_dbm": ("--femto-tx-dbm", "Femto transmit power in dBm."),
    "macro_density_per_km2": ("--macro-density", "Macro density per km^2."),
    "femto_density_per_km2": ("--femto-density", "Femto density per km^2."),
    "alpha": ("--alpha", "Path-loss exponent, > 2."),
    "pathloss_const_db": ("--pathloss-db", "Path-loss constant in dB."),
    "noise_dbm": ("--noise-dbm", "Noise power in dBm; -inf for a noiseless network."),
    "inner_radius_m": ("--inner-radius", "Inner-region radius D in meters."),
}


class CsvWriteError(Exception):
    pass


def network_options(fn: Callable) -> Callable:
    """Attach --config and the inline network flags to a command."""
    for key, (flag, help_text) in reversed(list(NETWORK_FLAGS.items())):
        fn = click.option(
            flag, key, type=float, default=REFERENCE_NETWORK[key], show_default=True, help=help_text
        )(fn)
    return click.option(
        "--config", "config_path", type=click.Path(dir_okay=False), default=None,
        help="JSON network configuration; excludes the inline flags.",
    )(fn)


def threshold_options(fn: Callable) -> Callable:
    fn = click.option("--t-step", type=float, default=THRESHOLD_GRID_DB["step"], show_default=True)(fn)
    fn = click.option("--t-max", type=float, default=THRESHOLD_GRID_DB["max"], show_default=True)(fn)
    return click.option("--t-min", type=float, default=THRESHOLD_GRID_DB["min"], show_default=True,
                        help="Threshold grid in dB (inclusive).")(fn)


def mc_options(fn: Callable) -> Callable:
    fn = click.option("--window-radius", type=float, default=None,
                      help="Sampling window radius in meters [default: 10/sqrt(pi*lambda_1)].")(fn)
    fn = click.option("--n", "n_realizations", type=click.IntRange(min=MIN_REALIZATIONS),
                      default=DEFAULT_REALIZATIONS, show_default=True, help="Monte Carlo realizations.")(fn)
    return click.option("--seed", type=click.IntRange(min=0), default=DEFAULT_SEED, show_default=True,
                        help="Base seed of the per-realization random streams.")(fn)


def out_option(fn: Callable) -> Callable:
    fn = click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
                      help="Worker processes; results do not depend on it.")(fn)
    return click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True,
                        help="Output CSV path.")(fn)


def exits_on_error(fn: Callable) -> Callable:
    """Map domain failures onto exit codes; nothing is written on failure."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            fn(*args, **kwargs)
        except ConfigError as e:
            _fail(EXIT_CONFIG, f"configuration error: {e}")
        except QuadratureError as e:
            _fail(EXIT_QUADRATURE, f"quadrature failure: {e}")
        except SimulationAbortedError as e:
            _fail(EXIT_ABORTED, f"simulation aborted: {e}")
        except CsvWriteError as e:
            _fail(EXIT_IO, f"I/O failure: {e}")

    return wrapper


def _fail(code: int, message: str) -> None:
    click.echo(f"❌ {message}", err=True)
    sys.exit(code)


def _resolve_network(ctx: click.Context, config_path: Optional[str], values: Dict[str, float]) -> NetworkParams:
    inline = [NETWORK_FLAGS[k][0] for k in values if ctx.get_parameter_source(k) == ParameterSource.COMMANDLINE]
    if config_path is not None:
        if inline:
            raise ConfigError(f"--config cannot be combined with {', '.join(inline)}")
        return params_service.load_network_params(config_path)
    return params_service.params_from_config(values)


def _grid(start: float, stop: float, step: float, name: str) -> List[float]:
    try:
        return grid_values(start, stop, step)
    except ValueError as e:
        raise ConfigError(f"{name}: {e}") from e


def _echo_seed(seed: int) -> None:
    click.echo(f"seed={seed}", err=True)


def _write_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str], out_path: str) -> None:
    frame = pd.DataFrame(list(rows), columns=list(columns))
    try:
        frame.to_csv(out_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise CsvWriteError(f"cannot write {out_path}: {e}") from e
    logger.info(f"✅ Wrote {len(frame)} rows to {out_path}")


def _mc_config(enabled: bool, n_realizations: int, seed: int, window_radius: Optional[float],
               workers: int) -> Optional[sweep_service.McConfig]:
    if not enabled:
        return None
    _echo_seed(seed)
    try:
        return sweep_service.McConfig(
            n_realizations=n_realizations, seed=seed, window_radius_m=window_radius, workers=workers
        )
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def _axis_rows(result: SweepResult) -> List[Dict[str, Any]]:
    rows = []
    for name, points in result.series.items():
        for axis_value, point in zip(result.axis_values, points):
            rows.append({"axis": axis_value, "series": name, "value": point.value, "std_err": point.std_err})
    return rows


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for progress logs, -vv for debug.")
def cli(verbose: int) -> None:
    """Coverage of two-tier macro/femto networks under coverage-oriented femto activation."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


@cli.command()
@network_options
@threshold_options
@out_option
@click.pass_context
@exits_on_error
def analytic(ctx, config_path, t_min, t_max, t_step, out_path, workers, **network):
    """Analytic coverage per threshold, region and deployment scheme."""
    params = _resolve_network(ctx, config_path, network)
    grid = _grid(t_min, t_max, t_step, "threshold grid")
    result = sweep_service.sweep_threshold(params, grid, workers=workers)

    rows = []
    for k, threshold_db in enumerate(result.axis_values):
        for points in result.series.values():
            point = points[k]
            rows.append({
                "threshold_db": threshold_db,
                "region": point.region.value,
                "scheme": point.scheme.value,
                "coverage": point.value,
                "cdf": point.cdf,
            })
    _write_csv(rows, ["threshold_db", "region", "scheme", "coverage", "cdf"], out_path)


@cli.command()
@network_options
@threshold_options
@mc_options
@out_option
@click.pass_context
@exits_on_error
def simulate(ctx, config_path, t_min, t_max, t_step, seed, n_realizations, window_radius, out_path, workers,
             **network):
    """Monte Carlo coverage per threshold and region."""
    params = _resolve_network(ctx, config_path, network)
    grid = _grid(t_min, t_max, t_step, "threshold grid")
    if not grid:
        raise ConfigError("threshold grid is empty")
    _echo_seed(seed)
    estimates = mc_service.estimate_coverage(params, grid, n_realizations, seed, window_radius, workers)

    rows = []
    for estimate in estimates:
        for region in (CoverageRegion.INNER, CoverageRegion.OUTER, CoverageRegion.OVERALL):
            e = estimate.for_region(region)
            if e is None:
                continue
            rows.append({
                "threshold_db": estimate.threshold_db,
                "region": region.value,
                "coverage": e.value,
                "std_err": e.std_err,
                "n_samples": e.n_samples,
            })
    _write_csv(rows, ["threshold_db", "region", "coverage", "std_err", "n_samples"], out_path)


@cli.command("sweep-t")
@network_options
@threshold_options
@mc_options
@click.option("--mc", "with_mc", is_flag=True, help="Attach Monte Carlo series.")
@out_option
@click.pass_context
@exits_on_error
def sweep_t(ctx, config_path, t_min, t_max, t_step, seed, n_realizations, window_radius, with_mc, out_path,
            workers, **network):
    """Coverage versus SINR threshold for every scheme."""
    params = _resolve_network(ctx, config_path, network)
    grid = _grid(t_min, t_max, t_step, "threshold grid")
    mc = _mc_config(with_mc, n_realizations, seed, window_radius, workers)
    result = sweep_service.sweep_threshold(params, grid, mc=mc, workers=workers)
    _write_csv(_axis_rows(result), ["axis", "series", "value", "std_err"], out_path)


@cli.command("sweep-d")
@network_options
@click.option("--d-min", type=float, default=INNER_RADIUS_GRID_M["min"], show_default=True,
              help="Inner-radius grid in meters (inclusive).")
@click.option("--d-max", type=float, default=INNER_RADIUS_GRID_M["max"], show_default=True)
@click.option("--d-step", type=float, default=INNER_RADIUS_GRID_M["step"], show_default=True)
@click.option("--threshold-db", type=float, default=0.0, show_default=True)
@mc_options
@click.option("--mc", "with_mc", is_flag=True, help="Attach a Monte Carlo series.")
@out_option
@click.pass_context
@exits_on_error
def sweep_d(ctx, config_path, d_min, d_max, d_step, threshold_db, seed, n_realizations, window_radius, with_mc,
            out_path, workers, **network):
    """Overall coverage versus inner radius D at one threshold."""
    params = _resolve_network(ctx, config_path, network)
    grid = _grid(d_min, d_max, d_step, "inner-radius grid")
    mc = _mc_config(with_mc, n_realizations, seed, window_radius, workers)
    result = sweep_service.sweep_d(params, grid, threshold_db, mc=mc, workers=workers)
    _write_csv(_axis_rows(result), ["axis", "series", "value", "std_err"], out_path)


@cli.command("optimal-d")
@network_options
@threshold_options
@click.option("--d-lo", type=float, default=OPTIMAL_D_LOWER_M, show_default=True, help="Search lower bound (m).")
@click.option("--d-hi", type=float, default=None, help="Search upper bound (m) [default: 10/sqrt(pi*lambda_1)].")
@out_option
@click.pass_context
@exits_on_error
def optimal_d(ctx, config_path, t_min, t_max, t_step, d_lo, d_hi, out_path, workers, **network):
    """Inner radius maximizing overall coverage at each threshold."""
    params = _resolve_network(ctx, config_path, network)
    grid = _grid(t_min, t_max, t_step, "threshold grid")
    if not grid:
        raise ConfigError("threshold grid is empty")
    try:
        search = sweep_service.SearchConfig(d_lo_m=d_lo, d_hi_m=d_hi)
    except ValidationError as e:
        raise ConfigError(str(e)) from e

    results = sweep_service.map_ordered(
        functools.partial(sweep_service.optimal_d, params, search=search), grid, workers
    )
    rows = [
        {
            "threshold_db": r.threshold_db,
            "d_star_m": r.d_star_m,
            "coverage": r.coverage_at_star,
            "boundary": int(r.at_boundary),
        }
        for r in results
    ]
    _write_csv(rows, ["threshold_db", "d_star_m", "coverage", "boundary"], out_path)


@cli.command()
@network_options
@click.option("--threshold-db", type=float, default=0.0, show_default=True)
@mc_options
@click.option("--mc", "with_mc", is_flag=True, help="Add Monte Carlo estimates.")
@out_option
@click.pass_context
@exits_on_error
def compare(ctx, config_path, threshold_db, seed, n_realizations, window_radius, with_mc, out_path, workers,
            **network):
    """Single tier, uniform and coverage-oriented coverage at one threshold."""
    params = _resolve_network(ctx, config_path, network)
    mc = _mc_config(with_mc, n_realizations, seed, window_radius, workers)
    comparison = sweep_service.compare_schemes(params, threshold_db, mc=mc)
    rows = [
        {"scheme": r.scheme.value, "analytic": r.analytic, "mc": r.mc, "std_err": r.mc_std_err}
        for r in comparison.rows
    ]
    _write_csv(rows, ["scheme", "analytic", "mc", "std_err"], out_path)


@cli.command("region-map")
@network_options
@click.option("--seed", type=click.IntRange(min=0), default=DEFAULT_SEED, show_default=True)
@click.option("--window-radius", type=float, default=None,
              help="Sampling window radius in meters [default: 10/sqrt(pi*lambda_1)].")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True, help="Output CSV path.")
@click.pass_context
@exits_on_error
def region_map(ctx, config_path, seed, window_radius, out_path, **network):
    """Base stations of one realization labelled macro, femto_active, femto_inactive."""
    params = _resolve_network(ctx, config_path, network)
    _echo_seed(seed)
    radius = window_radius if window_radius is not None else mc_service.default_window_radius(params)
    realization = mc_service.realize(params, radius, mc_service.realization_rng(seed, 0))
    _write_csv(mc_service.region_map_rows(realization), ["kind", "x_m", "y_m"], out_path)


def main() -> None:
    cli(prog_name="femtocov")


if __name__ == "__main__":
    main()
