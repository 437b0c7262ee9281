"""
Default Settings

Static defaults for the coverage toolkit: the reference parameter set used in
the numerical results, quadrature tolerances, Monte Carlo defaults and the
default experiment grids.
"""

from typing import Any, Dict, List

# Reference network (two-tier, lambda_2 / lambda_1 = 10, D = 400 m)
REFERENCE_NETWORK: Dict[str, Any] = {
    "macro_tx_dbm": 46.0,
    "femto_tx_dbm": 20.0,
    "macro_density_per_km2": 1.0,
    "femto_density_per_km2": 10.0,
    "alpha": 4.0,
    "pathloss_const_db": -34.0,
    "noise_dbm": -104.0,
    "inner_radius_m": 400.0,
}

# Quadrature
QUAD_REL_TOL = 1e-9
QUAD_ABS_TOL = 1e-12
QUAD_MAX_SUBDIVISIONS = 2000

# Monte Carlo
DEFAULT_SEED = 42
DEFAULT_REALIZATIONS = 10_000
MIN_REALIZATIONS = 100
MAX_EMPTY_FRACTION = 1e-3
MAX_RESAMPLE_ATTEMPTS = 64
# window radius in units of 1/sqrt(pi * lambda_1)
WINDOW_RADIUS_FACTOR = 10.0
MIN_WINDOW_RADIUS_FACTOR = 5.0

# Inner-radius cap in units of 1/sqrt(pi * lambda_1)
MAX_INNER_RADIUS_FACTOR = 10.0

# Grids
THRESHOLD_GRID_DB = {"min": -10.0, "max": 20.0, "step": 1.0}
INNER_RADIUS_GRID_M = {"min": 0.0, "max": 1000.0, "step": 25.0}

# Optimal-D search
OPTIMAL_D_GRID_POINTS = 32
OPTIMAL_D_WIDTH_M = 1.0
OPTIMAL_D_LOWER_M = 10.0


def get_reference_network(**overrides: Any) -> Dict[str, Any]:
    """
    Get the reference network configuration as a plain dict.

    Args:
        **overrides: keys of the JSON config schema to replace

    Returns:
        Dict[str, Any]: configuration suitable for NetworkConfig.parse_obj
    """
    config = dict(REFERENCE_NETWORK)
    config.update(overrides)
    return config


def grid_values(start: float, stop: float, step: float) -> List[float]:
    """Inclusive arithmetic grid; empty when start > stop."""
    if step <= 0:
        raise ValueError(f"grid step must be positive, got {step}")
    if start > stop:
        return []
    count = int((stop - start) / step + 1e-9) + 1
    return [round(start + k * step, 10) for k in range(count)]
