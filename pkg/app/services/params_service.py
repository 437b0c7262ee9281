"""
Parameter Service

Unit conversion, configuration ingestion and the derived constants shared by
the analytical and Monte Carlo services.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import ValidationError

from app.config.settings import MAX_INNER_RADIUS_FACTOR
from app.models.params import DerivedParams, NetworkConfig, NetworkParams, TierParams
from app.services.errors import ConfigError

logger = logging.getLogger(__name__)


def dbm_to_watts(x: float) -> float:
    """Power in dBm to watts: 10^((x - 30) / 10)."""
    return 10.0 ** ((x - 30.0) / 10.0)


def db_to_linear(x_db: float) -> float:
    """Power ratio in dB to linear."""
    return 10.0 ** (x_db / 10.0)


def derive(params: NetworkParams) -> DerivedParams:
    """
    Compute the derived constants of a parameter set.

    Args:
        params (NetworkParams): validated parameters

    Returns:
        DerivedParams: effective powers, xi, linear noise and the breakpoint P_1 / D^alpha
    """
    gain = db_to_linear(params.pathloss_const_db)
    p1 = dbm_to_watts(params.macro.tx_power_dbm) * gain
    p2 = dbm_to_watts(params.femto.tx_power_dbm) * gain
    exponent = 2.0 / params.alpha
    xi = params.macro.density_per_m2 * p1 ** exponent + params.femto.density_per_m2 * p2 ** exponent
    noise = 0.0 if params.noise_dbm == -math.inf else dbm_to_watts(params.noise_dbm)
    radius = params.inner_radius_m
    breakpoint_t = math.inf if radius == 0.0 else p1 / radius ** params.alpha
    return DerivedParams(
        p1_linear=p1,
        p2_linear=p2,
        xi=xi,
        noise_watts=noise,
        breakpoint_t=breakpoint_t,
    )


def max_inner_radius(params: NetworkParams) -> float:
    """Largest admissible D: 10 / sqrt(pi * lambda_1)."""
    return MAX_INNER_RADIUS_FACTOR / math.sqrt(math.pi * params.macro.density_per_m2)


def inner_probability(params: NetworkParams) -> float:
    """Probability that the typical user lies in the inner region: 1 - exp(-pi lambda_1 D^2)."""
    return -math.expm1(-math.pi * params.macro.density_per_m2 * params.inner_radius_m ** 2)


def active_femto_fraction(params: NetworkParams) -> float:
    """Fraction of femto BSs left active by the activation rule: exp(-pi lambda_1 D^2)."""
    return math.exp(-math.pi * params.macro.density_per_m2 * params.inner_radius_m ** 2)


def with_overrides(params: NetworkParams, **fields: Any) -> NetworkParams:
    """
    Copy a parameter set with some fields replaced and re-validate it.

    Accepts the top-level NetworkParams fields plus the shortcuts
    ``femto_density_per_m2`` and ``macro_density_per_m2``.
    """
    data: Dict[str, Any] = params.dict()
    for tier in ("macro", "femto"):
        key = f"{tier}_density_per_m2"
        if key in fields:
            data[tier] = dict(data[tier], density_per_m2=fields.pop(key))
    data.update(fields)
    try:
        return NetworkParams(
            macro=TierParams(**data["macro"]),
            femto=TierParams(**data["femto"]),
            alpha=data["alpha"],
            pathloss_const_db=data["pathloss_const_db"],
            noise_dbm=data["noise_dbm"],
            inner_radius_m=data["inner_radius_m"],
        )
    except ValidationError as e:
        raise ConfigError(_describe_validation_error(e)) from e


def single_tier(params: NetworkParams) -> NetworkParams:
    """Macro tier alone: lambda_2 = 0, D = 0."""
    return with_overrides(params, femto_density_per_m2=0.0, inner_radius_m=0.0)


def uniform(params: NetworkParams) -> NetworkParams:
    """All femto BSs active: D = 0."""
    return with_overrides(params, inner_radius_m=0.0)


def params_from_config(config: Dict[str, Any]) -> NetworkParams:
    """
    Build NetworkParams from a JSON-schema dict.

    Raises:
        ConfigError: unknown keys, missing keys or a violated bound
    """
    try:
        return NetworkConfig.parse_obj(config).to_params()
    except ValidationError as e:
        raise ConfigError(_describe_validation_error(e)) from e


def load_network_params(path: Union[str, Path]) -> NetworkParams:
    """
    Load NetworkParams from a JSON configuration file.

    Args:
        path: file holding the NetworkConfig keys

    Raises:
        ConfigError: unreadable file, invalid JSON or invalid parameters
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e}") from e

    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")

    params = params_from_config(raw)
    logger.info(f"✅ Network parameters loaded from {path}")
    return params


def _describe_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"])
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)
