"""
Request Models

Pydantic models for validating incoming requests to the API.
Every request carries the network in the same JSON schema as a --config file.
"""

import math
from typing import List, Optional

from pydantic import BaseModel, Field, validator

from app.config.settings import DEFAULT_REALIZATIONS, DEFAULT_SEED, MIN_REALIZATIONS, REFERENCE_NETWORK
from app.models.params import NetworkConfig
from app.services.sweep_service import McConfig

MAX_GRID_POINTS = 200
MAX_REQUEST_REALIZATIONS = 1_000_000


def _finite(values: List[float]) -> List[float]:
    if not all(math.isfinite(v) for v in values):
        raise ValueError("values must be finite")
    return values


class AnalyticCoverageRequest(BaseModel):
    """
    Analytic coverage over a threshold grid.

    Attributes:
        network (NetworkConfig): network parameters
        thresholds_db (List[float]): SINR thresholds in dB, strictly increasing
    """

    network: NetworkConfig = Field(..., example=REFERENCE_NETWORK)
    thresholds_db: List[float] = Field(
        ...,
        min_items=1,
        max_items=MAX_GRID_POINTS,
        description="SINR thresholds in dB",
        example=[-5.0, 0.0, 5.0, 10.0],
    )

    @validator("thresholds_db")
    def validate_thresholds(cls, v):
        return _finite(v)


class SimulationRequest(AnalyticCoverageRequest):
    """Monte Carlo coverage over a threshold grid."""

    n_realizations: int = Field(
        DEFAULT_REALIZATIONS,
        ge=MIN_REALIZATIONS,
        le=MAX_REQUEST_REALIZATIONS,
        example=DEFAULT_REALIZATIONS,
    )
    seed: int = Field(DEFAULT_SEED, ge=0, example=DEFAULT_SEED)
    window_radius_m: Optional[float] = Field(None, gt=0.0)


class ThresholdSweepRequest(AnalyticCoverageRequest):
    """Threshold sweep of all schemes; mc attaches Monte Carlo series."""

    mc: Optional[McConfig] = None


class InnerRadiusSweepRequest(BaseModel):
    network: NetworkConfig = Field(..., example=REFERENCE_NETWORK)
    inner_radii_m: List[float] = Field(
        ...,
        min_items=1,
        max_items=MAX_GRID_POINTS,
        description="Inner-region radii D in meters",
        example=[0.0, 250.0, 500.0, 750.0],
    )
    threshold_db: float = Field(0.0, example=0.0)
    mc: Optional[McConfig] = None

    @validator("inner_radii_m")
    def validate_radii(cls, v):
        return _finite(v)


class OptimalDRequest(BaseModel):
    network: NetworkConfig = Field(..., example=REFERENCE_NETWORK)
    threshold_db: float = Field(0.0, example=0.0)
    d_lo_m: Optional[float] = Field(None, gt=0.0, description="Search lower bound in meters")
    d_hi_m: Optional[float] = Field(None, gt=0.0, description="Search upper bound in meters")


class CompareRequest(BaseModel):
    network: NetworkConfig = Field(..., example=REFERENCE_NETWORK)
    threshold_db: float = Field(0.0, example=0.0)
    mc: Optional[McConfig] = None
