"""
Network Realization Models

Sampled base-station patterns, one network realization with its femto
activation mask, and the SINR sample taken at the typical user.
"""

import numpy as np
from pydantic import BaseModel, Field, root_validator, validator

from app.models.results import RegionLabel


class PointPattern(BaseModel):
    """
    Base-station locations of one tier inside a disc centered at the origin.

    Attributes:
        points (np.ndarray): (n, 2) array of coordinates in meters, read-only
        window_radius_m (float): radius of the sampling disc
    """

    points: np.ndarray
    window_radius_m: float = Field(..., gt=0.0)

    @validator("points", pre=True)
    def validate_points(cls, v):
        arr = np.asarray(v, dtype=float).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    @root_validator(skip_on_failure=True)
    def validate_inside_window(cls, values):
        points = values["points"]
        radius = values["window_radius_m"]
        if points.size and np.max(np.einsum("ij,ij->i", points, points)) > radius ** 2 * (1.0 + 1e-12):
            raise ValueError(f"points must lie within the window of radius {radius} m")
        return values

    def __len__(self) -> int:
        return int(self.points.shape[0])

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False


class NetworkRealization(BaseModel):
    """
    Macro and femto patterns of one realization.

    femto_active[j] is True iff femto j has no macro BS within D.
    origin_region is INNER iff the nearest macro BS is closer than D.
    """

    macro: PointPattern
    femto: PointPattern
    femto_active: np.ndarray
    origin_region: RegionLabel
    inner_radius_m: float = Field(..., ge=0.0)

    @validator("femto_active", pre=True)
    def validate_mask(cls, v):
        mask = np.asarray(v, dtype=bool).reshape(-1)
        mask.setflags(write=False)
        return mask

    @root_validator(skip_on_failure=True)
    def validate_mask_length(cls, values):
        if values["femto_active"].shape[0] != len(values["femto"]):
            raise ValueError("femto_active must align with femto.points")
        return values

    @property
    def active_femto_points(self) -> np.ndarray:
        return self.femto.points[self.femto_active]

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False


class SinrSample(BaseModel):
    """SINR at the typical user with its region and serving tier (1 macro, 2 femto)."""

    sinr_linear: float = Field(..., ge=0.0)
    region: RegionLabel
    serving_tier: int = Field(..., ge=1, le=2)

    class Config:
        allow_mutation = False
