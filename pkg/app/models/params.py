"""
Network Parameter Models

Pydantic models for the physical and deployment parameters of the two-tier
network. All models are immutable; internal units are meters, watts and
linear power ratios. dB/dBm and per-km² values only appear in NetworkConfig,
the JSON ingestion schema.
"""

import math

from pydantic import BaseModel, Extra, Field, root_validator, validator

from app.config.settings import MAX_INNER_RADIUS_FACTOR

M2_PER_KM2 = 1e6


class TierParams(BaseModel):
    """
    One tier of base stations.

    Attributes:
        tx_power_dbm (float): transmit power in dBm
        density_per_m2 (float): spatial density in points per square meter
    """

    tx_power_dbm: float = Field(..., description="Transmit power in dBm", example=46.0)
    density_per_m2: float = Field(..., ge=0.0, description="BS density per square meter", example=1e-6)

    @validator("tx_power_dbm", "density_per_m2")
    def validate_finite(cls, v, field):
        if not math.isfinite(v):
            raise ValueError(f"{field.name} must be finite, got {v}")
        return v

    class Config:
        allow_mutation = False


class NetworkParams(BaseModel):
    """
    Complete parameter set of a two-tier network under the activation rule.

    Attributes:
        macro (TierParams): tier 1, density strictly positive
        femto (TierParams): tier 2, density may be zero (single-tier baseline)
        alpha (float): path-loss exponent, > 2
        pathloss_const_db (float): L0 at the 1 m reference distance, in dB
        noise_dbm (float): noise power in dBm; -inf means noiseless
        inner_radius_m (float): deactivation radius D in meters, 0 = uniform deployment
    """

    macro: TierParams
    femto: TierParams
    alpha: float = Field(..., gt=2.0, description="Path-loss exponent", example=4.0)
    pathloss_const_db: float = Field(..., description="Path-loss constant in dB", example=-34.0)
    noise_dbm: float = Field(..., description="Noise power in dBm", example=-104.0)
    inner_radius_m: float = Field(0.0, ge=0.0, description="Inner-region radius D in meters", example=400.0)

    @validator("alpha", "pathloss_const_db", "inner_radius_m")
    def validate_finite(cls, v, field):
        if not math.isfinite(v):
            raise ValueError(f"{field.name} must be finite, got {v}")
        return v

    @validator("noise_dbm")
    def validate_noise(cls, v):
        if math.isnan(v) or v == math.inf:
            raise ValueError(f"noise_dbm must be finite or -inf, got {v}")
        return v

    @validator("macro")
    def validate_macro_density(cls, v):
        if v.density_per_m2 <= 0.0:
            raise ValueError("macro.density_per_m2 must be > 0")
        return v

    @root_validator(skip_on_failure=True)
    def validate_inner_radius_cap(cls, values):
        cap = MAX_INNER_RADIUS_FACTOR / math.sqrt(math.pi * values["macro"].density_per_m2)
        radius = values["inner_radius_m"]
        if radius > cap * (1.0 + 1e-12):
            raise ValueError(f"inner_radius_m must be <= 10/sqrt(pi*lambda_1) = {cap:.3f} m, got {radius}")
        return values

    class Config:
        allow_mutation = False


class DerivedParams(BaseModel):
    """
    Constants derived once from NetworkParams.

    Attributes:
        p1_linear, p2_linear: effective powers P_i = P_tx,i * L0 (watts, linear path loss)
        xi: sum of lambda_i * P_i^(2/alpha)
        noise_watts: linear noise power
        breakpoint_t: P_1 / D^alpha, +inf when D = 0
    """

    p1_linear: float
    p2_linear: float
    xi: float
    noise_watts: float
    breakpoint_t: float

    class Config:
        allow_mutation = False


class NetworkConfig(BaseModel):
    """
    JSON configuration schema (file or request body).

    Densities are given per square kilometer and converted on ingestion.
    Unknown keys are rejected.
    """

    macro_tx_dbm: float = Field(..., example=46.0)
    femto_tx_dbm: float = Field(..., example=20.0)
    macro_density_per_km2: float = Field(..., gt=0.0, example=1.0)
    femto_density_per_km2: float = Field(..., ge=0.0, example=10.0)
    alpha: float = Field(..., gt=2.0, example=4.0)
    pathloss_const_db: float = Field(..., example=-34.0)
    noise_dbm: float = Field(..., example=-104.0)
    inner_radius_m: float = Field(0.0, ge=0.0, example=400.0)

    def to_params(self) -> NetworkParams:
        """Convert to canonical units and validate the full parameter set."""
        return NetworkParams(
            macro=TierParams(
                tx_power_dbm=self.macro_tx_dbm,
                density_per_m2=self.macro_density_per_km2 / M2_PER_KM2,
            ),
            femto=TierParams(
                tx_power_dbm=self.femto_tx_dbm,
                density_per_m2=self.femto_density_per_km2 / M2_PER_KM2,
            ),
            alpha=self.alpha,
            pathloss_const_db=self.pathloss_const_db,
            noise_dbm=self.noise_dbm,
            inner_radius_m=self.inner_radius_m,
        )

    @classmethod
    def from_params(cls, params: NetworkParams) -> "NetworkConfig":
        return cls(
            macro_tx_dbm=params.macro.tx_power_dbm,
            femto_tx_dbm=params.femto.tx_power_dbm,
            macro_density_per_km2=params.macro.density_per_m2 * M2_PER_KM2,
            femto_density_per_km2=params.femto.density_per_m2 * M2_PER_KM2,
            alpha=params.alpha,
            pathloss_const_db=params.pathloss_const_db,
            noise_dbm=params.noise_dbm,
            inner_radius_m=params.inner_radius_m,
        )

    class Config:
        extra = Extra.forbid
        schema_extra = {
            "example": {
                "macro_tx_dbm": 46.0,
                "femto_tx_dbm": 20.0,
                "macro_density_per_km2": 1.0,
                "femto_density_per_km2": 10.0,
                "alpha": 4.0,
                "pathloss_const_db": -34.0,
                "noise_dbm": -104.0,
                "inner_radius_m": 400.0,
            }
        }
