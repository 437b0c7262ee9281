"""
Result Models

Pydantic models for coverage results: labelled coverage points, Monte Carlo
estimates, sweeps, optimal-radius searches and scheme comparisons.
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, root_validator


class RegionLabel(str, Enum):
    """Where the typical user sits relative to the macro BSs."""

    INNER = "inner"
    OUTER = "outer"


class CoverageRegion(str, Enum):
    """Conditioning of a coverage value: one region or the whole plane."""

    INNER = "inner"
    OUTER = "outer"
    OVERALL = "overall"


class Method(str, Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte_carlo"


class Scheme(str, Enum):
    """Femto deployment schemes compared throughout."""

    SINGLE_TIER = "single_tier"
    UNIFORM = "uniform"
    COVERAGE_ORIENTED = "coverage_oriented"


class CoveragePoint(BaseModel):
    """
    One sample of a coverage curve.

    Attributes:
        threshold_db (float): SINR threshold T in dB
        value (float): coverage probability P[SINR > T]
        region (CoverageRegion): conditioning region
        method (Method): analytic or Monte Carlo
        std_err (float): standard error, 0 for analytic values
        scheme (Scheme): deployment scheme
        inner_radius_m (Optional[float]): D used for this point
    """

    threshold_db: float
    value: float = Field(..., ge=0.0, le=1.0)
    region: CoverageRegion = CoverageRegion.OVERALL
    method: Method = Method.ANALYTIC
    std_err: float = Field(0.0, ge=0.0)
    scheme: Scheme = Scheme.COVERAGE_ORIENTED
    inner_radius_m: Optional[float] = None

    @property
    def cdf(self) -> float:
        """SINR CDF at the threshold, 1 - coverage."""
        return 1.0 - self.value

    class Config:
        allow_mutation = False


class McEstimate(BaseModel):
    """
    Monte Carlo frequency estimate of a coverage probability.

    n_inner and n_outer split n_samples by the region of the typical user.
    """

    value: float = Field(..., ge=0.0, le=1.0)
    std_err: float = Field(..., ge=0.0)
    n_samples: int = Field(..., ge=1)
    n_inner: int = Field(..., ge=0)
    n_outer: int = Field(..., ge=0)

    @root_validator(skip_on_failure=True)
    def validate_counts(cls, values):
        if values["n_inner"] + values["n_outer"] != values["n_samples"]:
            raise ValueError("n_inner + n_outer must equal n_samples")
        return values

    class Config:
        allow_mutation = False


class McCoverage(BaseModel):
    """Per-threshold Monte Carlo result; a stratum with no samples is None."""

    threshold_db: float
    overall: McEstimate
    inner: Optional[McEstimate] = None
    outer: Optional[McEstimate] = None

    def for_region(self, region: CoverageRegion) -> Optional[McEstimate]:
        return getattr(self, region.value)

    class Config:
        allow_mutation = False


class SweepResult(BaseModel):
    """
    Named coverage series over a shared axis.

    Attributes:
        axis_name (str): "threshold_db" or "inner_radius_m"
        axis_values (List[float]): the grid
        series (Dict[str, List[CoveragePoint]]): one point per axis value per series
    """

    axis_name: str
    axis_values: List[float]
    series: Dict[str, List[CoveragePoint]] = Field(default_factory=dict)

    @root_validator(skip_on_failure=True)
    def validate_lengths(cls, values):
        n = len(values["axis_values"])
        for name, points in values["series"].items():
            if len(points) != n:
                raise ValueError(f"series {name} has {len(points)} points, axis has {n}")
        return values

    class Config:
        allow_mutation = False


class OptimalD(BaseModel):
    """
    Result of the optimal inner-radius search at one threshold.

    search_trace holds every (D, coverage) evaluation in evaluation order.
    at_boundary is set when the best D sits on the search bounds.
    """

    threshold_db: float
    d_star_m: float
    coverage_at_star: float
    search_trace: List[Tuple[float, float]]
    at_boundary: bool = False

    class Config:
        allow_mutation = False


class SchemeRow(BaseModel):
    scheme: Scheme
    analytic: float
    mc: Optional[float] = None
    mc_std_err: Optional[float] = None

    class Config:
        allow_mutation = False


class SchemeComparison(BaseModel):
    """Single tier, uniform and coverage-oriented coverage at one threshold."""

    threshold_db: float
    inner_radius_m: float
    rows: List[SchemeRow]

    def row(self, scheme: Scheme) -> SchemeRow:
        return next(r for r in self.rows if r.scheme == scheme)

    class Config:
        allow_mutation = False
