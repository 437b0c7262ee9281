"""
Response Models

Pydantic models for API responses. Sweep, optimal-radius and comparison
endpoints return the result models of app.models.results directly.
"""

from typing import Any, List, Optional

from pydantic import BaseModel, Field

from app.models.results import CoverageRegion, McCoverage, Scheme


class CoverageRow(BaseModel):
    """One row of the analytic coverage table."""

    threshold_db: float = Field(..., example=0.0)
    region: CoverageRegion
    scheme: Scheme
    coverage: float = Field(..., ge=0.0, le=1.0, example=0.56)
    cdf: float = Field(..., ge=0.0, le=1.0, example=0.44)


class AnalyticCoverageResponse(BaseModel):
    rows: List[CoverageRow]


class SimulationResponse(BaseModel):
    """
    Monte Carlo coverage per threshold.

    Attributes:
        seed (int): base seed, so the run can be reproduced
        n_realizations (int): realizations drawn
        results (List[McCoverage]): one entry per threshold
    """

    seed: int
    n_realizations: int
    results: List[McCoverage]


class HealthResponse(BaseModel):
    status: str = Field(..., example="healthy")
    service: str = Field(..., example="femtocov")
    version: str = Field(..., example="1.0.0")


class ErrorResponse(BaseModel):
    """
    Model for error responses.

    Attributes:
        error (bool): Always True for error responses
        message (str): Human-readable error message
        status_code (int): HTTP status code
        details (Optional[Any]): Additional error details
    """

    error: bool = Field(default=True, description="Indicates this is an error response")
    message: str = Field(..., description="Human-readable error message", example="Validation error")
    status_code: int = Field(..., description="HTTP status code", example=422)
    details: Optional[Any] = Field(None, description="Additional error details")
