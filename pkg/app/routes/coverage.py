"""
Coverage Routes

Analytic and Monte Carlo coverage over a threshold grid. The numerical work
is blocking, so it runs in the default executor.
"""

import asyncio
import logging
from functools import partial

from fastapi import APIRouter

from app.models.request import AnalyticCoverageRequest, SimulationRequest
from app.models.response import AnalyticCoverageResponse, CoverageRow, SimulationResponse
from app.services import mc_service, params_service, sweep_service

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post("/coverage/analytic", response_model=AnalyticCoverageResponse)
async def analytic_coverage(request: AnalyticCoverageRequest):
    """
    Analytic coverage of every scheme and region at each threshold.
    """
    params = params_service.params_from_config(request.network.dict())
    logger.info(f"📐 Analytic coverage request for {len(request.thresholds_db)} thresholds")

    loop = asyncio.get_event_loop()
    result = await loop.run_in_executor(
        None, partial(sweep_service.sweep_threshold, params, request.thresholds_db)
    )

    rows = []
    for k, threshold_db in enumerate(result.axis_values):
        for points in result.series.values():
            point = points[k]
            rows.append(CoverageRow(
                threshold_db=threshold_db,
                region=point.region,
                scheme=point.scheme,
                coverage=point.value,
                cdf=point.cdf,
            ))
    return AnalyticCoverageResponse(rows=rows)


@router.post("/coverage/simulate", response_model=SimulationResponse)
async def simulate_coverage(request: SimulationRequest):
    """
    Monte Carlo coverage (overall, inner, outer) at each threshold.
    """
    params = params_service.params_from_config(request.network.dict())
    logger.info(f"🎲 Simulation request: n={request.n_realizations}, seed={request.seed}")

    loop = asyncio.get_event_loop()
    results = await loop.run_in_executor(
        None,
        partial(
            mc_service.estimate_coverage,
            params,
            request.thresholds_db,
            request.n_realizations,
            request.seed,
            request.window_radius_m,
        ),
    )
    return SimulationResponse(seed=request.seed, n_realizations=request.n_realizations, results=results)
