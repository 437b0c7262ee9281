"""
Sweep Routes

Threshold and inner-radius sweeps, the optimal inner-radius search and the
scheme comparison.
"""

import asyncio
import logging
from functools import partial

from fastapi import APIRouter

from app.models.request import CompareRequest, InnerRadiusSweepRequest, OptimalDRequest, ThresholdSweepRequest
from app.models.results import OptimalD, SchemeComparison, SweepResult
from app.services import params_service, sweep_service

logger = logging.getLogger(__name__)

router = APIRouter()


async def _run_blocking(fn, *args, **kwargs):
    loop = asyncio.get_event_loop()
    return await loop.run_in_executor(None, partial(fn, *args, **kwargs))


@router.post("/sweep/threshold", response_model=SweepResult)
async def sweep_threshold(request: ThresholdSweepRequest):
    params = params_service.params_from_config(request.network.dict())
    logger.info(f"📈 Threshold sweep request, mc={'on' if request.mc else 'off'}")
    return await _run_blocking(sweep_service.sweep_threshold, params, request.thresholds_db, mc=request.mc)


@router.post("/sweep/inner-radius", response_model=SweepResult)
async def sweep_inner_radius(request: InnerRadiusSweepRequest):
    params = params_service.params_from_config(request.network.dict())
    logger.info(f"📈 Inner-radius sweep request over {len(request.inner_radii_m)} radii")
    return await _run_blocking(
        sweep_service.sweep_d, params, request.inner_radii_m, request.threshold_db, mc=request.mc
    )


@router.post("/optimal-d", response_model=OptimalD)
async def optimal_inner_radius(request: OptimalDRequest):
    """
    Inner radius maximizing analytic overall coverage at one threshold.
    """
    params = params_service.params_from_config(request.network.dict())
    fields = {"d_lo_m": request.d_lo_m, "d_hi_m": request.d_hi_m}
    search = sweep_service.SearchConfig(**{k: v for k, v in fields.items() if v is not None})
    return await _run_blocking(sweep_service.optimal_d, params, request.threshold_db, search)


@router.post("/compare", response_model=SchemeComparison)
async def compare_schemes(request: CompareRequest):
    params = params_service.params_from_config(request.network.dict())
    return await _run_blocking(sweep_service.compare_schemes, params, request.threshold_db, mc=request.mc)
