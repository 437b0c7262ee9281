from fastapi import FastAPI, Request, HTTPException
from fastapi.responses import JSONResponse
from fastapi.exceptions import RequestValidationError
import logging
import os
from dotenv import load_dotenv

# Import routes
from app.routes.coverage import router as coverage_router
from app.routes.sweep import router as sweep_router

from app.models.response import ErrorResponse, HealthResponse
from app.services.errors import ConfigError, CoverageModelError, QuadratureError, SimulationAbortedError

# Load environment variables from .env file
load_dotenv()

# Configure logging
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO").upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

SERVICE_NAME = "femtocov"
VERSION = "1.0.0"

# Create FastAPI instance
app = FastAPI(
    title="Femtocell Coverage API",
    description="Coverage probability of two-tier macro/femto networks under coverage-oriented femto activation",
    version=VERSION
)

# -------------------------
# Include routers
# -------------------------
ERROR_RESPONSES = {422: {"model": ErrorResponse}, 500: {"model": ErrorResponse}}

app.include_router(coverage_router, prefix="/api/v1", tags=["Coverage"], responses=ERROR_RESPONSES)
app.include_router(sweep_router, prefix="/api/v1", tags=["Sweeps"], responses=ERROR_RESPONSES)


@app.on_event("startup")
async def startup_event():
    logger.info("🚀 Starting up coverage API...")


# -------------------------
# Health Check
# -------------------------
@app.get("/health", response_model=HealthResponse)
async def health_check():
    return HealthResponse(status="healthy", service=SERVICE_NAME, version=VERSION)


# -------------------------
# Exception Handlers
# -------------------------
def _error(status_code: int, message: str, **extra) -> JSONResponse:
    body = ErrorResponse(message=message, status_code=status_code, **extra)
    return JSONResponse(status_code=status_code, content=body.dict(exclude_none=True))


@app.exception_handler(HTTPException)
async def http_exception_handler(request: Request, exc: HTTPException):
    logger.error(f"HTTP error {exc.status_code}: {exc.detail}")
    return _error(exc.status_code, exc.detail)


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    logger.error(f"Validation error: {exc.errors()}")
    return _error(422, "Validation error", details=exc.errors())


@app.exception_handler(ConfigError)
async def config_exception_handler(request: Request, exc: ConfigError):
    logger.error(f"❌ Configuration error: {exc}")
    return _error(422, str(exc))


@app.exception_handler(QuadratureError)
async def quadrature_exception_handler(request: Request, exc: QuadratureError):
    logger.error(f"❌ Quadrature failure: {exc} (estimate={exc.estimate}, abs_error={exc.abs_error})")
    return _error(500, f"Quadrature failure: {exc}")


@app.exception_handler(SimulationAbortedError)
async def simulation_exception_handler(request: Request, exc: SimulationAbortedError):
    logger.error(f"❌ Simulation aborted: {exc}")
    return _error(500, f"Simulation aborted: {exc}")


@app.exception_handler(CoverageModelError)
async def coverage_exception_handler(request: Request, exc: CoverageModelError):
    logger.error(f"❌ Coverage model error: {exc}")
    return _error(500, str(exc))


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception):
    logger.error(f"Unexpected error: {str(exc)}")
    return _error(500, "Internal server error")


# -------------------------
# Root Endpoint
# -------------------------
@app.get("/")
async def root():
    return {
        "message": "Femtocell Coverage API",
        "version": VERSION,
        "docs_url": "/docs",
        "health_check": "/health",
        "endpoints": {
            "analytic": "/api/v1/coverage/analytic",
            "simulate": "/api/v1/coverage/simulate",
            "sweep_threshold": "/api/v1/sweep/threshold",
            "sweep_inner_radius": "/api/v1/sweep/inner-radius",
            "optimal_d": "/api/v1/optimal-d",
            "compare": "/api/v1/compare"
        }
    }


if __name__ == "__main__":
    import uvicorn
    port = int(os.getenv("PORT", 8080))
    host = os.getenv("HOST", "0.0.0.0")

    logger.info(f"🚀 Starting server on {host}:{port}")

    uvicorn.run(
        "app.main:app",
        host=host,
        port=port,
        log_level=os.getenv("LOG_LEVEL", "info").lower(),
        access_log=False,
        workers=1
    )
