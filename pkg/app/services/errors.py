"""
Coverage Model Errors

Exception hierarchy shared by the services, the CLI and the HTTP routes.
Each entry point maps these onto its own failure surface (exit codes for
the CLI, JSON error envelopes for the API).
"""


class CoverageModelError(Exception):
    """Base class for every failure raised by the coverage services."""
    pass


class ConfigError(CoverageModelError, ValueError):
    """Invalid parameters, grids or configuration files."""
    pass


class QuadratureError(CoverageModelError):
    """Adaptive quadrature exhausted its subdivisions without meeting tolerance."""

    def __init__(self, message: str, estimate: float = float("nan"), abs_error: float = float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.abs_error = abs_error


class EmptyRealizationError(CoverageModelError):
    """A network realization has no candidate serving base station."""
    pass


class SimulationAbortedError(CoverageModelError):
    """Too many empty realizations; the Monte Carlo run is not trustworthy."""
    pass
