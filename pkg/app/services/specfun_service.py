"""
Special Function Service

The dimensionless interference integral rho(x, alpha) and the adaptive
quadrature engine every analytical coverage integral goes through.

Quadrature is QUADPACK's adaptive Gauss-Kronrod scheme (21/10-point pair per
panel, bisection of the worst panel) via scipy.integrate.quad. Semi-infinite
ranges are mapped onto [0, 1) with u = a + v / (1 - v) before integrating.
"""

import logging
import math
from typing import Callable

from pydantic import BaseModel, Field
from scipy import integrate as scipy_integrate
from scipy import special

from app.config.settings import QUAD_ABS_TOL, QUAD_MAX_SUBDIVISIONS, QUAD_REL_TOL
from app.services.errors import ConfigError, QuadratureError

logger = logging.getLogger(__name__)


class QuadratureSpec(BaseModel):
    """
    Tolerances of one adaptive integration.

    Attributes:
        rel_tol (float): relative tolerance
        abs_tol (float): absolute tolerance
        max_subdivisions (int): panel budget before reporting non-convergence
    """

    rel_tol: float = Field(QUAD_REL_TOL, gt=0.0)
    abs_tol: float = Field(QUAD_ABS_TOL, gt=0.0)
    max_subdivisions: int = Field(QUAD_MAX_SUBDIVISIONS, ge=1)

    class Config:
        allow_mutation = False


DEFAULT_QUADRATURE = QuadratureSpec()

# rho feeds every Laplace factor; keep it well below the coverage-level tolerance
RHO_QUADRATURE = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-15, max_subdivisions=QUAD_MAX_SUBDIVISIONS)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """
    Adaptive estimate of the integral of f over (a, b), b may be +inf.

    Args:
        f: integrand, continuous on the open interval
        a: finite lower limit
        b: upper limit or math.inf
        spec: tolerances and subdivision budget

    Returns:
        float: estimate with |error| <= max(abs_tol, rel_tol * |result|)

    Raises:
        QuadratureError: subdivision budget exhausted without meeting tolerance
    """
    if not math.isfinite(a):
        raise ConfigError(f"lower integration limit must be finite, got {a}")
    if b == a:
        return 0.0

    if math.isinf(b):
        def g(v: float) -> float:
            if v >= 1.0:
                return 0.0
            w = 1.0 - v
            return f(a + v / w) / (w * w)

        lo, hi, fn = 0.0, 1.0, g
    else:
        lo, hi, fn = a, b, f

    result = scipy_integrate.quad(
        fn,
        lo,
        hi,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    value, abs_error = result[0], result[1]
    if len(result) > 3:
        allowed = max(spec.abs_tol, spec.rel_tol * abs(value))
        if not math.isfinite(value) or abs_error > allowed:
            logger.error(f"❌ Quadrature failed on ({a}, {b}): {result[3]}")
            raise QuadratureError(
                f"quadrature did not converge on ({a}, {b}): estimate={value!r}, "
                f"abs_error={abs_error:.3e} > {allowed:.3e}",
                estimate=value,
                abs_error=abs_error,
            )
        logger.debug(f"📐 Quadrature note on ({a}, {b}): {result[3]}")
    return value


def _check_alpha(alpha: float) -> None:
    if not alpha > 2.0:
        raise ConfigError(f"rho requires alpha > 2, got {alpha}")


def rho(x: float, alpha: float, spec: QuadratureSpec = RHO_QUADRATURE) -> float:
    """
    rho(x, alpha) = x^(2/alpha) * integral_{x^(-2/alpha)}^inf du / (1 + u^(alpha/2)).

    Evaluated on [0, 1] after u = x^(-2/alpha) * z^(-m) with m = 2 / (alpha - 2),
    which turns the slowly decaying tail into the bounded integrand
    x m / (1 + x z^(m alpha / 2)). rho(0, alpha) = 0.
    """
    _check_alpha(alpha)
    if x < 0.0:
        raise ConfigError(f"rho requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    m = 2.0 / (alpha - 2.0)
    power = m * alpha / 2.0
    return integrate(lambda z: x * m / (1.0 + x * z ** power), 0.0, 1.0, spec)


def rho_direct(x: float, alpha: float, spec: QuadratureSpec = RHO_QUADRATURE) -> float:
    """rho evaluated straight from its defining integral (cross-check route)."""
    _check_alpha(alpha)
    if x == 0.0:
        return 0.0
    half = alpha / 2.0
    lower = x ** (-2.0 / alpha)
    return x ** (2.0 / alpha) * integrate(lambda u: 1.0 / (1.0 + u ** half), lower, math.inf, spec)


def rho_alpha4_closed(x: float) -> float:
    """Closed form for alpha = 4: sqrt(x) * (pi/2 - arctan(1/sqrt(x)))."""
    if x == 0.0:
        return 0.0
    root = math.sqrt(x)
    return root * (math.pi / 2.0 - math.atan(1.0 / root))


def rho_hypergeometric(x: float, alpha: float) -> float:
    """Gauss hypergeometric form 2x/(alpha-2) * 2F1(1, 1-2/alpha; 2-2/alpha; -x)."""
    _check_alpha(alpha)
    if x == 0.0:
        return 0.0
    delta = 2.0 / alpha
    return 2.0 * x / (alpha - 2.0) * float(special.hyp2f1(1.0, 1.0 - delta, 2.0 - delta, -x))
