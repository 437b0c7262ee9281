"""
Analytic Coverage Service

Numerical evaluation of the received-power distributions, the conditional
Laplace transforms of the interference and the region-conditional and
overall coverage probabilities of the two-tier network under the
coverage-oriented activation rule.

Thresholds are linear here; conversion from dB happens at the interfaces.
All coverage integrals are evaluated in s = t^(-2/alpha), where they are
bounded and exponentially decaying, and are split at the image of the
breakpoint t* = P_1 / D^alpha so no piecewise kernel straddles a panel.
"""

import logging
import math
from functools import lru_cache

from app.models.params import NetworkParams
from app.models.results import CoverageRegion, Scheme
from app.services import params_service
from app.services.errors import ConfigError
from app.services.params_service import derive
from app.services.specfun_service import DEFAULT_QUADRATURE, QuadratureSpec, integrate, rho

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4096)
def _rho_at_threshold(threshold: float, alpha: float) -> float:
    # constant-argument factor rho(T, alpha); lru_cache is thread-safe and pure
    return rho(threshold, alpha)


def _require_positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise ConfigError(f"{name} must be > 0, got {value}")


def _clip(value: float) -> float:
    return min(1.0, max(0.0, value))


def _tier_weights(params: NetworkParams):
    d = derive(params)
    exponent = 2.0 / params.alpha
    macro = params.macro.density_per_m2 * d.p1_linear ** exponent
    femto = params.femto.density_per_m2 * d.p2_linear ** exponent
    return d, macro, femto


# ---------------------------------------------------------------------------
# Received-power distributions
# ---------------------------------------------------------------------------

def cdf_q_uniform(t: float, params: NetworkParams) -> float:
    """CDF of the maximum long-term received power, all femtos active."""
    _require_positive("t", t)
    d = derive(params)
    return math.exp(-math.pi * d.xi * t ** (-2.0 / params.alpha))


def pdf_q_uniform(t: float, params: NetworkParams) -> float:
    _require_positive("t", t)
    d = derive(params)
    alpha = params.alpha
    s = t ** (-2.0 / alpha)
    return (2.0 * math.pi * d.xi / alpha) * s / t * math.exp(-math.pi * d.xi * s)


def cdf_q_outer(t: float, params: NetworkParams) -> float:
    """
    CDF of the maximum received power given the user is in the outer region.

    Femto-only form above the breakpoint; two-tier form renormalized by
    exp(-pi lambda_1 D^2) at or below it.
    """
    _require_positive("t", t)
    if params.inner_radius_m == 0.0:
        return cdf_q_uniform(t, params)
    d, _, femto = _tier_weights(params)
    s = t ** (-2.0 / params.alpha)
    if t > d.breakpoint_t:
        return math.exp(-math.pi * femto * s)
    kappa1 = math.pi * params.macro.density_per_m2 * params.inner_radius_m ** 2
    return math.exp(kappa1 - math.pi * d.xi * s)


def pdf_q_outer(t: float, params: NetworkParams) -> float:
    _require_positive("t", t)
    if params.inner_radius_m == 0.0:
        return pdf_q_uniform(t, params)
    d, _, femto = _tier_weights(params)
    alpha = params.alpha
    s = t ** (-2.0 / alpha)
    if t > d.breakpoint_t:
        return (2.0 * math.pi * femto / alpha) * s / t * math.exp(-math.pi * femto * s)
    kappa1 = math.pi * params.macro.density_per_m2 * params.inner_radius_m ** 2
    return (2.0 * math.pi * d.xi / alpha) * s / t * math.exp(kappa1 - math.pi * d.xi * s)


def cdf_q_inner(t: float, params: NetworkParams) -> float:
    """
    CDF of the received power from the nearest macro BS given it lies within D.

    Zero at and below the breakpoint. The first exponent carries a minus sign,
    the only form whose limits are 0 and 1 and whose derivative is the pdf.
    """
    _require_positive("t", t)
    _require_positive("inner_radius_m", params.inner_radius_m)
    d, macro, _ = _tier_weights(params)
    if t <= d.breakpoint_t:
        return 0.0
    kappa1 = math.pi * params.macro.density_per_m2 * params.inner_radius_m ** 2
    s = t ** (-2.0 / params.alpha)
    numerator = math.exp(-math.pi * macro * s) - math.exp(-kappa1)
    return _clip(numerator / -math.expm1(-kappa1))


def pdf_q_inner(t: float, params: NetworkParams) -> float:
    _require_positive("t", t)
    _require_positive("inner_radius_m", params.inner_radius_m)
    d, macro, _ = _tier_weights(params)
    if t <= d.breakpoint_t:
        return 0.0
    alpha = params.alpha
    kappa1 = math.pi * params.macro.density_per_m2 * params.inner_radius_m ** 2
    s = t ** (-2.0 / alpha)
    return (2.0 * math.pi * macro / alpha) * s / t * math.exp(-math.pi * macro * s) / -math.expm1(-kappa1)


# ---------------------------------------------------------------------------
# Laplace transforms of the interference
# ---------------------------------------------------------------------------

def laplace_outer(threshold: float, t: float, params: NetworkParams) -> float:
    """
    Laplace transform of the interference at s = T/t, outer user.

    Femto interference is taken from the whole plane. Above the breakpoint the
    macro interferers are restricted to distances beyond D.
    """
    _require_positive("threshold", threshold)
    _require_positive("t", t)
    d, _, femto = _tier_weights(params)
    alpha = params.alpha
    s = t ** (-2.0 / alpha)
    rho_t = _rho_at_threshold(threshold, alpha)
    if t <= d.breakpoint_t:
        return math.exp(-math.pi * d.xi * rho_t * s)
    radius = params.inner_radius_m
    kappa1 = math.pi * params.macro.density_per_m2 * radius ** 2
    edge = rho(d.p1_linear * threshold / (radius ** alpha * t), alpha)
    return math.exp(-kappa1 * edge) * math.exp(-math.pi * femto * rho_t * s)


def laplace_inner(threshold: float, t: float, params: NetworkParams) -> float:
    """
    Laplace transform of the interference at s = T/t, inner user.

    Macro interference from the whole plane, femto interference from outside
    the disc B(o, D).
    """
    _require_positive("threshold", threshold)
    _require_positive("t", t)
    d, macro, _ = _tier_weights(params)
    alpha = params.alpha
    s = t ** (-2.0 / alpha)
    rho_t = _rho_at_threshold(threshold, alpha)
    macro_factor = math.exp(-math.pi * macro * rho_t * s)
    radius = params.inner_radius_m
    kappa2 = math.pi * params.femto.density_per_m2 * radius ** 2
    if kappa2 == 0.0:
        return macro_factor
    edge = rho(d.p2_linear * threshold / (radius ** alpha * t), alpha)
    return macro_factor * math.exp(-kappa2 * edge)


# ---------------------------------------------------------------------------
# Coverage probabilities
# ---------------------------------------------------------------------------

def coverage_uniform(threshold: float, params: NetworkParams, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """
    Coverage probability with every femto BS active.

    Integrated in y = pi * xi * s, where the integrand is
    exp(-(1 + rho(T)) y - T sigma^2 (y / (pi xi))^(alpha/2)).
    """
    _require_positive("threshold", threshold)
    d = derive(params)
    alpha = params.alpha
    half = alpha / 2.0
    rho_t = _rho_at_threshold(threshold, alpha)
    scale = math.pi * d.xi
    noise_coeff = threshold * d.noise_watts * scale ** (-half)

    def integrand(y: float) -> float:
        return math.exp(-(1.0 + rho_t) * y - noise_coeff * y ** half)

    return _clip(integrate(integrand, 0.0, math.inf, quad))


def coverage_outer(threshold: float, params: NetworkParams, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """
    Coverage probability of a user in the outer region.

    Two pieces: received power at or below the breakpoint (two-tier kernel
    renormalized by exp(-pi lambda_1 D^2)), and above it (femto-only pdf with
    macro interference beyond D).
    """
    _require_positive("threshold", threshold)
    if params.inner_radius_m == 0.0:
        return coverage_uniform(threshold, params, quad)

    d, _, femto = _tier_weights(params)
    alpha = params.alpha
    half = alpha / 2.0
    radius = params.inner_radius_m
    rho_t = _rho_at_threshold(threshold, alpha)
    kappa1 = math.pi * params.macro.density_per_m2 * radius ** 2

    # piece one, y = pi xi s running over [y*, inf), shifted to z = y - y*
    scale = math.pi * d.xi
    y_star = scale * radius ** 2 / d.p1_linear ** (2.0 / alpha)
    offset = kappa1 - (1.0 + rho_t) * y_star
    noise_coeff = threshold * d.noise_watts * scale ** (-half)

    def near(z: float) -> float:
        y = y_star + z
        return math.exp(offset - (1.0 + rho_t) * z - noise_coeff * y ** half)

    piece_one = integrate(near, 0.0, math.inf, quad)

    # piece two, u = s / s* over (0, 1)
    kappa2 = math.pi * femto * radius ** 2 / d.p1_linear ** (2.0 / alpha)
    if kappa2 == 0.0:
        return _clip(piece_one)
    edge_noise = threshold * d.noise_watts * radius ** alpha / d.p1_linear

    def far(u: float) -> float:
        uh = u ** half
        return math.exp(
            -edge_noise * uh
            - kappa1 * rho(threshold * uh, alpha)
            - kappa2 * (1.0 + rho_t) * u
        )

    piece_two = kappa2 * integrate(far, 0.0, 1.0, quad)
    return _clip(piece_one + piece_two)


def coverage_inner(threshold: float, params: NetworkParams, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """
    Coverage probability of a user in the inner region.

    The user is assumed to be served by its nearest macro BS; femto
    interference comes from outside B(o, D).
    """
    _require_positive("threshold", threshold)
    _require_positive("inner_radius_m", params.inner_radius_m)

    d, _, _ = _tier_weights(params)
    alpha = params.alpha
    half = alpha / 2.0
    radius = params.inner_radius_m
    rho_t = _rho_at_threshold(threshold, alpha)
    kappa1 = math.pi * params.macro.density_per_m2 * radius ** 2
    kappa2 = math.pi * params.femto.density_per_m2 * radius ** 2
    power_ratio = d.p2_linear / d.p1_linear
    edge_noise = threshold * d.noise_watts * radius ** alpha / d.p1_linear

    def integrand(u: float) -> float:
        uh = u ** half
        exponent = -edge_noise * uh - kappa1 * (1.0 + rho_t) * u
        if kappa2 > 0.0:
            exponent -= kappa2 * rho(power_ratio * threshold * uh, alpha)
        return math.exp(exponent)

    value = kappa1 / -math.expm1(-kappa1) * integrate(integrand, 0.0, 1.0, quad)
    return _clip(value)


def coverage_overall(threshold: float, params: NetworkParams, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Mixture of inner and outer coverage weighted by the region probabilities."""
    _require_positive("threshold", threshold)
    if params.inner_radius_m == 0.0:
        return coverage_uniform(threshold, params, quad)
    weight = params_service.inner_probability(params)
    inner = coverage_inner(threshold, params, quad)
    outer = coverage_outer(threshold, params, quad)
    return _clip(weight * inner + (1.0 - weight) * outer)


def coverage_single_tier_region(
    threshold: float,
    params: NetworkParams,
    region: CoverageRegion,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """
    Macro-only coverage conditioned on the region defined by params' D.

    With lambda_2 = 0 the inner and outer formulas hold exactly.
    """
    macro_only = params_service.with_overrides(params, femto_density_per_m2=0.0)
    if region == CoverageRegion.OVERALL or params.inner_radius_m == 0.0:
        return coverage_uniform(threshold, macro_only, quad)
    if region == CoverageRegion.INNER:
        return coverage_inner(threshold, macro_only, quad)
    return coverage_outer(threshold, macro_only, quad)


def coverage_for_scheme(
    threshold: float,
    params: NetworkParams,
    scheme: Scheme,
    region: CoverageRegion = CoverageRegion.OVERALL,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """
    Coverage of one deployment scheme, optionally conditioned on a region.

    Region conditioning is defined for the single tier and the
    coverage-oriented scheme; the uniform scheme only has an overall value.
    """
    if scheme == Scheme.SINGLE_TIER:
        return coverage_single_tier_region(threshold, params, region, quad)
    if scheme == Scheme.UNIFORM:
        if region != CoverageRegion.OVERALL:
            raise ConfigError("uniform deployment has no region-conditional analytic coverage")
        return coverage_uniform(threshold, params, quad)
    if region == CoverageRegion.INNER:
        return coverage_inner(threshold, params, quad)
    if region == CoverageRegion.OUTER:
        return coverage_outer(threshold, params, quad)
    return coverage_overall(threshold, params, quad)
