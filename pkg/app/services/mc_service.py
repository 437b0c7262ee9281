"""
Monte Carlo Coverage Service

Independent ground truth for the analytical results: sample Poisson networks
around a typical user at the origin, apply the femto activation rule,
associate by maximum long-term received power, draw Rayleigh fading and
estimate region-conditional and overall coverage.

Every realization i draws from its own Philox stream keyed by
(base_seed, i, attempt), so any realization can be recomputed on its own and
results do not depend on the number of workers.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from app.config.settings import (
    DEFAULT_SEED,
    MAX_EMPTY_FRACTION,
    MAX_RESAMPLE_ATTEMPTS,
    MIN_REALIZATIONS,
    MIN_WINDOW_RADIUS_FACTOR,
    WINDOW_RADIUS_FACTOR,
)
from app.models.network import NetworkRealization, PointPattern, SinrSample
from app.models.params import NetworkParams
from app.models.results import McCoverage, McEstimate, RegionLabel
from app.services.errors import ConfigError, EmptyRealizationError, SimulationAbortedError
from app.services.params_service import db_to_linear, derive

logger = logging.getLogger(__name__)


def realization_rng(base_seed: int, index: int, attempt: int = 0) -> np.random.Generator:
    """Independent counter-based stream for one realization attempt."""
    seq = np.random.SeedSequence(entropy=base_seed, spawn_key=(index, attempt))
    return np.random.Generator(np.random.Philox(seq))


def default_window_radius(params: NetworkParams) -> float:
    """R = 10 / sqrt(pi * lambda_1)."""
    return WINDOW_RADIUS_FACTOR / math.sqrt(math.pi * params.macro.density_per_m2)


def sample_ppp(density: float, window_radius_m: float, rng: np.random.Generator) -> PointPattern:
    """
    Homogeneous PPP on a disc centered at the origin.

    Args:
        density (float): points per square meter, >= 0
        window_radius_m (float): disc radius, > 0
        rng: random stream

    Returns:
        PointPattern: Poisson(density * pi * R^2) points, uniform on the disc
    """
    if density < 0.0:
        raise ConfigError(f"density must be >= 0, got {density}")
    if not window_radius_m > 0.0:
        raise ConfigError(f"window radius must be > 0, got {window_radius_m}")

    count = rng.poisson(density * math.pi * window_radius_m ** 2)
    radii = window_radius_m * np.sqrt(rng.random(count))
    angles = 2.0 * math.pi * rng.random(count)
    points = np.column_stack((radii * np.cos(angles), radii * np.sin(angles)))
    return PointPattern(points=points, window_radius_m=window_radius_m)


def realize(
    params: NetworkParams,
    window_radius_m: float,
    rng: np.random.Generator,
    label_radius_m: Optional[float] = None,
) -> NetworkRealization:
    """
    One network realization with the activation rule applied.

    Macro BSs are sampled on radius R + D so every femto inside R sees all
    macro BSs that could deactivate it.

    label_radius_m sets the radius that labels the typical user inner or
    outer and defaults to D. The uniform deployment (D = 0) passes the D of
    the network it is compared with, so its users split into the same regions
    while every femto stays active.
    """
    minimum = MIN_WINDOW_RADIUS_FACTOR / math.sqrt(math.pi * params.macro.density_per_m2)
    if window_radius_m < minimum:
        raise ConfigError(f"window radius must be >= {minimum:.1f} m, got {window_radius_m}")

    radius = params.inner_radius_m
    label_radius = radius if label_radius_m is None else label_radius_m
    if label_radius < 0.0:
        raise ConfigError(f"label radius must be >= 0, got {label_radius}")
    macro = sample_ppp(params.macro.density_per_m2, window_radius_m + max(radius, label_radius), rng)
    femto = sample_ppp(params.femto.density_per_m2, window_radius_m, rng)

    if radius == 0.0 or len(macro) == 0:
        active = np.ones(len(femto), dtype=bool)
    elif len(femto) == 0:
        active = np.zeros(0, dtype=bool)
    else:
        nearest, _ = cKDTree(macro.points).query(femto.points)
        active = nearest >= radius

    if len(macro) and label_radius > 0.0:
        origin_distance = float(np.min(np.hypot(macro.points[:, 0], macro.points[:, 1])))
        region = RegionLabel.INNER if origin_distance < label_radius else RegionLabel.OUTER
    else:
        region = RegionLabel.OUTER

    return NetworkRealization(
        macro=macro,
        femto=femto,
        femto_active=active,
        origin_region=region,
        inner_radius_m=radius,
    )


def sinr_at_origin(
    realization: NetworkRealization,
    params: NetworkParams,
    rng: np.random.Generator,
) -> SinrSample:
    """
    SINR at the typical user of one realization.

    The serving BS maximizes P_i * r^-alpha over macro BSs and active femto
    BSs (ties go to the macro tier); every other macro BS and active femto BS
    interferes. Fading powers are i.i.d. exponential(1).

    Raises:
        EmptyRealizationError: no macro BS and no active femto BS
    """
    d = derive(params)
    alpha = params.alpha
    macro = realization.macro.points
    femto = realization.active_femto_points
    if macro.shape[0] == 0 and femto.shape[0] == 0:
        raise EmptyRealizationError("realization has no candidate serving base station")

    dist_macro = np.hypot(macro[:, 0], macro[:, 1])
    dist_femto = np.hypot(femto[:, 0], femto[:, 1])
    power = np.concatenate((
        d.p1_linear * dist_macro ** (-alpha),
        d.p2_linear * dist_femto ** (-alpha),
    ))
    n_macro = dist_macro.shape[0]

    best_macro = float(np.max(power[:n_macro])) if n_macro else -math.inf
    best_femto = float(np.max(power[n_macro:])) if femto.shape[0] else -math.inf
    if best_macro >= best_femto:
        server, tier = int(np.argmax(power[:n_macro])), 1
    else:
        server, tier = n_macro + int(np.argmax(power[n_macro:])), 2

    fading = rng.exponential(1.0, size=power.shape[0])
    received = power * fading
    signal = float(received[server])
    received[server] = 0.0
    denominator = float(np.sum(received)) + d.noise_watts
    sinr = math.inf if denominator == 0.0 else signal / denominator

    return SinrSample(sinr_linear=sinr, region=realization.origin_region, serving_tier=tier)


def _simulate_indices(
    params: NetworkParams,
    indices: Sequence[int],
    base_seed: int,
    window_radius_m: float,
    label_radius_m: Optional[float] = None,
) -> Tuple[List[SinrSample], int]:
    samples: List[SinrSample] = []
    empty = 0
    for index in indices:
        for attempt in range(MAX_RESAMPLE_ATTEMPTS):
            rng = realization_rng(base_seed, index, attempt)
            realization = realize(params, window_radius_m, rng, label_radius_m)
            try:
                samples.append(sinr_at_origin(realization, params, rng))
                break
            except EmptyRealizationError:
                empty += 1
        else:
            raise SimulationAbortedError(
                f"realization {index} stayed empty after {MAX_RESAMPLE_ATTEMPTS} attempts"
            )
    return samples, empty


def _chunks(n: int, parts: int) -> List[range]:
    size = max(1, math.ceil(n / parts))
    return [range(start, min(n, start + size)) for start in range(0, n, size)]


def simulate_sinr(
    params: NetworkParams,
    n_realizations: int,
    base_seed: int = DEFAULT_SEED,
    window_radius_m: Optional[float] = None,
    workers: int = 1,
    label_radius_m: Optional[float] = None,
) -> List[SinrSample]:
    """
    One SINR sample per realization, in realization order.

    Raises:
        SimulationAbortedError: more than 0.1 % of realizations needed a resample
    """
    if n_realizations < 1:
        raise ConfigError(f"n_realizations must be >= 1, got {n_realizations}")
    radius = window_radius_m if window_radius_m is not None else default_window_radius(params)

    logger.info(
        f"🎲 Simulating {n_realizations} realizations | seed={base_seed} | "
        f"R={radius:.1f} m | D={params.inner_radius_m} m | workers={workers}"
    )

    if workers <= 1:
        samples, empty = _simulate_indices(params, range(n_realizations), base_seed, radius, label_radius_m)
    else:
        chunks = _chunks(n_realizations, workers * 4)
        samples, empty = [], 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(
                _simulate_indices,
                [params] * len(chunks),
                chunks,
                [base_seed] * len(chunks),
                [radius] * len(chunks),
                [label_radius_m] * len(chunks),
            )
            for chunk_samples, chunk_empty in results:
                samples.extend(chunk_samples)
                empty += chunk_empty

    if empty:
        logger.warning(f"⚠️ {empty} empty realizations resampled")
    if empty > MAX_EMPTY_FRACTION * n_realizations:
        raise SimulationAbortedError(
            f"{empty} empty realizations out of {n_realizations} exceeds {MAX_EMPTY_FRACTION:.1%}"
        )
    return samples


def _estimate(covered: int, n: int, n_inner: int, n_outer: int) -> McEstimate:
    value = covered / n
    return McEstimate(
        value=value,
        std_err=math.sqrt(value * (1.0 - value) / n),
        n_samples=n,
        n_inner=n_inner,
        n_outer=n_outer,
    )


def coverage_from_samples(samples: Sequence[SinrSample], thresholds_db: Sequence[float]) -> List[McCoverage]:
    """
    Stratified coverage frequencies per threshold.

    A stratum without samples is reported as None.
    """
    if not samples:
        raise ConfigError("no SINR samples to estimate from")
    sinr = np.array([s.sinr_linear for s in samples])
    inner = np.array([s.region == RegionLabel.INNER for s in samples])
    n = sinr.shape[0]
    n_inner = int(np.count_nonzero(inner))
    n_outer = n - n_inner

    results = []
    for threshold_db in thresholds_db:
        covered = sinr > db_to_linear(threshold_db)
        c_inner = int(np.count_nonzero(covered & inner))
        c_outer = int(np.count_nonzero(covered & ~inner))
        results.append(McCoverage(
            threshold_db=threshold_db,
            overall=_estimate(c_inner + c_outer, n, n_inner, n_outer),
            inner=_estimate(c_inner, n_inner, n_inner, 0) if n_inner else None,
            outer=_estimate(c_outer, n_outer, 0, n_outer) if n_outer else None,
        ))
    return results


def estimate_coverage(
    params: NetworkParams,
    thresholds_db: Sequence[float],
    n_realizations: int,
    base_seed: int = DEFAULT_SEED,
    window_radius_m: Optional[float] = None,
    workers: int = 1,
    label_radius_m: Optional[float] = None,
) -> List[McCoverage]:
    """
    Monte Carlo coverage at each threshold: overall, inner and outer strata.

    Args:
        params (NetworkParams): network under test
        thresholds_db: SINR thresholds in dB
        n_realizations (int): >= 100
        base_seed (int): seed of the per-realization streams
        window_radius_m: sampling window, defaults to 10 / sqrt(pi * lambda_1)
        workers (int): process count; does not change the result
        label_radius_m: radius labelling users inner/outer, defaults to D

    Returns:
        List[McCoverage]: one entry per threshold, in input order
    """
    if n_realizations < MIN_REALIZATIONS:
        raise ConfigError(f"n_realizations must be >= {MIN_REALIZATIONS}, got {n_realizations}")
    if not thresholds_db:
        raise ConfigError("thresholds_db must not be empty")
    samples = simulate_sinr(params, n_realizations, base_seed, window_radius_m, workers, label_radius_m)
    results = coverage_from_samples(samples, thresholds_db)
    logger.info(f"✅ Monte Carlo estimate done for {len(thresholds_db)} thresholds")
    return results


def inactive_fraction(realization: NetworkRealization) -> Optional[float]:
    """Fraction of femto BSs switched off in one realization, None without femtos."""
    total = len(realization.femto)
    if total == 0:
        return None
    return 1.0 - float(np.count_nonzero(realization.femto_active)) / total


def region_map_rows(realization: NetworkRealization) -> List[Dict[str, object]]:
    """Rows (kind, x_m, y_m) that redraw the inner/outer region picture of one realization."""
    rows: List[Dict[str, object]] = []
    for x, y in realization.macro.points:
        rows.append({"kind": "macro", "x_m": float(x), "y_m": float(y)})
    for (x, y), active in zip(realization.femto.points, realization.femto_active):
        kind = "femto_active" if active else "femto_inactive"
        rows.append({"kind": kind, "x_m": float(x), "y_m": float(y)})
    rows.append({"kind": "origin", "x_m": 0.0, "y_m": 0.0})
    return rows
