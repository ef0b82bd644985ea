"""Area, volume, curvature integrals and the Minkowski identity for bodies."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from django.conf import settings
from scipy.special import gamma

from geometry.exceptions import GeometryError, NonSmoothBodyError
from geometry.services.bodies import Ball, ConvexBody
from geometry.services.curvature import curvature_estimates
from geometry.services.meshing import SampleSet, boundary_samples, narrow_band_values, sample_grid

logger = logging.getLogger(__name__)

DEFAULT_VOLUME_RESOLUTION = 128
CURVATURE_SAMPLE_LIMIT = 4000


def unit_sphere_area(n: int) -> float:
    """Volume of the unit n-sphere, ``2 pi^{(n+1)/2} / Gamma((n+1)/2)``."""
    return float(2.0 * math.pi ** ((n + 1) / 2.0) / gamma((n + 1) / 2.0))


def _mesh_resolution(resolution: Optional[int]) -> int:
    return settings.CAP_MESH_RESOLUTION if resolution is None else resolution


def area(body: ConvexBody, resolution: Optional[int] = None, closed_form: bool = True) -> float:
    """Boundary area ``vol(dK)``.

    Balls use the closed form in any dimension unless ``closed_form`` is False;
    everything else sums boundary sample weights.
    """
    if isinstance(body, Ball) and (closed_form or body.dimension != 3):
        n = body.dimension - 1
        return unit_sphere_area(n) * body.radius ** n
    return boundary_samples(body, _mesh_resolution(resolution)).total_weight


def volume(body: ConvexBody, resolution: Optional[int] = None, closed_form: bool = True) -> float:
    """Enclosed volume by sub-cell sign counting on a cell-centred grid.

    Occupancy of each cell is ``clip(1/2 - sdf/h, 0, 1)``. Balls use the closed
    form unless ``closed_form`` is False.
    """
    if isinstance(body, Ball) and (closed_form or body.dimension != 3):
        n = body.dimension - 1
        return unit_sphere_area(n) * body.radius ** (n + 1) / (n + 1)
    if body.bounding_radius == 0:
        return 0.0
    if body.dimension != 3:
        raise GeometryError("Grid volume is available in R^3 only.")

    resolution = DEFAULT_VOLUME_RESOLUTION if resolution is None else resolution
    origin, spacing, axes = sample_grid(body, resolution)
    centres = [axis[:-1] + 0.5 * spacing for axis in axes]
    total = 0.0
    # Slab by slab along the first axis to bound memory.
    for x in centres[0]:
        plane = np.stack(np.meshgrid([x], centres[1], centres[2], indexing="ij"), axis=-1)[0]
        values = narrow_band_values(body, plane, spacing)
        total += float(np.sum(np.clip(0.5 - values / spacing, 0.0, 1.0)))
    return total * spacing ** 3


def divergence_volume(body: ConvexBody, center=None, resolution: Optional[int] = None) -> float:
    """Volume from the divergence theorem: ``(1/(n+1)) * integral <x - c, nu> dA``."""
    samples = boundary_samples(body, _mesh_resolution(resolution))
    center = body.center if center is None else np.asarray(center, dtype=float)
    support = np.sum((samples.points - center) * samples.normals, axis=-1)
    return float(np.sum(samples.weights * support) / body.dimension)


def curvature_samples(body: ConvexBody, resolution: Optional[int] = None, limit: int = CURVATURE_SAMPLE_LIMIT):
    """Boundary samples with principal curvatures attached.

    Returns:
        Tuple of (SampleSet with curvatures, CurvatureEstimate).
    """
    samples = boundary_samples(body, _mesh_resolution(resolution)).subsample(limit)
    estimate = curvature_estimates(body, samples.points, samples.normals)
    return samples.with_curvatures(estimate.values), estimate


def _require_smooth(body: ConvexBody, operation: str):
    if not body.smooth:
        raise NonSmoothBodyError(f"{operation} requires a smooth body; {body.kind} is not smooth.")


def integral_mean_curvature(body: ConvexBody, resolution: Optional[int] = None) -> float:
    """Integral of the mean curvature ``H = (k1 + k2) / 2`` over the boundary (R^3)."""
    _require_smooth(body, "Integral of mean curvature")
    if isinstance(body, Ball):
        n = body.dimension - 1
        return unit_sphere_area(n) * body.radius ** (n - 1)
    samples = boundary_samples(body, _mesh_resolution(resolution))
    estimate = curvature_estimates(body, samples.points, samples.normals)
    mean = np.mean(estimate.values, axis=-1)
    return float(np.sum(samples.weights * mean))


def minkowski_residual(body: ConvexBody, center=None, resolution: Optional[int] = None) -> float:
    """Normalized residual of ``integral (1 + H <X, N>) dA = 0``.

    ``X`` is the position relative to ``center`` and ``N`` the inner unit normal.

    Returns:
        The integral divided by the boundary area.

    Raises:
        NonSmoothBodyError: If the body is not smooth.
        GeometryError: If ``center`` is not strictly inside.
    """
    _require_smooth(body, "Minkowski residual")
    center = body.center if center is None else np.asarray(center, dtype=float)
    if body.sdf(center[None, :])[0] >= 0:
        raise GeometryError("Minkowski centre must lie strictly inside the body.")
    samples = boundary_samples(body, _mesh_resolution(resolution))
    estimate = curvature_estimates(body, samples.points, samples.normals)
    mean = np.mean(estimate.values, axis=-1)
    support = np.sum((samples.points - center) * (-samples.normals), axis=-1)
    integrand = 1.0 + mean * support
    return float(np.sum(samples.weights * integrand) / samples.total_weight)


@dataclass(frozen=True)
class CurvatureSummary:
    """Extremes of sampled curvatures with an extrapolation-uncertainty estimate."""

    kappa_min: float
    mean_min: float
    mean_max: float
    uncertainty: float
    sampled: int
    irregular: int
    ridge: int


def curvature_summary(body: ConvexBody, resolution: Optional[int] = None) -> CurvatureSummary:
    """Smallest principal curvature and mean-curvature range over boundary samples.

    Ridge directions count as ``+inf``; non-regular probe points are skipped and
    counted. ``uncertainty`` is the largest estimate uncertainty among the
    points attaining the extremes.
    """
    if isinstance(body, Ball):
        kappa = 1.0 / body.radius if body.radius > 0 else math.inf
        return CurvatureSummary(kappa, kappa, kappa, 0.0, 1, 0, 0)

    samples: SampleSet
    samples, estimate = curvature_samples(body, resolution)
    regular = estimate.regular_mask
    values = estimate.values[regular]
    spread = estimate.uncertainty[regular]
    if len(values) == 0:
        raise GeometryError("No regular boundary point produced curvature estimates.")

    finite_min = values[:, 0]
    mean = np.mean(values, axis=-1)
    i_min = int(np.argmin(finite_min))
    i_mean_min = int(np.argmin(mean))
    i_mean_max = int(np.argmax(mean))
    picked = spread[[i_min, i_mean_min, i_mean_max]]
    finite = picked[np.isfinite(picked)]
    summary = CurvatureSummary(
        kappa_min=float(finite_min[i_min]),
        mean_min=float(mean[i_mean_min]),
        mean_max=float(mean[i_mean_max]),
        uncertainty=float(finite.max()) if finite.size else 0.0,
        sampled=len(samples),
        irregular=int(np.sum(~regular)),
        ridge=int(np.sum(np.any(np.isinf(values), axis=-1))),
    )
    logger.info(
        "Curvature summary for %s: kappa_min=%.6g H in [%.6g, %.6g] (+-%.2e, %d irregular)",
        body.kind, summary.kappa_min, summary.mean_min, summary.mean_max,
        summary.uncertainty, summary.irregular,
    )
    return summary
