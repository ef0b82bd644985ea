"""Principal curvatures of body boundaries.

Smooth bodies use the tangential block of the finite-difference Hessian of the
signed distance. Non-smooth bodies are probed on outer parallel surfaces: at
offset ``t`` the parallel surface has curvatures ``k_t`` and the boundary value
is recovered as ``k_t / (1 - t k_t)``, extrapolated over ``t in {h, h/2, h/4}``.
A direction where ``t k_t`` stays at 1 for every probe is a ridge direction and
reports ``+inf``.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from geometry.exceptions import GeometryError, RidgePointError
from geometry.services.bodies import ConvexBody
from geometry.services.projection import supporting_normals

logger = logging.getLogger(__name__)

PROBE_FRACTIONS = (1.0, 0.5, 0.25)
RIDGE_TOLERANCE = 1e-3
BOUNDARY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class CurvatureEstimate:
    """Sorted principal curvatures with an extrapolation uncertainty per value."""

    values: np.ndarray
    uncertainty: np.ndarray
    irregular: Optional[np.ndarray] = None

    @property
    def regular_mask(self) -> np.ndarray:
        if self.irregular is None:
            return np.ones(len(self.values), dtype=bool)
        return ~self.irregular


def tangent_bases(normals: np.ndarray) -> np.ndarray:
    """Orthonormal tangent frames ``(m, 3, 2)`` for unit normals ``(m, 3)``."""
    normals = np.atleast_2d(normals)
    helper = np.where(
        (np.abs(normals[:, 0]) < 0.9)[:, None],
        np.array([1.0, 0.0, 0.0]),
        np.array([0.0, 1.0, 0.0]),
    )
    first = helper - np.sum(helper * normals, axis=-1, keepdims=True) * normals
    first /= np.linalg.norm(first, axis=-1, keepdims=True)
    second = np.cross(normals, first)
    return np.stack([first, second], axis=-1)


def hessians(func, points: np.ndarray, step: float) -> np.ndarray:
    """Central-difference Hessians ``(m, 3, 3)`` of a vectorized scalar field."""
    points = np.atleast_2d(points)
    eye = np.eye(3) * step
    center = func(points)
    result = np.empty((len(points), 3, 3))
    for i in range(3):
        plus = func(points + eye[i])
        minus = func(points - eye[i])
        result[:, i, i] = (plus - 2.0 * center + minus) / (step * step)
        for j in range(i + 1, 3):
            pp = func(points + eye[i] + eye[j])
            pm = func(points + eye[i] - eye[j])
            mp = func(points - eye[i] + eye[j])
            mm = func(points - eye[i] - eye[j])
            value = (pp - pm - mp + mm) / (4.0 * step * step)
            result[:, i, j] = value
            result[:, j, i] = value
    return result


def shape_operator_eigenvalues(
    body: ConvexBody, points: np.ndarray, normals: np.ndarray, step: float
) -> np.ndarray:
    """Ascending eigenvalues of the tangential Hessian block of the sdf at each point."""
    frames = tangent_bases(normals)
    hess = hessians(body.sdf, points, step)
    block = np.einsum("mia,mij,mjb->mab", frames, hess, frames)
    return np.linalg.eigvalsh(block)


def _smooth_curvatures(body, points, normals, probe) -> CurvatureEstimate:
    coarse = shape_operator_eigenvalues(body, points, normals, probe)
    fine = shape_operator_eigenvalues(body, points, normals, 0.5 * probe)
    return CurvatureEstimate(values=fine, uncertainty=np.abs(fine - coarse))


def _probe_curvatures(body, points, normals, offset_scale) -> CurvatureEstimate:
    """Curvatures recovered from parallel surfaces at three probe offsets."""
    recovered = []
    ridge_flags = []
    for fraction in PROBE_FRACTIONS:
        t = fraction * offset_scale
        lifted = points + t * normals
        kappa_t = shape_operator_eigenvalues(body, lifted, normals, 1e-2 * t)
        product = t * kappa_t
        ridge_flags.append(np.abs(1.0 - product) < RIDGE_TOLERANCE)
        with np.errstate(divide="ignore", invalid="ignore"):
            recovered.append(np.where(ridge_flags[-1], np.inf, kappa_t / (1.0 - product)))

    ridge = np.stack(ridge_flags)
    k1, k2, k3 = recovered
    consistent_ridge = np.all(ridge, axis=0)
    mixed = np.any(ridge, axis=0) & ~consistent_ridge

    with np.errstate(invalid="ignore"):
        first = 2.0 * k2 - k1
        second = 2.0 * k3 - k2
        diverging = np.abs(k3 - k2) > 2.0 * np.abs(k2 - k1) + 1e-6 * (1.0 + np.abs(k2))
    diverging &= ~consistent_ridge
    irregular = np.any(mixed | diverging, axis=-1)
    if np.any(irregular):
        logger.debug("Curvature probes flagged %d non-regular points", int(np.sum(irregular)))

    values = np.where(consistent_ridge, np.inf, second)
    uncertainty = np.where(consistent_ridge, 0.0, np.abs(second - first))
    values[irregular] = np.nan
    uncertainty[irregular] = np.nan
    order = np.argsort(values, axis=-1)
    values = np.take_along_axis(values, order, axis=-1)
    uncertainty = np.take_along_axis(uncertainty, order, axis=-1)
    return CurvatureEstimate(values=values, uncertainty=uncertainty, irregular=irregular)


def curvature_estimates(
    body: ConvexBody,
    points,
    normals: Optional[np.ndarray] = None,
    probe: Optional[float] = None,
) -> CurvatureEstimate:
    """Principal curvatures at a batch of boundary points.

    Args:
        body: Three-dimensional body.
        points: Boundary points ``(m, 3)``.
        normals: Outer normals; computed with ``supporting_normals`` when omitted.
        probe: Finite-difference step for smooth bodies (default 1e-3 times the
            bounding radius).

    Returns:
        CurvatureEstimate with values sorted ascending per point.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if body.dimension != 3:
        raise GeometryError("Curvature sampling is available in R^3 only.")
    if normals is None:
        normals = supporting_normals(body, points)
    if body.smooth:
        step = 1e-3 * body.bounding_radius if probe is None else probe
        return _smooth_curvatures(body, points, normals, step)
    return _probe_curvatures(body, points, normals, 1e-2 * body.bounding_radius)


def principal_curvatures(body: ConvexBody, p, probe: Optional[float] = None) -> np.ndarray:
    """Principal curvatures at a boundary point, sorted ascending.

    Args:
        body: Three-dimensional body.
        p: Boundary point (``|sdf(p)|`` within 1e-6 of the body scale).
        probe: Positive finite-difference step; defaults to 1e-3 times the
            bounding radius.

    Returns:
        Array of two curvatures; ``inf`` along ridge directions of non-smooth bodies.

    Raises:
        GeometryError: If ``p`` is not on the boundary or ``probe <= 0``.
        RidgePointError: If the probe extrapolation diverges.
    """
    point = np.asarray(p, dtype=float)
    if probe is not None and probe <= 0:
        raise GeometryError("Curvature probe must be positive.")
    residual = abs(float(body.sdf(point[None, :])[0]))
    if residual > BOUNDARY_TOLERANCE * max(1.0, body.bounding_radius):
        raise GeometryError(f"Point is not on the boundary (|sdf| = {residual:.3e}).")
    estimate = curvature_estimates(body, point[None, :], probe=probe)
    if not estimate.regular_mask[0]:
        raise RidgePointError("Curvature extrapolation over probe offsets diverges at this point.")
    return estimate.values[0]
