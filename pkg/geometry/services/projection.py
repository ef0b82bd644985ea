"""Metric projection onto convex bodies and derived distance fields."""

import logging
from typing import Optional

import numpy as np

from geometry.exceptions import (
    GeometryError,
    PointInsideBodyError,
    ProjectionNotConvergedError,
)
from geometry.services.bodies import ConvexBody

logger = logging.getLogger(__name__)

PROJECTION_BUDGET = 200
PROJECTION_TOLERANCE = 1e-10


def finite_difference_gradient(func, points: np.ndarray, step: float) -> np.ndarray:
    """Central-difference gradient of a vectorized scalar field at ``(..., d)`` points."""
    points = np.asarray(points, dtype=float)
    dimension = points.shape[-1]
    gradient = np.empty(points.shape)
    for axis in range(dimension):
        shift = np.zeros(dimension)
        shift[axis] = step
        gradient[..., axis] = (func(points + shift) - func(points - shift)) / (2.0 * step)
    return gradient


def _unit(vectors: np.ndarray) -> np.ndarray:
    length = np.linalg.norm(vectors, axis=-1, keepdims=True)
    return vectors / np.where(length > 0, length, 1.0)


def _gradient_step(body: ConvexBody) -> float:
    return 1e-5 * max(1.0, body.bounding_radius)


def _iterate_projection(body: ConvexBody, points: np.ndarray, distances: np.ndarray) -> np.ndarray:
    """Damped fixed-point iteration on the foot point.

    The direction ``u`` is refreshed from the distance gradient at the midpoint of
    the current segment; for an exact distance of a convex set that gradient is
    constant along the segment, so the fixed point is ``(p - xi(p)) / r``.
    """
    step = _gradient_step(body)
    direction = _unit(finite_difference_gradient(body.sdf, points, step))
    reach = distances.copy()
    tolerance = PROJECTION_TOLERANCE * max(1.0, body.bounding_radius)

    for iteration in range(PROJECTION_BUDGET):
        midpoint = points - 0.5 * distances[:, None] * direction
        refreshed = _unit(finite_difference_gradient(body.sdf, midpoint, step))
        update = 0.5 * (direction + refreshed) if iteration >= 50 else refreshed
        update = _unit(update)
        foot = points - reach[:, None] * update
        # Newton step along the segment keeps the foot on the zero level.
        reach_new = reach + body.sdf(foot)
        change = max(
            float(np.max(np.abs(update - direction))),
            float(np.max(np.abs(reach_new - reach))),
        )
        direction, reach = update, reach_new
        if change <= tolerance:
            return points - reach[:, None] * direction

    raise ProjectionNotConvergedError(
        f"Projection did not converge within {PROJECTION_BUDGET} iterations (last change {change:.3e})."
    )


def project_points(body: ConvexBody, points) -> np.ndarray:
    """Project a batch of exterior points onto the boundary.

    Uses the body's exact nearest-point map when it has one and the projection
    iteration otherwise.

    Raises:
        PointInsideBodyError: If any point has sdf <= 0.
        ProjectionNotConvergedError: If the iteration exceeds its budget.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    distances = body.sdf(points)
    if np.any(distances <= 0):
        raise PointInsideBodyError("Metric projection requires points strictly outside the body.")

    exact = body.closest_points(points)
    if exact is not None:
        return exact
    return _iterate_projection(body, points, distances)


def metric_projection(body: ConvexBody, p) -> np.ndarray:
    """Return the nearest point of ``body`` to the exterior point ``p``.

    Args:
        body: Convex body.
        p: Point with ``sdf(p) > 0``.

    Returns:
        Point ``q`` on the boundary with ``|p - q| = sdf(p)``.

    Raises:
        PointInsideBodyError: If ``sdf(p) <= 0``.
        ProjectionNotConvergedError: If the iteration exceeds its budget or the
            result misses the boundary (a sign of a bad sdf).
    """
    point = np.asarray(p, dtype=float)
    foot = project_points(body, point[None, :])[0]

    distance = float(body.sdf(point[None, :])[0])
    residual = abs(float(body.sdf(foot[None, :])[0]))
    if residual > 1e-9 * max(1.0, body.bounding_radius):
        raise ProjectionNotConvergedError(
            f"Projected point is off the boundary (|sdf| = {residual:.3e})."
        )
    gap = abs(float(np.linalg.norm(point - foot)) - distance)
    if gap > 1e-9 * max(distance, 1e-300) and gap > 1e-12:
        raise ProjectionNotConvergedError(
            f"Projection distance mismatch {gap:.3e} against sdf {distance:.6g}."
        )
    return foot


def distance_gradient(body: ConvexBody, p) -> np.ndarray:
    """Gradient of the distance function, ``(p - xi(p)) / r(p)``, at an exterior point."""
    point = np.asarray(p, dtype=float)
    foot = metric_projection(body, point)
    return (point - foot) / np.linalg.norm(point - foot)


def supporting_normals(
    body: ConvexBody, points, offset: Optional[float] = None
) -> np.ndarray:
    """Outer unit normals at boundary points via the projection of offset points.

    The offset direction is the normalized central-difference gradient of the
    level function; at non-smooth points this is a sub-gradient and the
    projection of ``x + offset * g`` returns to ``x``, so the normal lies in the
    normal cone.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    scale = max(1.0, body.bounding_radius)
    offset = 1e-4 * scale if offset is None else offset
    guide = _unit(finite_difference_gradient(body.level, points, 1e-7 * scale))
    if np.any(np.linalg.norm(guide, axis=-1) == 0):
        raise GeometryError("Degenerate level gradient at a boundary point.")
    lifted = points + offset * guide
    feet = project_points(body, lifted)
    return _unit(lifted - feet)


def snap_to_boundary(body: ConvexBody, points, steps: int = 3) -> np.ndarray:
    """Move near-boundary points onto the zero level with sdf Newton steps."""
    points = np.array(points, dtype=float)
    step = _gradient_step(body)
    for _ in range(steps):
        values = body.sdf(points)
        gradient = _unit(finite_difference_gradient(body.sdf, points, step))
        points = points - values[..., None] * gradient
    return points
