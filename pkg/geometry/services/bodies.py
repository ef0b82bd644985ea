"""Compact convex bodies described by signed-distance evaluators.

Every evaluator is vectorized: it accepts an array of shape ``(..., d)`` and
returns an array of shape ``(...)``. Signed distances are negative inside.

Besides ``sdf`` each body exposes ``level``, a cheaper function with the same
sign and zero set that never exceeds ``sdf`` outside the body, and
``closest_points`` for exact nearest-point queries where one is available.
Bodies are immutable after construction.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from geometry.exceptions import GeometryError, NegativeOffsetError

logger = logging.getLogger(__name__)

ELLIPSOID_BISECTION_STEPS = 100
DYKSTRA_MAX_CYCLES = 2000
DYKSTRA_TOLERANCE = 1e-15


@dataclass(frozen=True)
class SymmetryAxis:
    """Line of rotational symmetry: ``origin + s * direction``."""

    origin: np.ndarray
    direction: np.ndarray

    def frame(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return an orthonormal pair ``(direction, radial)`` spanning a meridian plane."""
        d = self.direction
        helper = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        radial = helper - np.dot(helper, d) * d
        return d, radial / np.linalg.norm(radial)


@dataclass(frozen=True)
class _AxisConstraints:
    """Constraints a component places on a common symmetry axis."""

    points: Tuple[np.ndarray, ...] = ()
    directions: Tuple[np.ndarray, ...] = ()
    symmetric: bool = True


def _as_points(points) -> np.ndarray:
    return np.asarray(points, dtype=float)


def _norm(vectors: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(vectors * vectors, axis=-1))


class ConvexBody(ABC):
    """Compact convex set in R^{n+1} given by a signed-distance evaluator."""

    kind: str = "generic-sdf"

    def __init__(self, dimension: int):
        if dimension < 3:
            raise GeometryError(f"Body dimension must be at least 3, got {dimension}.")
        self.dimension = dimension

    @abstractmethod
    def sdf(self, points) -> np.ndarray:
        """Signed distance to the boundary, negative inside."""

    def level(self, points) -> np.ndarray:
        """Cheap function with the sign and zero set of ``sdf`` and ``level <= sdf`` outside."""
        return self.sdf(points)

    def closest_points(self, points) -> Optional[np.ndarray]:
        """Exact nearest boundary points for exterior points, or None if not available."""
        return None

    @property
    @abstractmethod
    def bounding_radius(self) -> float:
        """Radius of an origin-centred ball outside of which sdf is positive."""

    @property
    def smooth(self) -> bool:
        return True

    @property
    @abstractmethod
    def center(self) -> np.ndarray:
        """A point strictly inside the body (or on it, for degenerate bodies)."""

    @abstractmethod
    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        """Axis-aligned box ``(lower, upper)`` containing the body."""

    @property
    @abstractmethod
    def descriptor(self) -> Dict:
        """Construction record echoed into reports."""

    def _axis_constraints(self) -> _AxisConstraints:
        return _AxisConstraints(symmetric=False)

    def symmetry_axis(self) -> Optional[SymmetryAxis]:
        """Return the rotational symmetry axis of the body, if it has one.

        Only three-dimensional bodies are considered. Balls constrain the axis to
        pass through their centre, spheroids fix it completely, halfspaces fix its
        direction. A body is symmetric when all constraints are compatible.
        """
        if self.dimension != 3:
            return None
        constraints = self._axis_constraints()
        if not constraints.symmetric:
            return None
        return _combine_axis_constraints(constraints)

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor})"


def _combine_axis_constraints(constraints: _AxisConstraints) -> Optional[SymmetryAxis]:
    tol = 1e-12
    points = [np.asarray(p, dtype=float) for p in constraints.points]
    directions = [np.asarray(d, dtype=float) / np.linalg.norm(d) for d in constraints.directions]

    direction = directions[0] if directions else None
    for other in directions[1:]:
        if np.linalg.norm(np.cross(direction, other)) > tol:
            return None

    origin = points[0] if points else np.zeros(3)
    if direction is None:
        distinct = [p for p in points[1:] if np.linalg.norm(p - origin) > tol]
        if distinct:
            direction = (distinct[0] - origin) / np.linalg.norm(distinct[0] - origin)
        else:
            direction = np.array([0.0, 0.0, 1.0])

    for point in points[1:]:
        if np.linalg.norm(np.cross(point - origin, direction)) > tol * max(1.0, np.linalg.norm(point - origin)):
            return None

    # Orient the canonical direction so that its largest component is positive.
    if direction[np.argmax(np.abs(direction))] < 0:
        direction = -direction
    return SymmetryAxis(origin=origin, direction=direction)


class Ball(ConvexBody):
    """Closed Euclidean ball in any dimension >= 3; radius 0 gives a point."""

    kind = "ball"

    def __init__(self, center: Sequence[float], radius: float):
        center = np.asarray(center, dtype=float)
        super().__init__(center.shape[0])
        if radius < 0:
            raise GeometryError("Ball radius cannot be negative.")
        self._center = center
        self.radius = float(radius)

    def sdf(self, points) -> np.ndarray:
        return _norm(_as_points(points) - self._center) - self.radius

    def closest_points(self, points) -> np.ndarray:
        points = _as_points(points)
        offset = points - self._center
        length = _norm(offset)[..., None]
        return self._center + self.radius * offset / np.where(length > 0, length, 1.0)

    @property
    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self._center) + self.radius)

    @property
    def center(self) -> np.ndarray:
        return self._center.copy()

    def bounding_box(self):
        return self._center - self.radius, self._center + self.radius

    @property
    def descriptor(self) -> Dict:
        return {"kind": self.kind, "center": self._center.tolist(), "radius": self.radius}

    def _axis_constraints(self):
        return _AxisConstraints(points=(self._center,))


class Ellipsoid(ConvexBody):
    """Axis-aligned ellipsoid in R^3 with exact signed distance.

    The nearest boundary point of ``y`` has coordinates ``a_i^2 y_i / (t + a_i^2)``
    where ``t`` is the root of ``sum((a_i y_i / (t + a_i^2))^2) = 1``; ``t >= 0``
    outside and ``t`` in ``(-a_min^2, 0]`` inside. Roots are found by bisection.
    """

    kind = "ellipsoid"

    def __init__(self, center: Sequence[float], semi_axes: Sequence[float]):
        center = np.asarray(center, dtype=float)
        semi_axes = np.asarray(semi_axes, dtype=float)
        if center.shape != (3,) or semi_axes.shape != (3,):
            raise GeometryError("Ellipsoids are defined in R^3 with three semi-axes.")
        if np.any(semi_axes <= 0):
            raise GeometryError("Ellipsoid semi-axes must be positive.")
        super().__init__(3)
        self._center = center
        self.semi_axes = semi_axes

    def _local(self, points):
        local = _as_points(points) - self._center
        return np.abs(local), np.sign(local)

    def _foot_points(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Nearest boundary points of ``y`` (first octant) and an inside mask."""
        a = self.semi_axes
        a2 = a * a
        flat = y.reshape(-1, 3)
        inside = np.sum((flat / a) ** 2, axis=-1) <= 1.0
        foot = np.empty_like(flat)

        def residual(t, pts):
            return np.sum((a * pts / (t[:, None] + a2)) ** 2, axis=-1) - 1.0

        outside_pts = flat[~inside]
        if outside_pts.size:
            lo = np.zeros(len(outside_pts))
            hi = a.max() * _norm(outside_pts)
            for _ in range(ELLIPSOID_BISECTION_STEPS):
                mid = 0.5 * (lo + hi)
                positive = residual(mid, outside_pts) > 0
                lo = np.where(positive, mid, lo)
                hi = np.where(positive, hi, mid)
            t = 0.5 * (lo + hi)
            foot[~inside] = a2 * outside_pts / (t[:, None] + a2)

        inside_pts = flat[inside]
        if inside_pts.size:
            foot[inside] = self._interior_feet(inside_pts, residual)

        return foot.reshape(y.shape), inside.reshape(y.shape[:-1])

    def _interior_feet(self, pts: np.ndarray, residual: Callable) -> np.ndarray:
        a = self.semi_axes
        a2 = a * a
        a_min = a.min()
        minor = np.isclose(a, a_min, rtol=1e-14, atol=0.0)
        scale = a.max()
        feet = np.empty_like(pts)

        # Points on the minor-axis hyperplanes may have no interior root (medial set).
        on_minor = np.all(pts[:, minor] <= 1e-14 * scale, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            others = np.where(minor, 0.0, a * pts / np.where(minor, 1.0, a2 - a_min ** 2))
        spread = np.sum(others ** 2, axis=-1)
        degenerate = on_minor & (spread <= 1.0)

        if np.any(degenerate):
            sub = pts[degenerate]
            foot = np.where(minor, 0.0, a2 * sub / np.where(minor, 1.0, a2 - a_min ** 2))
            first_minor = int(np.argmax(minor))
            foot[:, first_minor] = a_min * np.sqrt(np.clip(1.0 - spread[degenerate], 0.0, None))
            feet[degenerate] = foot

        regular = ~degenerate
        if np.any(regular):
            sub = pts[regular]
            lo = np.full(len(sub), -a_min ** 2)
            hi = np.zeros(len(sub))
            for _ in range(ELLIPSOID_BISECTION_STEPS):
                mid = 0.5 * (lo + hi)
                positive = residual(mid, sub) > 0
                lo = np.where(positive, mid, lo)
                hi = np.where(positive, hi, mid)
            t = 0.5 * (lo + hi)
            feet[regular] = a2 * sub / (t[:, None] + a2)
        return feet

    def sdf(self, points) -> np.ndarray:
        y, _ = self._local(points)
        foot, inside = self._foot_points(y)
        distance = _norm(y - foot)
        return np.where(inside, -distance, distance)

    def level(self, points) -> np.ndarray:
        y, _ = self._local(points)
        return self.semi_axes.min() * (_norm(y / self.semi_axes) - 1.0)

    def closest_points(self, points) -> np.ndarray:
        y, sign = self._local(points)
        foot, _ = self._foot_points(y)
        return self._center + np.where(sign == 0, 1.0, sign) * foot

    @property
    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self._center) + self.semi_axes.max())

    @property
    def center(self) -> np.ndarray:
        return self._center.copy()

    def bounding_box(self):
        return self._center - self.semi_axes, self._center + self.semi_axes

    @property
    def descriptor(self) -> Dict:
        return {
            "kind": self.kind,
            "center": self._center.tolist(),
            "semi_axes": self.semi_axes.tolist(),
        }

    def _axis_constraints(self):
        a = self.semi_axes
        if np.allclose(a, a[0], rtol=1e-14, atol=0.0):
            return _AxisConstraints(points=(self._center,))
        for axis in range(3):
            rest = [a[i] for i in range(3) if i != axis]
            if np.isclose(rest[0], rest[1], rtol=1e-14, atol=0.0):
                direction = np.eye(3)[axis]
                return _AxisConstraints(points=(self._center,), directions=(direction,))
        return _AxisConstraints(symmetric=False)


class Halfspace(ConvexBody):
    """Closed halfspace ``<x, normal> <= offset``; only usable as an intersection component."""

    kind = "halfspace"

    def __init__(self, normal: Sequence[float], offset: float):
        normal = np.asarray(normal, dtype=float)
        length = np.linalg.norm(normal)
        if length == 0:
            raise GeometryError("Halfspace normal cannot be zero.")
        super().__init__(normal.shape[0])
        self.normal = normal / length
        self.offset = float(offset)

    def sdf(self, points) -> np.ndarray:
        return _as_points(points) @ self.normal - self.offset

    def closest_points(self, points) -> np.ndarray:
        points = _as_points(points)
        return points - self.sdf(points)[..., None] * self.normal

    @property
    def bounding_radius(self) -> float:
        return float("inf")

    @property
    def center(self) -> np.ndarray:
        return self.normal * (self.offset - 1.0)

    def bounding_box(self):
        lower = np.full(self.dimension, -np.inf)
        upper = np.full(self.dimension, np.inf)
        axis = int(np.argmax(np.abs(self.normal)))
        if np.isclose(abs(self.normal[axis]), 1.0):
            bound = self.offset * np.sign(self.normal[axis])
            if self.normal[axis] > 0:
                upper[axis] = bound
            else:
                lower[axis] = bound
        return lower, upper

    @property
    def descriptor(self) -> Dict:
        return {"kind": self.kind, "normal": self.normal.tolist(), "offset": self.offset}

    def _axis_constraints(self):
        return _AxisConstraints(directions=(self.normal,))


class Intersection(ConvexBody):
    """Intersection of convex components.

    Inside, the signed distance is the maximum of the component distances.
    Outside it is ``|p - P(p)|`` where ``P`` is computed by Dykstra's
    alternating projection onto the components.
    """

    kind = "intersection"

    def __init__(self, components: Sequence[ConvexBody]):
        components = list(components)
        if len(components) < 2:
            raise GeometryError("An intersection needs at least two components.")
        dimensions = {component.dimension for component in components}
        if len(dimensions) != 1:
            raise GeometryError("Intersection components must share one dimension.")
        super().__init__(dimensions.pop())
        for component in components:
            if component.closest_points(np.zeros((1, component.dimension))) is None:
                raise GeometryError(
                    f"Component {component.kind} has no exact projection and cannot be intersected."
                )
        self.components: List[ConvexBody] = components
        lower, upper = self.bounding_box()
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))) and not np.isfinite(
            self.bounding_radius
        ):
            raise GeometryError("Intersection is unbounded.")
        if np.any(lower > upper):
            raise GeometryError("Intersection is empty.")

    def level(self, points) -> np.ndarray:
        values = [component.sdf(points) for component in self.components]
        return np.max(np.stack(values), axis=0)

    def _dykstra(self, points: np.ndarray) -> np.ndarray:
        x = points.copy()
        increments = [np.zeros_like(points) for _ in self.components]
        for _ in range(DYKSTRA_MAX_CYCLES):
            previous = x
            for index, component in enumerate(self.components):
                shifted = x + increments[index]
                inside = component.sdf(shifted) <= 0
                projected = np.where(inside[:, None], shifted, component.closest_points(shifted))
                increments[index] = shifted - projected
                x = projected
            if np.max(np.abs(x - previous)) <= DYKSTRA_TOLERANCE * max(1.0, self.bounding_radius):
                break
        else:
            logger.warning("Dykstra projection stopped at the cycle budget for %d points", len(points))
        return x

    def sdf(self, points) -> np.ndarray:
        points = _as_points(points)
        values = self.level(points)
        outside = values > 0
        if np.any(outside):
            flat = points[outside]
            values = values.copy()
            values[outside] = _norm(flat - self._dykstra(flat))
        return values

    def closest_points(self, points) -> np.ndarray:
        points = _as_points(points)
        shape = points.shape
        flat = points.reshape(-1, self.dimension)
        return self._dykstra(flat).reshape(shape)

    @property
    def bounding_radius(self) -> float:
        radius = min(component.bounding_radius for component in self.components)
        if np.isfinite(radius):
            return float(radius)
        lower, upper = self.bounding_box()
        return float(np.linalg.norm(np.maximum(np.abs(lower), np.abs(upper))))

    @property
    def smooth(self) -> bool:
        return False

    @property
    def center(self) -> np.ndarray:
        # Average of the bounded components' centres, projected inside if needed.
        bounded = [c.center for c in self.components if np.isfinite(c.bounding_radius)]
        guess = np.mean(bounded, axis=0) if bounded else np.zeros(self.dimension)
        if self.level(guess[None, :])[0] < 0:
            return guess
        lower, upper = self.bounding_box()
        return 0.5 * (lower + upper)

    def bounding_box(self):
        boxes = [component.bounding_box() for component in self.components]
        lower = np.max([box[0] for box in boxes], axis=0)
        upper = np.min([box[1] for box in boxes], axis=0)
        return lower, upper

    @property
    def descriptor(self) -> Dict:
        return {"kind": self.kind, "components": [c.descriptor for c in self.components]}

    def _axis_constraints(self):
        points, directions = [], []
        for component in self.components:
            constraints = component._axis_constraints()  # pylint: disable=protected-access
            if not constraints.symmetric:
                return _AxisConstraints(symmetric=False)
            points.extend(constraints.points)
            directions.extend(constraints.directions)
        return _AxisConstraints(points=tuple(points), directions=tuple(directions))


class ParallelBody(ConvexBody):
    """Outer parallel body ``K_r = {x : dist(x, K) <= r}``."""

    kind = "parallel"

    def __init__(self, base: ConvexBody, offset: float):
        if offset < 0:
            raise NegativeOffsetError("Inner parallel bodies are not supported (offset < 0).")
        super().__init__(base.dimension)
        self.base = base
        self.offset = float(offset)

    def sdf(self, points) -> np.ndarray:
        return self.base.sdf(points) - self.offset

    def level(self, points) -> np.ndarray:
        points = _as_points(points)
        coarse = self.base.level(points)
        values = coarse - self.offset
        near = coarse <= self.offset
        if np.any(near):
            values = values.copy()
            values[near] = self.base.sdf(points[near]) - self.offset
        return values

    def closest_points(self, points) -> Optional[np.ndarray]:
        points = _as_points(points)
        foot = self.base.closest_points(points)
        if foot is None:
            return None
        offset = points - foot
        length = _norm(offset)[..., None]
        return foot + self.offset * offset / np.where(length > 0, length, 1.0)

    @property
    def bounding_radius(self) -> float:
        return self.base.bounding_radius + self.offset

    @property
    def smooth(self) -> bool:
        return self.offset > 0 or self.base.smooth

    @property
    def center(self) -> np.ndarray:
        return self.base.center

    def bounding_box(self):
        lower, upper = self.base.bounding_box()
        return lower - self.offset, upper + self.offset

    @property
    def descriptor(self) -> Dict:
        return {"kind": self.kind, "base": self.base.descriptor, "offset": self.offset}

    def _axis_constraints(self):
        return self.base._axis_constraints()  # pylint: disable=protected-access


class SdfBody(ConvexBody):
    """Body defined directly by a user-supplied signed-distance callable.

    Nearest points are computed by the iterative metric projection, so the
    callable must be an exact signed distance outside the body.
    """

    kind = "generic-sdf"

    def __init__(
        self,
        sdf: Callable[[np.ndarray], np.ndarray],
        bounding_radius: float,
        center: Sequence[float] = (0.0, 0.0, 0.0),
        smooth: bool = True,
        axis: Optional[SymmetryAxis] = None,
        label: str = "custom",
    ):
        center = np.asarray(center, dtype=float)
        super().__init__(center.shape[0])
        self._sdf = sdf
        self._bounding_radius = float(bounding_radius)
        self._center = center
        self._smooth = smooth
        self._axis = axis
        self.label = label

    def sdf(self, points) -> np.ndarray:
        return np.asarray(self._sdf(_as_points(points)), dtype=float)

    @property
    def bounding_radius(self) -> float:
        return self._bounding_radius

    @property
    def smooth(self) -> bool:
        return self._smooth

    @property
    def center(self) -> np.ndarray:
        return self._center.copy()

    def bounding_box(self):
        r = self._bounding_radius
        return np.full(self.dimension, -r), np.full(self.dimension, r)

    @property
    def descriptor(self) -> Dict:
        return {"kind": self.kind, "label": self.label, "bounding_radius": self._bounding_radius}

    def symmetry_axis(self) -> Optional[SymmetryAxis]:
        return self._axis


def parallel_body(body: ConvexBody, r: float) -> ConvexBody:
    """Return the outer parallel body of ``body`` at distance ``r``.

    Balls stay balls; nested parallel bodies collapse onto their base so that
    ``parallel_body(parallel_body(K, a), b)`` is ``parallel_body(K, a + b)``.

    Raises:
        NegativeOffsetError: If ``r < 0``.
    """
    if r < 0:
        raise NegativeOffsetError("Inner parallel bodies are not supported (offset < 0).")
    if isinstance(body, Ball):
        return Ball(body.center, body.radius + r)
    if isinstance(body, ParallelBody):
        return ParallelBody(body.base, body.offset + r)
    if r == 0:
        return body
    return ParallelBody(body, r)


def lens(separation: float = 1.0, radius: float = 1.0) -> Intersection:
    """Intersection of two equal balls centred at ``(+-separation/2, 0, 0)``."""
    half = 0.5 * separation
    return Intersection([Ball((-half, 0.0, 0.0), radius), Ball((half, 0.0, 0.0), radius)])
