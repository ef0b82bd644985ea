"""Node grids for the exterior Dirichlet problem between a body and an outer sphere.

Two layouts are supported. ``full3d`` is a cubic lattice centred on the
outer sphere. ``axisym`` is a half-plane ``(rho, z)`` lattice on a meridian
plane of a rotationally symmetric body; world points are
``centre + z * direction + rho * radial``.

Every unknown node stores one arm per axis direction. An arm reaching a node
across the body or outer boundary is cut at the boundary crossing, found by
bisection on the signed distance along the grid edge; its fraction ``theta``
lies in ``(0, 1]`` and its Dirichlet value is 1 on the body and 0 on the
outer sphere.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import ndimage

from capacity_lab.choices import NodeClass, SolveMode
from geometry.services.bodies import ConvexBody
from solver.exceptions import DomainTooThinError, SolverError

logger = logging.getLogger(__name__)

PADDING_NODES = 2
MIN_GAP_CELLS = 3
CUT_RESIDUAL = 1e-10
CUT_MAX_BISECTIONS = 80
MIN_CUT_FRACTION = 1e-10


@dataclass(frozen=True)
class Grid:
    """
    Classified lattice for one body and one outer sphere.

    ``axes`` holds the 1-D node coordinates (relative to ``centre``, or
    ``(rho, z)`` in axisymmetric mode). ``fractions`` and ``arm_values`` have
    one trailing entry per arm, ordered ``(axis 0 -, axis 0 +, axis 1 -, ...)``;
    ``arm_values`` is NaN where the arm ends on another unknown node.
    """

    body: ConvexBody
    mode: str
    h: float
    outer_radius: float
    centre: np.ndarray
    axes: Tuple[np.ndarray, ...]
    classes: np.ndarray
    index: np.ndarray
    fractions: np.ndarray
    arm_values: np.ndarray
    direction: Optional[np.ndarray] = None
    radial: Optional[np.ndarray] = None

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.classes.shape

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def unknown(self) -> np.ndarray:
        return self.index >= 0

    @property
    def inside(self) -> np.ndarray:
        return self.classes == NodeClass.INSIDE

    @property
    def unknown_count(self) -> int:
        return int(np.count_nonzero(self.unknown))

    @property
    def offsets(self) -> Tuple[int, ...]:
        """Lattice index of the first node along each axis, relative to the centre."""
        return tuple(int(round(axis[0] / self.h)) for axis in self.axes)

    def points(self) -> np.ndarray:
        """World coordinates of every node, shape ``grid.shape + (3,)``."""
        return lattice_points(self.mode, self.axes, self.centre, self.direction, self.radial)

    def to_local(self, points: np.ndarray) -> np.ndarray:
        """Lattice coordinates of world points: offsets in 3-D, ``(rho, z)`` on the half-plane."""
        relative = np.asarray(points, dtype=float) - self.centre
        if self.mode == SolveMode.FULL3D:
            return relative
        z = relative @ self.direction
        rho = np.linalg.norm(relative - z[..., None] * self.direction, axis=-1)
        return np.stack([rho, z], axis=-1)

    def same_lattice(self, other: "Grid") -> bool:
        """Whether both grids sample the same lattice (spacing, layout, centre and frame)."""
        if self.mode != other.mode or not math.isclose(self.h, other.h, rel_tol=1e-12):
            return False
        if not np.allclose(self.centre, other.centre, atol=1e-12 * self.h):
            return False
        if self.mode == SolveMode.AXISYM:
            return np.allclose(self.direction, other.direction) and np.allclose(self.radial, other.radial)
        return True


def lattice_points(mode, axes, centre, direction=None, radial=None) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing="ij")
    if mode == SolveMode.FULL3D:
        return centre + np.stack(mesh, axis=-1)
    rho, z = mesh
    return centre + z[..., None] * direction + rho[..., None] * radial


def _outer_sdf(centre: np.ndarray, radius: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda points: np.linalg.norm(points - centre, axis=-1) - radius


def _shift(array: np.ndarray, axis: int, step: int, fill) -> np.ndarray:
    """``array`` read at the neighbour ``step`` nodes along ``axis``; ``fill`` past the edge."""
    out = np.full_like(array, fill)
    source = [slice(None)] * array.ndim
    target = [slice(None)] * array.ndim
    if step > 0:
        source[axis], target[axis] = slice(step, None), slice(None, -step)
    else:
        source[axis], target[axis] = slice(None, step), slice(-step, None)
    out[tuple(target)] = array[tuple(source)]
    return out


def cut_fractions(func, start: np.ndarray, end: np.ndarray, h: float) -> np.ndarray:
    """Fraction of each segment ``start -> end`` at which ``func`` changes sign.

    ``func`` must have opposite signs at the two ends. Bisection runs until
    ``|func| <= 1e-10 * h`` at every crossing.
    """
    if len(start) == 0:
        return np.zeros(0)
    tolerance = CUT_RESIDUAL * h
    delta = end - start
    sign = np.sign(func(start))
    low = np.zeros(len(start))
    high = np.ones(len(start))
    mid = 0.5 * (low + high)
    residual = np.full(len(start), np.inf)
    for _ in range(CUT_MAX_BISECTIONS):
        mid = 0.5 * (low + high)
        values = func(start + mid[:, None] * delta)
        residual = np.abs(values)
        if np.all(residual <= tolerance):
            break
        same = np.sign(values) == sign
        low = np.where(same, mid, low)
        high = np.where(same, high, mid)
    if np.any(residual > tolerance):
        logger.warning(
            "Boundary crossing residual %.2e exceeds %.1e on %d edges",
            float(np.max(residual)), tolerance, int(np.count_nonzero(residual > tolerance)),
        )
    return np.clip(mid, MIN_CUT_FRACTION, 1.0)


def resolve_mode(body: ConvexBody, mode: str) -> str:
    """Pick the lattice layout; AUTO prefers the half-plane when the body has a symmetry axis."""
    if mode not in SolveMode.values:
        raise SolverError(f"Unknown solve mode: {mode}")
    axis = body.symmetry_axis()
    if mode == SolveMode.AUTO:
        return SolveMode.AXISYM if axis is not None else SolveMode.FULL3D
    if mode == SolveMode.AXISYM and axis is None:
        raise SolverError(f"Axisymmetric solve requested for a body without a symmetry axis: {body!r}")
    return mode


def build_grid(body: ConvexBody, outer_radius: float, h: float, mode: str = SolveMode.AUTO) -> Grid:
    """Classify a lattice of spacing ``h`` between ``body`` and the sphere of radius ``outer_radius``.

    The outer sphere is centred at the origin, or at the origin's projection
    onto the symmetry axis in axisymmetric mode.

    Raises:
        SolverError: If the body is not three-dimensional or the mode is unusable.
        DomainTooThinError: If fewer than three cells separate the body from the
            outer sphere, or the fluid region is not connected.
    """
    if body.dimension != 3:
        raise SolverError(f"Grid solves need a body in R^3, got dimension {body.dimension}.")
    if not h > 0:
        raise SolverError(f"Grid spacing must be positive, got {h}.")
    if outer_radius <= body.bounding_radius + MIN_GAP_CELLS * h:
        raise DomainTooThinError(
            f"Outer radius {outer_radius:g} must exceed the bounding radius "
            f"{body.bounding_radius:g} by {MIN_GAP_CELLS} cells (h = {h:g})."
        )
    mode = resolve_mode(body, mode)

    count = int(math.ceil(outer_radius / h)) + PADDING_NODES
    symmetric = np.arange(-count, count + 1) * h
    direction = radial = None
    if mode == SolveMode.FULL3D:
        centre = np.zeros(3)
        axes = (symmetric, symmetric.copy(), symmetric.copy())
    else:
        direction, radial = body.symmetry_axis().frame()
        origin = body.symmetry_axis().origin
        centre = origin - np.dot(origin, direction) * direction
        axes = (np.arange(0, count + 1) * h, symmetric)

    points = lattice_points(mode, axes, centre, direction, radial)
    outer = _outer_sdf(centre, outer_radius)
    inside = body.level(points) <= 0
    outside = outer(points) >= 0
    if np.any(inside & outside):
        raise DomainTooThinError("The body reaches the outer sphere.")
    if not np.any(inside):
        raise SolverError(f"Body is not resolved by the grid at h = {h:g}.")
    gap = outer_radius - float(np.max(np.linalg.norm(points[inside] - centre, axis=-1)))
    if gap < MIN_GAP_CELLS * h:
        raise DomainTooThinError(f"Only {gap / h:.2f} cells between the body and the outer sphere.")

    unknown = ~inside & ~outside
    _, components = ndimage.label(unknown)
    if components != 1:
        raise DomainTooThinError(f"Fluid region splits into {components} components at h = {h:g}.")

    fractions, arm_values = _arms(body, outer, points, inside, outside, unknown, mode, h)
    classes = np.full(unknown.shape, NodeClass.FLUID, dtype=np.int8)
    classes[np.any(fractions < 1.0, axis=-1) & unknown] = NodeClass.BOUNDARY_ADJACENT
    classes[inside] = NodeClass.INSIDE
    classes[outside] = NodeClass.OUTSIDE
    index = np.full(unknown.shape, -1, dtype=np.int64)
    index[unknown] = np.arange(np.count_nonzero(unknown))

    logger.info(
        "Grid %s h=%g R=%g: shape %s, %d unknowns, %d boundary-adjacent",
        mode, h, outer_radius, unknown.shape, int(np.count_nonzero(unknown)),
        int(np.count_nonzero(classes == NodeClass.BOUNDARY_ADJACENT)),
    )
    return Grid(
        body=body, mode=mode, h=float(h), outer_radius=float(outer_radius), centre=centre, axes=axes,
        classes=classes, index=index, fractions=fractions, arm_values=arm_values,
        direction=direction, radial=radial,
    )


def _arms(body, outer, points, inside, outside, unknown, mode, h):
    ndim = unknown.ndim
    fractions = np.ones(unknown.shape + (2 * ndim,))
    arm_values = np.full(unknown.shape + (2 * ndim,), np.nan)
    for axis in range(ndim):
        for side, step in enumerate((-1, 1)):
            arm = 2 * axis + side
            neighbour_points = _shift(points, axis, step, np.nan)
            for blocked, func, value in (
                (_shift(inside, axis, step, False), body.sdf, 1.0),
                (_shift(outside, axis, step, False), outer, 0.0),
            ):
                cut = unknown & blocked
                if not np.any(cut):
                    continue
                fractions[cut, arm] = cut_fractions(func, points[cut], neighbour_points[cut], h)
                arm_values[cut, arm] = value
    if mode == SolveMode.AXISYM:
        # The rho- arm on the axis mirrors the rho+ arm.
        fractions[0, :, 0] = fractions[0, :, 1]
        arm_values[0, :, 0] = arm_values[0, :, 1]
    return fractions, arm_values
