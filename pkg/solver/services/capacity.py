"""Capacity estimates from solved grid potentials.

Two estimates are computed from every potential: the discrete Dirichlet
energy and the outward flux through an offset surface ``dK_offset``. Their
relative difference is the error indicator carried by every estimate.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from django.conf import settings
from scipy.interpolate import RegularGridInterpolator
from skimage import measure

from capacity_lab.choices import CapacityMethod, SolveMode
from geometry.exceptions import GeometryError
from geometry.services.bodies import ConvexBody, parallel_body
from geometry.services.meshing import boundary_samples
from solver.exceptions import BudgetExhaustedError, OffsetOutsideDomainError, SolverError
from solver.services.dirichlet import DiscretePotential, solve_annulus
from solver.services.grid import Grid, _shift

logger = logging.getLogger(__name__)

OFFSET_RANGE = (2.0, 5.0)
EXHAUSTION_TOLERANCE = 0.005
GRID_METHODS = (CapacityMethod.ENERGY, CapacityMethod.FLUX)


@dataclass(frozen=True)
class TraceEntry:
    """One solve of a refinement or exhaustion sequence."""

    outer_radius: float
    h: float
    value: float


@dataclass(frozen=True)
class CapacityEstimate:
    """
    Grid capacity with its error indicator ``|energy - flux| / value``.

    Exhaustion and extrapolation results carry the solves they were built
    from in ``trace``; ``last_iterate`` is the final relative capacity of an
    exhaustion sequence and ``converged`` is False when its budget ran out.
    """

    value: float
    method: str
    h: float
    offset: Optional[float]
    error_indicator: float
    energy: Optional[float] = None
    flux: Optional[float] = None
    trace: Tuple[TraceEntry, ...] = ()
    converged: bool = True
    last_iterate: Optional[float] = None

    def require_converged(self) -> "CapacityEstimate":
        if not self.converged:
            raise BudgetExhaustedError(
                f"Exhaustion did not converge after {len(self.trace)} outer radii "
                f"(last radius {self.trace[-1].outer_radius:g})."
            )
        return self


def _rho(grid: Grid) -> np.ndarray:
    return grid.axes[0][:, None] * np.ones(grid.shape)


def _transverse(grid: Grid, axis: int, midpoint) -> np.ndarray:
    """Cross-section measure of the tube around edges along ``axis``.

    ``midpoint`` is the signed offset of the edge midpoint from its node,
    needed for ``rho`` edges on the half-plane where the ring measure is
    ``2 pi rho_mid h``.
    """
    h = grid.h
    if grid.mode == SolveMode.FULL3D:
        return np.full(grid.shape, h * h)
    rho = _rho(grid)
    if axis == 0:
        return 2.0 * math.pi * (rho + midpoint) * h
    area = 2.0 * math.pi * rho * h
    area[0] = 0.25 * math.pi * h * h
    return area


def discrete_energy(grid: Grid, values: np.ndarray) -> float:
    """Dirichlet integral of node values summed edge by edge.

    Each edge contributes ``(du / length)^2`` times its length and tube
    cross-section. Cut edges end at the boundary crossing and take the
    boundary value there.
    """
    h = grid.h
    unknown = grid.unknown
    total = 0.0
    for axis in range(grid.ndim):
        linked = unknown & _shift(unknown, axis, 1, False)
        delta = _shift(values, axis, 1, 0.0) - values
        tube = _transverse(grid, axis, 0.5 * h)
        total += float(np.sum(delta[linked] ** 2 * tube[linked])) / h
        for side, sign in enumerate((-1.0, 1.0)):
            arm = 2 * axis + side
            boundary = grid.arm_values[..., arm]
            cut = unknown & ~np.isnan(boundary)
            if grid.mode == SolveMode.AXISYM and axis == 0 and side == 0:
                cut[0] = False
            length = grid.fractions[..., arm] * h
            tube = _transverse(grid, axis, sign * 0.5 * length)
            jump = boundary - values
            total += float(np.sum(jump[cut] ** 2 * tube[cut] / length[cut]))
    return total


def nodal_gradient(u: DiscretePotential) -> np.ndarray:
    """Lattice-coordinate gradient at unknown nodes (NaN elsewhere).

    Three-point differences on unequal arms: with arms ``a`` and ``b``,
    ``u' = (a^2 (u_+ - u_0) + b^2 (u_0 - u_-)) / (a b (a + b))``.
    """
    grid = u.grid
    unknown = grid.unknown
    gradient = np.full(grid.shape + (grid.ndim,), np.nan)
    with np.errstate(invalid="ignore"):
        for axis in range(grid.ndim):
            arms = []
            for side, step in enumerate((-1, 1)):
                arm = 2 * axis + side
                boundary = grid.arm_values[..., arm]
                neighbour = _shift(u.values, axis, step, np.nan)
                arms.append((grid.fractions[..., arm] * grid.h, np.where(np.isnan(boundary), neighbour, boundary)))
            (a, u_minus), (b, u_plus) = arms
            derivative = (a * a * (u_plus - u.values) + b * b * (u.values - u_minus)) / (a * b * (a + b))
            if grid.mode == SolveMode.AXISYM and axis == 0:
                derivative[0] = 0.0
            gradient[..., axis] = np.where(unknown, derivative, np.nan)
    return gradient


def _world_gradient(u: DiscretePotential, points: np.ndarray) -> np.ndarray:
    grid = u.grid
    gradient = nodal_gradient(u)
    local = grid.to_local(points)
    components = [
        RegularGridInterpolator(grid.axes, gradient[..., k], bounds_error=False, fill_value=np.nan)(local)
        for k in range(grid.ndim)
    ]
    if grid.mode == SolveMode.FULL3D:
        return np.stack(components, axis=-1)
    relative = points - grid.centre
    along = relative - local[:, 1:2] * grid.direction
    rho = local[:, 0:1]
    unit = np.divide(along, rho, out=np.zeros_like(along), where=rho > 0)
    return components[0][:, None] * unit + components[1][:, None] * grid.direction


def _default_offset(u: DiscretePotential, offset: Optional[float]) -> float:
    offset = settings.CAP_FLUX_OFFSET_MULTIPLIER * u.h if offset is None else float(offset)
    low, high = (m * u.h for m in OFFSET_RANGE)
    if offset < low * (1.0 - 1e-12) or offset > high * (1.0 + 1e-12):
        raise OffsetOutsideDomainError(f"Flux offset {offset:g} outside [{low:g}, {high:g}] (2h to 5h).")
    return offset


def boundary_flux(u: DiscretePotential, body: ConvexBody, offset: float, resolution: Optional[int] = None) -> float:
    """``-sum w (grad u . nu)`` over boundary samples of the parallel body at ``offset``."""
    resolution = settings.CAP_MESH_RESOLUTION if resolution is None else int(resolution)
    try:
        samples = boundary_samples(parallel_body(body, offset), resolution)
    except GeometryError as e:
        raise SolverError(f"Flux surface extraction failed: {str(e)}")
    gradient = _world_gradient(u, samples.points)
    if not np.all(np.isfinite(gradient)):
        raise OffsetOutsideDomainError(f"Flux surface at offset {offset:g} leaves the solved region.")
    return -float(np.sum(samples.weights * np.sum(gradient * samples.normals, axis=-1)))


def _estimate(value: float, method: str, u: DiscretePotential, offset: float, energy: float, flux: float):
    if not value > 0 or not math.isfinite(value):
        raise SolverError(f"Grid capacity must be positive and finite, got {value}.")
    return CapacityEstimate(
        value=value,
        method=method,
        h=u.h,
        offset=offset,
        error_indicator=abs(energy - flux) / value,
        energy=energy,
        flux=flux,
        trace=(TraceEntry(u.grid.outer_radius, u.h, value),),
    )


def capacity_energy(
    u: DiscretePotential, offset: Optional[float] = None, resolution: Optional[int] = None
) -> CapacityEstimate:
    """Relative capacity as the discrete Dirichlet energy of ``u``.

    The flux at ``offset`` is computed alongside for the error indicator.
    """
    offset = _default_offset(u, offset)
    energy = discrete_energy(u.grid, u.values)
    flux = boundary_flux(u, u.grid.body, offset, resolution)
    logger.debug("Energy %.6g, flux %.6g at h=%g", energy, flux, u.h)
    return _estimate(energy, CapacityMethod.ENERGY, u, offset, energy, flux)


def capacity_flux(
    u: DiscretePotential,
    body: Optional[ConvexBody] = None,
    offset: Optional[float] = None,
    resolution: Optional[int] = None,
) -> CapacityEstimate:
    """Relative capacity as the outward flux of ``-grad u`` through ``d(K + offset B)``.

    Raises:
        OffsetOutsideDomainError: If ``offset`` is outside ``[2h, 5h]`` or the
            offset surface is not surrounded by fluid nodes.
    """
    offset = _default_offset(u, offset)
    flux = boundary_flux(u, u.grid.body if body is None else body, offset, resolution)
    energy = discrete_energy(u.grid, u.values)
    return _estimate(flux, CapacityMethod.FLUX, u, offset, energy, flux)


def grid_capacity(u: DiscretePotential, method: str = CapacityMethod.ENERGY, **kwargs) -> CapacityEstimate:
    if method == CapacityMethod.ENERGY:
        return capacity_energy(u, **kwargs)
    if method == CapacityMethod.FLUX:
        return capacity_flux(u, **kwargs)
    raise SolverError(f"Unknown grid capacity method: {method}")


def richardson_capacity(
    body: ConvexBody,
    outer_radius: float,
    h: Optional[float] = None,
    method: str = CapacityMethod.ENERGY,
    mode: str = SolveMode.AUTO,
    order: int = 1,
) -> CapacityEstimate:
    """Extrapolate solves at ``h`` and ``h/2``: ``(2^p c(h/2) - c(h)) / (2^p - 1)``.

    With the default ``order = 1`` this is ``2 c(h/2) - c(h)``.
    """
    h = settings.CAP_DEFAULT_H * body.bounding_radius if h is None else float(h)
    coarse = grid_capacity(solve_annulus(body, outer_radius, h, mode), method)
    fine = grid_capacity(solve_annulus(body, outer_radius, 0.5 * h, mode), method)
    factor = 2.0 ** order
    value = (factor * fine.value - coarse.value) / (factor - 1.0)
    if not value > 0:
        raise SolverError(f"Extrapolated capacity is not positive ({value:g}); refine the grid.")
    logger.info("Richardson capacity %.6g from %.6g (h=%g) and %.6g (h=%g)", value, coarse.value, h, fine.value, 0.5 * h)
    return CapacityEstimate(
        value=value,
        method=method,
        h=0.5 * h,
        offset=fine.offset,
        error_indicator=max(fine.error_indicator, abs(value - fine.value) / value),
        energy=fine.energy,
        flux=fine.flux,
        trace=coarse.trace + fine.trace,
    )


def whole_space_fit(first: TraceEntry, second: TraceEntry) -> Optional[float]:
    """Fit ``1/cap(R) = 1/c + b/R`` through two solves and return ``c``, or None if the fit is not positive."""
    slope = (1.0 / second.value - 1.0 / first.value) / (1.0 / second.outer_radius - 1.0 / first.outer_radius)
    intercept = 1.0 / second.value - slope / second.outer_radius
    return 1.0 / intercept if intercept > 0 else None


def _schedule(body: ConvexBody, h_schedule, steps: int) -> Sequence[float]:
    if h_schedule is None:
        return [settings.CAP_DEFAULT_H * body.bounding_radius] * steps
    if isinstance(h_schedule, (int, float)):
        return [float(h_schedule)] * steps
    schedule = [float(h) for h in h_schedule]
    if not schedule:
        raise SolverError("The h schedule is empty.")
    return schedule


def exhaustion_capacity(
    body: ConvexBody,
    growth: Optional[float] = None,
    h_schedule: Union[None, float, Sequence[float]] = None,
    start_radius: Optional[float] = None,
    max_steps: Optional[int] = None,
    method: str = CapacityMethod.ENERGY,
    mode: str = SolveMode.AUTO,
    tolerance: float = EXHAUSTION_TOLERANCE,
) -> CapacityEstimate:
    """Whole-space capacity from relative capacities on growing outer balls.

    Outer radii are ``start_radius * growth^j`` (start defaults to twice the
    bounding radius). After each solve ``1/cap(R) = 1/c + b/R`` is fitted
    through the last two values; the sequence stops when two successive fits
    differ by less than ``tolerance``. The returned value is the last fit and
    ``last_iterate`` the last relative capacity.

    A sequence that runs out of steps is returned with ``converged`` False.

    Args:
        h_schedule: One spacing per step, a single spacing for all steps, or
            None for ``CAP_DEFAULT_H`` times the bounding radius.
        max_steps: Step budget when no explicit schedule is given; defaults
            to ``CAP_EXHAUSTION_MAX_STEPS``.
    """
    growth = settings.CAP_EXHAUSTION_GROWTH if growth is None else float(growth)
    if growth < 1.5:
        raise SolverError(f"Exhaustion growth factor must be at least 1.5, got {growth}.")
    steps = settings.CAP_EXHAUSTION_MAX_STEPS if max_steps is None else int(max_steps)
    schedule = _schedule(body, h_schedule, steps)
    radius = 2.0 * body.bounding_radius if start_radius is None else float(start_radius)

    trace = []
    fits = []
    estimate = None
    converged = False
    for step, h in enumerate(schedule):
        estimate = grid_capacity(solve_annulus(body, radius * growth ** step, h, mode), method)
        trace.append(estimate.trace[0])
        logger.info("Exhaustion step %d: R=%g h=%g cap=%.6g", step, trace[-1].outer_radius, h, estimate.value)
        if len(trace) > 1:
            if trace[-1].value > trace[-2].value:
                logger.warning(
                    "Relative capacity grew from %.6g to %.6g between R=%g and R=%g",
                    trace[-2].value, trace[-1].value, trace[-2].outer_radius, trace[-1].outer_radius,
                )
            fit = whole_space_fit(trace[-2], trace[-1])
            if fit is None:
                logger.warning("Whole-space fit at R=%g is not positive; keeping the last iterate", trace[-1].outer_radius)
                fit = trace[-1].value
            fits.append(fit)
        if len(fits) > 1 and abs(fits[-1] - fits[-2]) < tolerance * fits[-1]:
            converged = True
            break

    if not converged:
        logger.warning("Exhaustion budget of %d steps used without convergence", len(trace))
    value = fits[-1] if fits else trace[-1].value
    change = abs(fits[-1] - fits[-2]) / fits[-1] if len(fits) > 1 else 1.0
    return CapacityEstimate(
        value=value,
        method=method,
        h=trace[-1].h,
        offset=estimate.offset,
        error_indicator=max(estimate.error_indicator, change),
        energy=estimate.energy,
        flux=estimate.flux,
        trace=tuple(trace),
        converged=converged,
        last_iterate=trace[-1].value,
    )


def level_set_sphericity(u: DiscretePotential, level: float = 0.5) -> float:
    """``(max - min) / mean`` of the distance from the body centre to the level set ``u = level``.

    Zero for concentric spheres; a diagnostic for near-equality bodies.
    """
    if not 0.0 < level < 1.0:
        raise SolverError(f"Level must lie strictly between 0 and 1, got {level}.")
    grid = u.grid
    first = np.array([axis[0] for axis in grid.axes])
    if grid.mode == SolveMode.FULL3D:
        vertices, _, _, _ = measure.marching_cubes(u.values, level=level, spacing=(grid.h,) * 3)
        points = grid.centre + first + vertices
    else:
        contours = measure.find_contours(u.values, level)
        if not contours:
            raise SolverError(f"No level set u = {level} on the grid.")
        local = first + grid.h * np.concatenate(contours)
        points = grid.centre + local[:, 1:2] * grid.direction + local[:, 0:1] * grid.radial
    distances = np.linalg.norm(points - grid.body.center, axis=-1)
    return float((np.max(distances) - np.min(distances)) / np.mean(distances))
