"""Dirichlet solve of the condenser problem ``u = 1`` on the body, ``u = 0`` on the outer sphere."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from django.conf import settings
from scipy.sparse.linalg import LinearOperator, bicgstab, spilu, splu

from capacity_lab.choices import SolveMode
from geometry.services.bodies import ConvexBody
from solver.exceptions import NonConvergenceError, SolverError
from solver.services.assembly import LinearSystem, assemble
from solver.services.grid import Grid, build_grid

logger = logging.getLogger(__name__)

DIRECT_SOLVE_LIMIT = 600_000
REFINEMENT_STEPS = 3
CLIP_WARNING = 1e-8
ILU_DROP_TOLERANCE = 1e-5
ILU_FILL_FACTOR = 20.0


@dataclass(frozen=True)
class DiscretePotential:
    """
    Solved potential on every node of ``grid``.

    Unknown nodes carry the solution, clipped to ``[0, 1]``; nodes inside the
    body hold 1 and nodes outside the outer sphere hold 0.
    """

    grid: Grid
    values: np.ndarray
    residual_norm: float
    iterations: int
    solver: str

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def fluid_values(self) -> np.ndarray:
        return self.values[self.grid.unknown]


def _relative_residual(system: LinearSystem, x: np.ndarray) -> float:
    norm = float(np.linalg.norm(system.rhs))
    return float(np.linalg.norm(system.rhs - system.matrix @ x)) / (norm if norm > 0 else 1.0)


def _direct_solve(system: LinearSystem, rtol: float):
    try:
        factor = splu(system.matrix.tocsc())
    except RuntimeError as e:
        raise SolverError(f"Sparse LU factorisation failed: {str(e)}")
    x = factor.solve(system.rhs)
    iterations = 1
    residual = _relative_residual(system, x)
    while residual > rtol and iterations <= REFINEMENT_STEPS:
        x = x + factor.solve(system.rhs - system.matrix @ x)
        residual = _relative_residual(system, x)
        iterations += 1
    return x, residual, iterations


def _iterative_solve(system: LinearSystem, rtol: float, max_iterations: int):
    matrix = system.matrix
    try:
        ilu = spilu(matrix.tocsc(), drop_tol=ILU_DROP_TOLERANCE, fill_factor=ILU_FILL_FACTOR)
    except RuntimeError as e:
        raise SolverError(f"Incomplete LU preconditioner failed: {str(e)}")
    preconditioner = LinearOperator(matrix.shape, ilu.solve)
    counter = {"iterations": 0}

    def count(_):
        counter["iterations"] += 1

    x, info = bicgstab(matrix, system.rhs, rtol=rtol, maxiter=max_iterations, M=preconditioner, callback=count)
    if info > 0:
        raise NonConvergenceError(
            f"BiCGSTAB stopped after {info} iterations at residual {_relative_residual(system, x):.2e}."
        )
    if info < 0:
        raise SolverError(f"BiCGSTAB broke down (info = {info}).")
    return x, _relative_residual(system, x), counter["iterations"]


def solve_annulus(
    body: ConvexBody,
    outer_radius: float,
    h: Optional[float] = None,
    mode: str = SolveMode.AUTO,
    rtol: Optional[float] = None,
    max_iterations: Optional[int] = None,
    direct_limit: int = DIRECT_SOLVE_LIMIT,
) -> DiscretePotential:
    """Solve the Laplace equation between ``body`` (value 1) and the sphere of radius ``outer_radius`` (value 0).

    Systems up to ``direct_limit`` unknowns are factorised with sparse LU and
    polished by iterative refinement; larger ones use BiCGSTAB with an
    incomplete LU preconditioner.

    Args:
        body: Body in R^3.
        outer_radius: Radius of the outer sphere, centred as in ``build_grid``.
        h: Grid spacing; defaults to ``CAP_DEFAULT_H`` times the bounding radius.
        mode: ``auto``, ``full3d`` or ``axisym``.
        rtol: Relative residual target; defaults to ``CAP_SOLVER_RTOL``.
        max_iterations: Krylov iteration budget; defaults to ``CAP_SOLVER_MAX_ITERATIONS``.

    Raises:
        DomainTooThinError: If the gap between body and outer sphere is under three cells.
        NonConvergenceError: If the residual target is missed.
    """
    h = settings.CAP_DEFAULT_H * body.bounding_radius if h is None else float(h)
    rtol = settings.CAP_SOLVER_RTOL if rtol is None else float(rtol)
    max_iterations = settings.CAP_SOLVER_MAX_ITERATIONS if max_iterations is None else int(max_iterations)

    grid = build_grid(body, outer_radius, h, mode)
    system = assemble(grid)
    if grid.unknown_count <= direct_limit:
        x, residual, iterations = _direct_solve(system, rtol)
        solver = "splu"
    else:
        x, residual, iterations = _iterative_solve(system, rtol, max_iterations)
        solver = "bicgstab"
    if residual > rtol:
        raise NonConvergenceError(f"Relative residual {residual:.2e} above the target {rtol:.1e} ({solver}).")

    excess = float(max(np.max(x) - 1.0, -np.min(x), 0.0))
    if excess > CLIP_WARNING:
        logger.warning("Solution leaves [0, 1] by %.2e before clipping", excess)
    values = np.where(grid.inside, 1.0, 0.0)
    values[grid.unknown] = np.clip(x, 0.0, 1.0)

    logger.info(
        "Solved %d unknowns (%s, h=%g, R=%g) with %s: residual %.2e after %d iterations",
        grid.unknown_count, grid.mode, h, outer_radius, solver, residual, iterations,
    )
    return DiscretePotential(grid=grid, values=values, residual_norm=residual, iterations=iterations, solver=solver)
