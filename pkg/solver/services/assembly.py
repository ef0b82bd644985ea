"""Sparse assembly of the discrete Laplacian with unequal-arm boundary stencils."""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.sparse as sps

from capacity_lab.choices import SolveMode
from solver.services.grid import Grid, _shift

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearSystem:
    """``matrix @ u = rhs`` over the unknown nodes, rows scaled to a unit diagonal."""

    matrix: sps.csr_matrix
    rhs: np.ndarray


def arm_coefficients(grid: Grid, axis: int) -> Tuple[np.ndarray, np.ndarray]:
    """Weights ``(c_minus, c_plus)`` of the two arms along ``axis`` at every node.

    The row of an unknown node reads ``sum_arms c * (u_arm - u_node) = 0``.
    Arms of lengths ``a = theta_- h`` and ``b = theta_+ h`` give the
    Shortley-Weller second difference ``2/(b(a+b))``, ``2/(a(a+b))``. On the
    half-plane the ``rho`` axis adds the three-point first difference divided
    by ``rho``; on the symmetry axis itself the ``rho`` part is
    ``4 (u_+ - u_0) / b^2``.
    """
    a = grid.fractions[..., 2 * axis] * grid.h
    b = grid.fractions[..., 2 * axis + 1] * grid.h
    c_minus = 2.0 / (a * (a + b))
    c_plus = 2.0 / (b * (a + b))
    if grid.mode == SolveMode.AXISYM and axis == 0:
        rho = grid.axes[0][:, None] * np.ones(grid.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            c_minus = c_minus - b / (rho * a * (a + b))
            c_plus = c_plus + a / (rho * b * (a + b))
        c_minus[0] = 0.0
        c_plus[0] = 4.0 / (b[0] * b[0])
    return c_minus, c_plus


def assemble(grid: Grid) -> LinearSystem:
    """Build the sparse system of the exterior Dirichlet problem on ``grid``.

    Every off-diagonal entry is non-positive and each row is weakly
    diagonally dominant, so the discrete maximum principle holds.
    """
    unknown = grid.unknown
    size = grid.unknown_count
    rows, cols, data = [], [], []
    diagonal = np.zeros(size)
    rhs = np.zeros(size)

    for axis in range(grid.ndim):
        coefficients = arm_coefficients(grid, axis)
        for side, step in enumerate((-1, 1)):
            arm = 2 * axis + side
            weight = coefficients[side][unknown]
            diagonal += weight
            boundary = grid.arm_values[..., arm][unknown]
            cut = ~np.isnan(boundary)
            rhs[cut] += weight[cut] * boundary[cut]

            neighbour = _shift(grid.index, axis, step, -1)[unknown]
            linked = ~cut & (neighbour >= 0) & (weight != 0)
            rows.append(grid.index[unknown][linked])
            cols.append(neighbour[linked])
            data.append(-weight[linked])

    rows.append(np.arange(size))
    cols.append(np.arange(size))
    data.append(diagonal)
    scale = 1.0 / diagonal
    rows_all = np.concatenate(rows)
    matrix = sps.coo_matrix(
        (np.concatenate(data) * scale[rows_all], (rows_all, np.concatenate(cols))), shape=(size, size)
    ).tocsr()
    logger.debug("Assembled %d x %d system with %d non-zeros", size, size, matrix.nnz)
    return LinearSystem(matrix=matrix, rhs=rhs * scale)
