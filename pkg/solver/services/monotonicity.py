"""Comparison of potentials solved on nested outer domains."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from django.conf import settings

from solver.exceptions import GridMismatchError
from solver.services.dirichlet import DiscretePotential

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonotonicityReport:
    """Largest excess of ``u_a`` over ``u_b`` on the fluid nodes both grids share."""

    max_violation: float
    tolerance: float
    common_nodes: int

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance


def _overlap(u_a: DiscretePotential, u_b: DiscretePotential) -> Tuple[tuple, tuple]:
    window_a, window_b = [], []
    for start_a, start_b, size_a, size_b in zip(
        u_a.grid.offsets, u_b.grid.offsets, u_a.grid.shape, u_b.grid.shape
    ):
        low, high = max(start_a, start_b), min(start_a + size_a, start_b + size_b)
        if high <= low:
            raise GridMismatchError("The grids do not overlap.")
        window_a.append(slice(low - start_a, high - start_a))
        window_b.append(slice(low - start_b, high - start_b))
    return tuple(window_a), tuple(window_b)


def potential_monotonicity_check(
    u_a: DiscretePotential, u_b: DiscretePotential, tolerance: Optional[float] = None
) -> MonotonicityReport:
    """Check ``u_a <= u_b`` where ``u_a`` was solved on the smaller outer domain.

    Passes when ``max(u_a - u_b)`` over common fluid nodes is at most ten
    times the solver tolerance.

    Raises:
        GridMismatchError: If the potentials do not share spacing, layout and
            alignment, or have no fluid node in common.
    """
    if not u_a.grid.same_lattice(u_b.grid):
        raise GridMismatchError(
            f"Potentials live on different lattices ({u_a.grid.mode}, h={u_a.h:g} vs {u_b.grid.mode}, h={u_b.h:g})."
        )
    tolerance = 10.0 * settings.CAP_SOLVER_RTOL if tolerance is None else float(tolerance)
    window_a, window_b = _overlap(u_a, u_b)
    common = u_a.grid.unknown[window_a] & u_b.grid.unknown[window_b]
    if not np.any(common):
        raise GridMismatchError("The potentials share no fluid nodes.")
    difference = u_a.values[window_a][common] - u_b.values[window_b][common]
    report = MonotonicityReport(
        max_violation=float(np.max(difference)),
        tolerance=tolerance,
        common_nodes=int(np.count_nonzero(common)),
    )
    if not report.passed:
        logger.warning(
            "Potential monotonicity violated by %.3e on %d common nodes", report.max_violation, report.common_nodes
        )
    return report
