"""Fixed-step RK4 with step-halving acceptance, for the comparison flows."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from capacity_lab.choices import FlowStop
from comparison.exceptions import ComparisonError, DomainMismatchError

logger = logging.getLogger(__name__)

STEP_TOLERANCE = 1e-8
MAX_REFINEMENTS = 6
BLOW_DOWN = 1e-9
BLOW_UP = 1e9
RESOLVED_STEP = 0.1

RightHandSide = Callable[[float, np.ndarray], np.ndarray]
StopRule = Callable[[float], Optional[str]]


@dataclass(frozen=True)
class FlowResult:
    """
    Solution sampled on the grid ``linspace(0, r_max, N + 1)`` of the
    requested step, truncated where the flow stopped.

    ``values`` has one row per radius; column 0 is the curvature quantity and
    further columns carry coupled quantities such as a Jacobi field norm.
    """

    r: np.ndarray
    values: np.ndarray
    stop_reason: str
    stop_radius: float
    refinements: int
    change: float
    converged: bool
    crossings: Tuple[float, ...] = ()

    @property
    def curve(self) -> np.ndarray:
        return self.values[:, 0]

    def value_at(self, r, component: int = 0):
        """Linear interpolation of one component at radii inside the computed range."""
        radii = np.asarray(r, dtype=float)
        if np.any(radii < 0) or np.any(radii > self.r[-1]):
            raise DomainMismatchError(f"r outside the computed flow range [0, {self.r[-1]:g}].")
        return np.interp(radii, self.r, self.values[:, component])

    def padded(self, size: int) -> np.ndarray:
        """Column 0 padded with NaN to ``size`` samples."""
        out = np.full(size, np.nan)
        out[: len(self.r)] = self.curve
        return out


def threshold_stop(value: float) -> Optional[str]:
    if not math.isfinite(value) or abs(value) > BLOW_UP:
        return FlowStop.BLOW_UP
    if value < BLOW_DOWN:
        return FlowStop.BLOW_DOWN
    return None


def blow_up_stop(value: float) -> Optional[str]:
    if not math.isfinite(value) or abs(value) > BLOW_UP:
        return FlowStop.BLOW_UP
    return None


def _rk4_run(rhs: RightHandSide, y0: np.ndarray, grid: np.ndarray, stop: StopRule):
    states = [y0]
    y = y0
    reason = FlowStop.COMPLETED
    stop_radius = float(grid[-1])
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(len(grid) - 1):
            r, h = grid[k], grid[k + 1] - grid[k]
            k1 = rhs(r, y)
            k2 = rhs(r + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(r + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(r + h, y + h * k3)
            y = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            outcome = stop(float(y[0]))
            if outcome is not None:
                reason, stop_radius = outcome, float(grid[k + 1])
                break
            states.append(y)
    return np.array(states), reason, stop_radius


def _crossings(grid: np.ndarray, values: np.ndarray) -> Tuple[float, ...]:
    signs = np.sign(values)
    idx = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    roots = grid[idx] - values[idx] * (grid[idx + 1] - grid[idx]) / (values[idx + 1] - values[idx])
    return tuple(float(x) for x in roots)


def integrate(
    rhs: RightHandSide,
    y0,
    r_max: float,
    step: float,
    stop: StopRule = threshold_stop,
    tolerance: float = STEP_TOLERANCE,
    max_refinements: int = MAX_REFINEMENTS,
) -> FlowResult:
    """Integrate ``y' = rhs(r, y)`` from ``r = 0`` to ``r_max``.

    The solution is recomputed with the step halved until two successive
    resolutions agree to ``tolerance`` (relative above 1) on the coarse
    nodes they share. Nodes where ``|y| * step > 0.1`` are left out of the
    comparison. The flow stops early when ``stop`` names a reason.
    """
    if not step > 0 or not r_max > 0:
        raise ComparisonError("Flow integration needs a positive step and r_max.")
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    nodes = max(1, int(math.ceil(r_max / step - 1e-9)))
    coarse = np.linspace(0.0, r_max, nodes + 1)

    previous, reason, stop_radius = _rk4_run(rhs, y0, coarse, stop)
    fine_grid, fine = coarse, previous
    change = math.inf
    refinements = 0
    converged = False
    for refinements in range(1, max_refinements + 1):
        factor = 2 ** refinements
        fine_grid = np.linspace(0.0, r_max, nodes * factor + 1)
        fine, reason, stop_radius = _rk4_run(rhs, y0, fine_grid, stop)
        sampled = fine[::factor]
        shared = min(len(sampled), len(previous))
        # Near a blow-up only the location matters; agreement is judged where |y| h is small.
        tracked = np.abs(previous[:shared, 0]) * (r_max / nodes) <= RESOLVED_STEP
        scale = np.maximum(1.0, np.abs(sampled[:shared][tracked]))
        difference = np.abs(sampled[:shared][tracked] - previous[:shared][tracked]) / scale
        change = float(np.max(difference)) if difference.size else 0.0
        previous = sampled
        if change < tolerance:
            converged = True
            break
    if not converged:
        logger.warning(
            "Flow did not settle after %d step halvings (change %.3e > %.1e)", refinements, change, tolerance
        )

    return FlowResult(
        r=coarse[: len(previous)],
        values=previous,
        stop_reason=reason,
        stop_radius=stop_radius,
        refinements=refinements,
        change=change,
        converged=converged,
        crossings=_crossings(fine_grid[: len(fine)], fine[:, 0]),
    )
