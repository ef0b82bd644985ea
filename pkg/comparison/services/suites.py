"""Seeded randomized property suites for the comparison flows."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings
from scipy.interpolate import PchipInterpolator

from capacity_lab.choices import BoundDirection, CurvatureKind, FlowStop
from comparison.services.flows import (
    FLOW_TOLERANCE,
    mean_curvature_flow,
    mean_curvature_upper_bound,
    riccati_flow,
    riccati_lower_bound,
)
from comparison.services.profiles import flat_profile, random_table_profile, shifted_profile
from comparison.services.reports import ComparisonReport, build_report

logger = logging.getLogger(__name__)

SUITE_SIZE = 200
SUITE_R_MAX = 3.0
SUITE_STEP = 0.01
SECTIONAL_RANGE = (-5.0, 0.0)
RICCI_RANGE = (0.0, 5.0)
INITIAL_RANGE = (0.1, 5.0)
UMBILICITY_RANGE = (1.0, 3.0)
UMBILICITY_KNOTS = 8
RIGIDITY_EPSILONS = (1e-3, 1e-4)


def _rng(seed: Optional[int]) -> Tuple[np.random.Generator, int]:
    seed = settings.CAP_SEED if seed is None else int(seed)
    return np.random.default_rng(seed), seed


def _suite_report(context, grid, slacks, seed, count, stopped) -> ComparisonReport:
    # One row per flow; the report keeps the worst slack at every radius.
    table = np.vstack(slacks)
    worst = np.min(np.where(np.isnan(table), np.inf, table), axis=0)
    worst[np.isinf(worst)] = np.nan
    failures = [i for i, row in enumerate(table) if np.nanmin(row) < -FLOW_TOLERANCE]
    if failures:
        logger.warning("%s: %d of %d flows violate the bound (seed %d)", context, len(failures), count, seed)
    return build_report(
        context=context,
        radii=grid,
        computed=worst,
        bound=np.zeros_like(grid),
        direction=BoundDirection.LOWER,
        tolerance=FLOW_TOLERANCE,
        details={"seed": seed, "count": count, "failures": failures, "stopped": stopped},
    )


def cartan_hadamard_suite(
    count: int = SUITE_SIZE,
    seed: Optional[int] = None,
    r_max: float = SUITE_R_MAX,
    step: float = SUITE_STEP,
) -> ComparisonReport:
    """Riccati flows on random ``sec <= 0`` profiles stay above ``f0/(1 + f0 r)``.

    The report's computed curve is the pointwise minimum over the flows of
    ``f(r) - f0/(1 + f0 r)`` against a zero bound.
    """
    rng, seed = _rng(seed)
    size = int(np.ceil(r_max / step - 1e-9)) + 1
    grid = np.linspace(0.0, r_max, size)
    slacks: List[np.ndarray] = []
    stopped = 0
    for _ in range(count):
        profile = random_table_profile(CurvatureKind.SECTIONAL, rng, *SECTIONAL_RANGE, r_max)
        f0 = float(rng.uniform(*INITIAL_RANGE))
        flow = riccati_flow(profile, f0, step=step)
        stopped += flow.stop_reason != FlowStop.COMPLETED
        slacks.append(flow.padded(size) - riccati_lower_bound(f0, grid))
    logger.info("Cartan-Hadamard suite: %d flows, seed %d", count, seed)
    return _suite_report("riccati-cartan-hadamard", grid, slacks, seed, count, stopped)


def ricci_suite(
    count: int = SUITE_SIZE,
    seed: Optional[int] = None,
    r_max: float = SUITE_R_MAX,
    step: float = SUITE_STEP,
    n: int = 2,
) -> ComparisonReport:
    """Mean curvature flows on random ``Ric >= 0`` profiles stay below ``H0/(1 + H0 r)``.

    Umbilicity factors are random piecewise-cubic profiles with values in
    ``[1, 3]``. The computed curve is the pointwise minimum of
    ``H0/(1 + H0 r) - H(r)``.
    """
    rng, seed = _rng(seed)
    size = int(np.ceil(r_max / step - 1e-9)) + 1
    grid = np.linspace(0.0, r_max, size)
    profile_nodes = np.linspace(0.0, r_max, UMBILICITY_KNOTS)
    slacks: List[np.ndarray] = []
    stopped = 0
    for _ in range(count):
        profile = random_table_profile(CurvatureKind.RICCI, rng, *RICCI_RANGE, r_max)
        umbilicity = PchipInterpolator(profile_nodes, rng.uniform(*UMBILICITY_RANGE, size=len(profile_nodes)))
        h0 = float(rng.uniform(*INITIAL_RANGE))
        flow = mean_curvature_flow(profile, h0, umbilicity, step=step, n=n)
        stopped += flow.stop_reason != FlowStop.COMPLETED
        slacks.append(mean_curvature_upper_bound(h0, grid) - flow.padded(size))
    logger.info("Ricci suite: %d flows, seed %d", count, seed)
    return _suite_report("riccati-nonnegative-ricci", grid, slacks, seed, count, stopped)


def sum_form_check(
    flows: int = 4,
    h0: float = 1.0,
    seed: Optional[int] = None,
    r_max: float = SUITE_R_MAX,
    step: float = SUITE_STEP,
) -> ComparisonReport:
    """The average of several Riccati flows with ``f_i(0) >= H0`` stays above ``H0/(1 + H0 r)``.

    ``x -> x/(1 + r x)`` is increasing, so each flow dominates the bound
    with its own start; the average then dominates the bound at ``H0``.
    """
    rng, seed = _rng(seed)
    size = int(np.ceil(r_max / step - 1e-9)) + 1
    grid = np.linspace(0.0, r_max, size)
    curves = []
    starts = []
    for _ in range(flows):
        profile = random_table_profile(CurvatureKind.SECTIONAL, rng, *SECTIONAL_RANGE, r_max)
        f0 = h0 + float(rng.uniform(0.0, INITIAL_RANGE[1]))
        starts.append(f0)
        curves.append(riccati_flow(profile, f0, step=step).padded(size))
    return build_report(
        context="riccati-sum-form",
        radii=grid,
        computed=np.mean(curves, axis=0),
        bound=riccati_lower_bound(h0, grid),
        direction=BoundDirection.LOWER,
        tolerance=FLOW_TOLERANCE,
        details={"seed": seed, "starts": starts},
    )


@dataclass(frozen=True)
class RigidityOutcome:
    """Sup-norm deviation from the equality curve for each perturbation size."""

    epsilons: Tuple[float, ...]
    sectional_deviation: Tuple[float, ...]
    ricci_deviation: Tuple[float, ...]

    @staticmethod
    def _ratios(deviation: Sequence[float], epsilons: Sequence[float]) -> Tuple[float, ...]:
        return tuple(
            (deviation[i] / deviation[i + 1]) / (epsilons[i] / epsilons[i + 1]) for i in range(len(epsilons) - 1)
        )

    @property
    def sectional_scaling(self) -> Tuple[float, ...]:
        """Observed deviation ratio over perturbation ratio; 1 means linear."""
        return self._ratios(self.sectional_deviation, self.epsilons)

    @property
    def ricci_scaling(self) -> Tuple[float, ...]:
        return self._ratios(self.ricci_deviation, self.epsilons)


def rigidity_scaling(
    epsilons: Sequence[float] = RIGIDITY_EPSILONS,
    f0: float = 1.0,
    r_max: float = 1.0,
    step: float = SUITE_STEP,
) -> RigidityOutcome:
    """Perturb the flat, umbilic inputs by ``epsilon`` and measure the deviation from ``f0/(1 + f0 r)``.

    The sectional side uses ``sec = -epsilon``; the Ricci side uses
    ``Ric = epsilon`` with umbilicity ``1 + epsilon``.
    """
    sectional, ricci = [], []
    for epsilon in epsilons:
        flat_sec = flat_profile(CurvatureKind.SECTIONAL, r_max)
        flow = riccati_flow(shifted_profile(flat_sec, -epsilon), f0, step=step)
        sectional.append(float(np.max(np.abs(flow.curve - riccati_lower_bound(f0, flow.r)))))

        flat_ric = flat_profile(CurvatureKind.RICCI, r_max)
        flow = mean_curvature_flow(shifted_profile(flat_ric, epsilon), f0, 1.0 + epsilon, step=step)
        ricci.append(float(np.max(np.abs(flow.curve - mean_curvature_upper_bound(f0, flow.r)))))
    return RigidityOutcome(tuple(epsilons), tuple(sectional), tuple(ricci))
