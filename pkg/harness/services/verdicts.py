"""Verdict table shared by every check.

A verdict depends only on the signed slack, the tolerance, the scenario kind
and whether the hypothesis certificate held. Slack is oriented so that a
positive value always means the bound holds with room to spare.
"""

import math
from typing import Optional

from capacity_lab.choices import BoundDirection, ScenarioKind, Verdict

ERROR_MULTIPLIER = 3.0
RELATIVE_FLOOR = 1e-8

LOWER_BOUND_KINDS = frozenset({
    ScenarioKind.THM_3_1.value,
    ScenarioKind.COR_4_1.value,
    ScenarioKind.COR_4_3.value,
    ScenarioKind.THM_4_5.value,
    ScenarioKind.SZEGO_VOLUME.value,
    ScenarioKind.POLYA_SZEGO_RATIO.value,
    ScenarioKind.RADIAL_EQUALITY.value,
    ScenarioKind.RICCATI_SUITE.value,
})
UPPER_BOUND_KINDS = frozenset({
    ScenarioKind.THM_3_5.value,
    ScenarioKind.COR_4_2.value,
    ScenarioKind.COR_4_4.value,
    ScenarioKind.SZEGO_MEAN_CURVATURE.value,
})
# Checks that only assert an inequality; a zero slack there is not an equality case.
INEQUALITY_ONLY_KINDS = frozenset({ScenarioKind.RICCATI_SUITE.value})
EXPLORATORY_KINDS = frozenset({ScenarioKind.POLYA_SZEGO_RATIO.value})


def bound_direction(kind: str) -> str:
    if kind in UPPER_BOUND_KINDS:
        return BoundDirection.UPPER
    if kind in LOWER_BOUND_KINDS:
        return BoundDirection.LOWER
    return BoundDirection.NONE


def signed_slack(computed: float, bound: float, kind: str) -> float:
    """``computed - bound`` for lower bounds, ``bound - computed`` for upper bounds."""
    if bound_direction(kind) == BoundDirection.UPPER:
        return float(bound) - float(computed)
    return float(computed) - float(bound)


def verdict_tolerance(capacity: Optional[float], error_indicator: float, bound: Optional[float]) -> float:
    """``max(3 * error_indicator * capacity, 1e-8 * max(1, |bound|))``."""
    scale = 0.0 if bound is None or not math.isfinite(bound) else abs(bound)
    floor = RELATIVE_FLOOR * max(1.0, scale)
    if capacity is None or not math.isfinite(capacity) or not math.isfinite(error_indicator):
        return floor
    return max(ERROR_MULTIPLIER * abs(error_indicator) * abs(capacity), floor)


def classify_slack(slack: Optional[float], tolerance: float, kind: str, applicable: bool = True) -> str:
    """
    Map a signed slack to a verdict.

    * inapplicable when the certificate failed or the kind is exploratory
    * equality iff ``|slack| <= tol``
    * holds iff ``slack > tol``
    * fails otherwise, including a missing or NaN slack

    For inequality-only kinds the equality band counts as holds and any
    ``slack >= -tol`` holds.
    """
    if not applicable or kind in EXPLORATORY_KINDS:
        return Verdict.INAPPLICABLE
    if slack is None or not math.isfinite(slack):
        return Verdict.FAILS
    if kind in INEQUALITY_ONLY_KINDS:
        return Verdict.HOLDS if slack >= -tolerance else Verdict.FAILS
    if abs(slack) <= tolerance:
        return Verdict.EQUALITY
    return Verdict.HOLDS if slack > tolerance else Verdict.FAILS
