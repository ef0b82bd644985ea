"""Comparison reports: a computed curve against a bound curve."""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from capacity_lab.choices import BoundDirection, Verdict


@dataclass(frozen=True)
class ComparisonReport:
    """
    Sampled comparison of a computed quantity with its bound.

    ``slack`` is ``computed - bound`` for lower bounds and ``bound - computed``
    for upper bounds, so a non-negative slack always means the bound holds.
    Samples past the end of a stopped flow are NaN and are ignored.
    """

    context: str
    radii: np.ndarray
    computed_curve: np.ndarray
    bound_curve: np.ndarray
    direction: str
    tolerance: float
    worst_slack: float
    verdict: str
    details: Dict = field(default_factory=dict)

    @property
    def slack(self) -> np.ndarray:
        return signed_slack(self.computed_curve, self.bound_curve, self.direction)


def signed_slack(computed, bound, direction: str) -> np.ndarray:
    computed = np.asarray(computed, dtype=float)
    bound = np.asarray(bound, dtype=float)
    if direction == BoundDirection.UPPER:
        return bound - computed
    return computed - bound


def classify(slack, tolerance: float) -> str:
    """Equality iff every |slack| <= tol; holds iff the worst slack >= -tol."""
    slack = np.asarray(slack, dtype=float)
    sampled = slack[~np.isnan(slack)]
    if sampled.size == 0:
        return Verdict.FAILS
    if np.all(np.abs(sampled) <= tolerance):
        return Verdict.EQUALITY
    return Verdict.HOLDS if np.min(sampled) >= -tolerance else Verdict.FAILS


def build_report(
    context: str,
    radii,
    computed,
    bound,
    direction: str = BoundDirection.LOWER,
    tolerance: float = 1e-6,
    applicable: bool = True,
    details: Optional[Dict] = None,
) -> ComparisonReport:
    """Assemble a report and its verdict from sampled curves."""
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    computed = np.atleast_1d(np.asarray(computed, dtype=float))
    bound = np.atleast_1d(np.asarray(bound, dtype=float))
    slack = signed_slack(computed, bound, direction)
    sampled = slack[~np.isnan(slack)]
    return ComparisonReport(
        context=context,
        radii=radii,
        computed_curve=computed,
        bound_curve=bound,
        direction=direction,
        tolerance=tolerance,
        worst_slack=float(np.min(sampled)) if sampled.size else float("nan"),
        verdict=classify(slack, tolerance) if applicable else Verdict.INAPPLICABLE,
        details=details or {},
    )
