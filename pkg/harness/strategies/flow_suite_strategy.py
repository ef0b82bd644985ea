"""Randomized comparison-flow suites run as a single scenario."""

import logging

import numpy as np

from capacity_lab.choices import CapacityMethod, CurvatureKind, Provenance, Verdict
from comparison.services.flows import (
    FLOW_TOLERANCE,
    mean_curvature_flow,
    mean_curvature_upper_bound,
    riccati_flow,
    riccati_lower_bound,
)
from comparison.services.profiles import flat_profile
from comparison.services.suites import (
    SUITE_R_MAX,
    SUITE_SIZE,
    SUITE_STEP,
    cartan_hadamard_suite,
    ricci_suite,
    rigidity_scaling,
    sum_form_check,
)
from harness.services.verdicts import classify_slack
from harness.strategies.base_strategy import BaseCheckStrategy, CheckResult, jsonable

logger = logging.getLogger(__name__)

# Flat, umbilic inputs must reproduce the bound curves this closely.
FLAT_TOLERANCE = 1e-8


class FlowSuiteStrategy(BaseCheckStrategy):
    """
    Riccati flows on random ``sec <= 0`` profiles, mean curvature flows on
    random ``Ric >= 0`` profiles and the averaged (sum form) flows.

    The report carries no capacity: the bound is zero and the slack is the
    worst slack over every flow and radius. Flat reproduction and the
    rigidity scaling are attached as diagnostics.
    """

    def check(self) -> CheckResult:
        suite = self.document.get("suite", {})
        count = suite.get("count", SUITE_SIZE)
        seed = suite.get("seed")
        r_max = suite.get("r_max", SUITE_R_MAX)
        step = suite.get("step", SUITE_STEP)
        n = suite.get("n", 2)

        reports = (
            cartan_hadamard_suite(count, seed, r_max, step),
            ricci_suite(count, seed, r_max, step, n),
            sum_form_check(seed=seed, r_max=r_max, step=step),
        )
        for report in reports:
            self.details[report.context] = {
                "worst_slack": report.worst_slack,
                "verdict": report.verdict,
                **{key: report.details[key] for key in ("seed", "count", "failures", "stopped") if key in report.details},
            }
        slacks = [report.worst_slack for report in reports]
        slack = None if any(np.isnan(slacks)) else float(min(slacks))

        flat = self.flat_deviation(r_max, step)
        self.details["flat_deviation"] = flat
        if max(flat.values()) > FLAT_TOLERANCE:
            logger.warning("%s: flat flows deviate from the bound curves by %.3e", self.scenario.id, max(flat.values()))

        rigidity = rigidity_scaling(step=step)
        self.details["rigidity"] = {
            "epsilons": rigidity.epsilons,
            "sectional_deviation": rigidity.sectional_deviation,
            "ricci_deviation": rigidity.ricci_deviation,
            "sectional_scaling": rigidity.sectional_scaling,
            "ricci_scaling": rigidity.ricci_scaling,
        }

        verdict = classify_slack(slack, FLOW_TOLERANCE, self.scenario.kind)
        if verdict == Verdict.FAILS:
            logger.warning("%s: comparison flows violate their bounds (worst slack %s)", self.scenario.id, slack)
        return CheckResult(
            capacity=None,
            method=CapacityMethod.NONE,
            error_indicator=0.0,
            bound=0.0,
            slack=slack,
            tolerance=FLOW_TOLERANCE,
            verdict=verdict,
            h=None,
            provenance={"slack": Provenance.QUADRATURE},
            details=jsonable(self.details),
        )

    @staticmethod
    def flat_deviation(r_max: float, step: float) -> dict:
        """Sup-norm distance of the flat flows from ``1/(1 + r)``."""
        riccati = riccati_flow(flat_profile(CurvatureKind.SECTIONAL, r_max), 1.0, step=step)
        mean = mean_curvature_flow(flat_profile(CurvatureKind.RICCI, r_max), 1.0, 1.0, step=step)
        return {
            "riccati": float(np.max(np.abs(riccati.curve - riccati_lower_bound(1.0, riccati.r)))),
            "mean_curvature": float(np.max(np.abs(mean.curve - mean_curvature_upper_bound(1.0, mean.r)))),
        }
