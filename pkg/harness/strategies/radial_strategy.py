"""Equality check for geodesic balls of warped models."""

import logging

from capacity_lab.choices import ModelKind, Provenance
from harness.exceptions import HypothesisViolationError
from harness.strategies.base_strategy import BaseCheckStrategy, CheckResult
from manifolds.services.diagnostics import is_cartan_hadamard, sphere_mean_curvature
from radial.services.capacity import equality_check_remark

logger = logging.getLogger(__name__)


class RadialEqualityStrategy(BaseCheckStrategy):
    """
    Compare ``cap(B(t0))`` with ``(n - 1) H0 area(dB(t0))`` on a closed
    Cartan-Hadamard model.

    The spliced convex model attains equality; any other Cartan-Hadamard
    model gives a positive slack.
    """

    def check(self) -> CheckResult:
        model = self.model
        t0 = self.document["t0"]
        if model.kind != ModelKind.CLOSED:
            raise HypothesisViolationError("Geodesic balls need a closed model.")
        if not is_cartan_hadamard(model):
            raise HypothesisViolationError(f"{model.profile.name} model fails the Cartan-Hadamard certificate")
        self.details["certificate"] = "Cartan-Hadamard"

        h0 = self.user_or_derived(
            "h0", sphere_mean_curvature(model, t0), f"geodesic sphere curvature g'/g at t0 = {t0:g}"
        )
        report = equality_check_remark(model, t0, h0)
        self.provenance["bound"] = Provenance.QUADRATURE
        self.details.update({
            "h0": h0,
            "area": report.details["area"][0],
            "capacity_area_ratio": report.details["capacity_area_ratio"][0],
            "ball_ratio": report.details["ball_ratio"][0],
            "model": report.details["model"],
        })
        figure = self.capacity_figure()
        return self.result(figure, float(report.bound_curve[0]))
