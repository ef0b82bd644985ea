"""Capacity bounds through curvature: area and volume forms, smooth and lambda-convex bodies."""

import logging
from dataclasses import asdict

from capacity_lab.choices import BoundDirection, ModelKind, Provenance
from geometry.services.bodies import Ball
from geometry.services.convexity import lambda_convexity_check
from geometry.services.measures import area, curvature_summary, volume
from harness.exceptions import HypothesisViolationError
from harness.services.verdicts import bound_direction
from harness.strategies.base_strategy import BaseCheckStrategy, CheckResult
from manifolds.services.diagnostics import has_nonnegative_ricci, is_cartan_hadamard, sphere_mean_curvature
from radial.services.capacity import fiber_volume

logger = logging.getLogger(__name__)

# Relative slack allowed between a user H0 and the sampled curvature it must bound.
CURVATURE_MATCH = 1e-9


class CurvatureBoundStrategy(BaseCheckStrategy):
    """
    ``cap(K) >= (n - 1) H0 vol(dK)`` when every principal curvature is at
    least ``H0`` on a Cartan-Hadamard space, and ``cap(K) <= (n - 1) H0
    vol(dK)`` when the mean curvature is at most ``H0`` under non-negative
    Ricci curvature.

    Euclidean bodies satisfy both curvature certificates. For geodesic balls
    of a warped model the certificate comes from the model and the sphere
    curvature is ``g'(t0)/g(t0)``.
    """

    ratio_details = True

    @property
    def direction(self) -> str:
        return bound_direction(self.scenario.kind)

    @property
    def lower(self) -> bool:
        return self.direction == BoundDirection.LOWER

    def check(self) -> CheckResult:
        if "model" in self.document:
            n, h0, measure = self._model_inputs()
        else:
            n, h0, measure = self._body_inputs()
        bound = self.bound_value(n, h0, measure)
        self.details["h0"] = h0
        figure = self.capacity_figure()
        if self.ratio_details and self.lower and measure > 0:
            # Ratio form: cap/area against the ball value (n - 1) H0.
            self.details["capacity_area_ratio"] = figure.value / self._area
            self.details["ball_ratio"] = (n - 1) * h0
        return self.result(figure, bound)

    def bound_value(self, n: int, h0: float, measure: float) -> float:
        return (n - 1) * h0 * measure

    def measure(self) -> float:
        """Boundary area; the volume form overrides this."""
        return self._area

    @property
    def _area(self) -> float:
        if "model" in self.document:
            return fiber_volume(self.model) * float(self.model.g(self.document["t0"])) ** self.model.n
        if not hasattr(self, "_area_value"):
            self._area_value = area(self.body, self.resolution)
            self.provenance["area"] = Provenance.CLOSED_FORM if isinstance(self.body, Ball) else Provenance.QUADRATURE
        return self._area_value

    def _body_inputs(self):
        body = self.body
        if body.dimension != 3 and not isinstance(body, Ball):
            raise HypothesisViolationError("Curvature bounds are evaluated in R^3 only.")
        if not body.smooth:
            raise HypothesisViolationError(
                f"{body.kind} boundary has ridges; principal curvatures are undefined (use thm-4.5)"
            )
        summary = curvature_summary(body, self.resolution)
        self.details["curvature"] = asdict(summary)
        self.provenance["curvature"] = Provenance.CLOSED_FORM if isinstance(body, Ball) else Provenance.QUADRATURE

        if self.lower:
            derived = summary.kappa_min - summary.uncertainty
            h0 = self.user_or_derived(
                "h0", derived, f"kappa_min {summary.kappa_min:.12g} - uncertainty {summary.uncertainty:.3g}"
            )
            if h0 <= 0:
                raise HypothesisViolationError(f"Derived H0 = {h0:.6g} is not positive; the body is not strictly convex")
            if h0 > summary.kappa_min + summary.uncertainty + CURVATURE_MATCH * max(1.0, h0):
                raise HypothesisViolationError(
                    f"H0 = {h0:.6g} exceeds the smallest principal curvature {summary.kappa_min:.6g}"
                )
        else:
            derived = summary.mean_max + summary.uncertainty
            h0 = self.user_or_derived(
                "h0", derived, f"H_max {summary.mean_max:.12g} + uncertainty {summary.uncertainty:.3g}"
            )
            if h0 < summary.mean_max - summary.uncertainty - CURVATURE_MATCH * max(1.0, h0):
                raise HypothesisViolationError(
                    f"H0 = {h0:.6g} is below the largest mean curvature {summary.mean_max:.6g}"
                )
        return body.dimension - 1, h0, self.measure()

    def _model_inputs(self):
        model = self.model
        t0 = self.document["t0"]
        if model.kind != ModelKind.CLOSED:
            raise HypothesisViolationError("Curvature certificates are defined for closed models only.")
        certificate, name = (is_cartan_hadamard, "Cartan-Hadamard") if self.lower else (
            has_nonnegative_ricci, "non-negative Ricci"
        )
        self.details["certificate"] = name
        if not certificate(model):
            raise HypothesisViolationError(f"{model.profile.name} model fails the {name} certificate")

        sphere = float(sphere_mean_curvature(model, t0))
        h0 = self.user_or_derived("h0", sphere, f"geodesic sphere curvature g'/g at t0 = {t0:g}")
        # Geodesic spheres are umbilic: kappa_min = H = g'/g.
        mismatch = h0 - sphere if self.lower else sphere - h0
        if mismatch > CURVATURE_MATCH * max(1.0, abs(sphere)):
            raise HypothesisViolationError(f"H0 = {h0:.6g} is incompatible with the sphere curvature {sphere:.6g}")
        self.provenance["area"] = Provenance.CLOSED_FORM
        return model.n, h0, self.measure()


class VolumeBoundStrategy(CurvatureBoundStrategy):
    """``cap(K) >= (n^2 - 1) H0^2 vol(K)`` (lower) and ``<=`` with ``H0 = H_max`` (upper)."""

    ratio_details = False

    def bound_value(self, n: int, h0: float, measure: float) -> float:
        return (n * n - 1) * h0 * h0 * measure

    def measure(self) -> float:
        self.provenance["volume"] = Provenance.CLOSED_FORM if isinstance(self.body, Ball) else Provenance.GRID
        value = volume(self.body)
        self.details["volume"] = value
        return value


class LambdaConvexStrategy(CurvatureBoundStrategy):
    """
    ``cap(K) >= (n - 1) H0 vol(dK)`` for lambda-convex bodies, smooth or not.

    The hypothesis is certified by the supporting-ball test at ``lam``
    (defaults to ``H0``); ``H0`` may not exceed ``lam``.
    """

    def _body_inputs(self):
        body = self.body
        lam = float(self.document.get("lam") or self.document["h0"])
        h0 = float(self.document.get("h0") or lam)
        self.provenance["h0"] = Provenance.USER
        if h0 > lam:
            raise HypothesisViolationError(f"H0 = {h0:.6g} exceeds the certified lambda {lam:.6g}")
        report = lambda_convexity_check(body, lam)
        self.details["lambda_convexity"] = {
            "lam": lam,
            "holds": report.holds,
            "worst_margin": report.worst_margin,
            "tested": report.tested,
        }
        if not report.holds:
            raise HypothesisViolationError(
                f"Lambda-convexity at lam = {lam:.6g} fails (worst margin {report.worst_margin:.3e})"
            )
        return body.dimension - 1, h0, self.measure()
