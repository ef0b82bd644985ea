"""Capacity figures for scenarios: closed form, quadrature or grid, with provenance."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from django.conf import settings

from capacity_lab.choices import CapacityMethod, Provenance
from geometry.services.bodies import Ball, ConvexBody
from harness.exceptions import HarnessError
from manifolds.services.warped import WarpedModel
from radial.services.capacity import ball_capacity_euclidean, fiber_volume, inverse_warping_integral
from solver.services.capacity import CapacityEstimate, exhaustion_capacity, level_set_sphericity
from solver.services.dirichlet import solve_annulus

logger = logging.getLogger(__name__)

SPHERICITY_LEVEL = 0.5


@dataclass(frozen=True)
class CapacityFigure:
    """A capacity value with its method, provenance tag and relative error indicator."""

    value: float
    method: str
    provenance: str
    error_indicator: float = 0.0
    h: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)


def _grid_details(estimate: CapacityEstimate) -> Dict[str, Any]:
    return {
        "energy": estimate.energy,
        "flux": estimate.flux,
        "offset": estimate.offset,
        "converged": estimate.converged,
        "last_iterate": estimate.last_iterate,
        "trace": [
            {"outer_radius": entry.outer_radius, "h": entry.h, "value": entry.value}
            for entry in estimate.trace
        ],
    }


def _exhaustion(body: ConvexBody, spec: Dict[str, Any], scale: float = 1.0) -> CapacityEstimate:
    schedule = spec.get("h_schedule")
    if schedule is None and spec.get("h") is not None:
        schedule = spec["h"]
    if schedule is None and scale != 1.0:
        schedule = settings.CAP_DEFAULT_H * body.bounding_radius
    if schedule is not None:
        schedule = [scale * h for h in schedule] if isinstance(schedule, list) else scale * schedule
    return exhaustion_capacity(
        body,
        growth=spec.get("growth"),
        h_schedule=schedule,
        start_radius=spec.get("outer"),
        max_steps=spec.get("max_steps"),
        method=spec.get("estimator", CapacityMethod.ENERGY),
        mode=spec.get("mode", "auto"),
        **({"tolerance": spec["tol"]} if spec.get("tol") is not None else {}),
    )


def grid_body_capacity(body: ConvexBody, spec: Dict[str, Any]) -> CapacityFigure:
    """Whole-space capacity from the exhaustion sequence, optionally Richardson-extrapolated in ``h``.

    With ``richardson`` the exhaustion runs again at half spacing and the
    value is ``2 c(h/2) - c(h)``.
    """
    estimate = _exhaustion(body, spec)
    details = _grid_details(estimate)
    value = estimate.value
    indicator = estimate.error_indicator
    h = estimate.h
    if spec.get("richardson"):
        fine = _exhaustion(body, spec, scale=0.5)
        value = 2.0 * fine.value - estimate.value
        if not value > 0:
            raise HarnessError(f"Extrapolated capacity is not positive ({value:g}); refine the grid.")
        indicator = max(fine.error_indicator, abs(value - fine.value) / value)
        h = fine.h
        details = {"coarse": details, "fine": _grid_details(fine), "converged": estimate.converged and fine.converged}
    if not details["converged"]:
        logger.warning("Exhaustion for %s did not converge; using the last fit", body.kind)

    if spec.get("sphericity"):
        first = estimate.trace[0]
        potential = solve_annulus(body, first.outer_radius, first.h, spec.get("mode", "auto"))
        details["sphericity"] = level_set_sphericity(potential, SPHERICITY_LEVEL)

    return CapacityFigure(
        value=value,
        method=spec.get("estimator", CapacityMethod.ENERGY),
        provenance=Provenance.GRID,
        error_indicator=indicator,
        h=h,
        details=details,
    )


def body_capacity(body: ConvexBody, spec: Optional[Dict[str, Any]] = None) -> CapacityFigure:
    """Capacity of a body in R^(n+1).

    ``auto`` picks the closed form ``(n - 1) omega_n r^(n-1)`` for balls and
    the grid otherwise.

    Raises:
        HarnessError: If a closed form is requested for a body that has none.
    """
    spec = spec or {}
    method = spec.get("method", "auto")
    if method in ("auto", CapacityMethod.CLOSED_FORM) and isinstance(body, Ball):
        # A point has zero capacity.
        value = ball_capacity_euclidean(body.dimension - 1, 1.0 / body.radius) if body.radius > 0 else 0.0
        return CapacityFigure(value=value, method=CapacityMethod.CLOSED_FORM, provenance=Provenance.CLOSED_FORM)
    if method == CapacityMethod.CLOSED_FORM:
        raise HarnessError(f"No closed-form capacity for {body.kind} bodies.")
    return grid_body_capacity(body, spec)


def model_capacity(model: WarpedModel, t0: float) -> CapacityFigure:
    """Capacity of the geodesic ball of radius ``t0``: fiber volume over ``int_t0^inf g^-n``."""
    integral = inverse_warping_integral(model, t0, math.inf)
    if integral.divergent:
        logger.info("Geodesic ball t0=%g of %s has zero capacity", t0, model.profile.name)
        return CapacityFigure(
            value=0.0,
            method=CapacityMethod.QUADRATURE,
            provenance=Provenance.QUADRATURE,
            details={"divergent": True},
        )
    return CapacityFigure(
        value=fiber_volume(model) / integral.value,
        method=CapacityMethod.QUADRATURE,
        provenance=Provenance.QUADRATURE,
        error_indicator=abs(integral.error) / integral.value,
        details={"integral": integral.value, "evaluations": integral.evaluations, "converged": integral.converged},
    )
