"""Capacities of balls in Euclidean space and of geodesic balls in warped models.

A radial harmonic function on a warped model satisfies ``(g^n u')' = 0``, so
the equilibrium potential between ``t0`` and ``t1`` is

    u(t) = int_t^t1 g^-n ds / I,    I = int_t0^t1 g^-n ds

and the capacity is ``fiber_volume / I``: ``omega_n`` for closed models and
the boundary area for exterior ones. A divergent ``I`` means capacity zero.
"""

import logging
import math
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from capacity_lab.choices import BoundDirection, ModelKind
from comparison.services.reports import ComparisonReport, build_report
from geometry.services.measures import unit_sphere_area
from manifolds.exceptions import ManifoldError
from manifolds.services.diagnostics import has_nonnegative_ricci, is_cartan_hadamard, sphere_mean_curvature
from manifolds.services.warped import WarpedModel
from radial.exceptions import InvalidDimensionError, RadialCapacityError
from radial.services.potentials import RadialPotential, radial_laplacian
from radial.services.quadrature import QuadratureResult, adaptive_simpson, tail_integral

logger = logging.getLogger(__name__)

EQUALITY_TOLERANCE = 1e-8
HEAD_LENGTH = 1.0

Radii = Union[float, Iterable[float]]


def ball_capacity_euclidean(n: int, h0: float) -> float:
    """Capacity ``(n - 1) H0 omega_n H0^-n`` of the ball of radius ``1/H0`` in R^(n+1)."""
    if n < 2:
        raise InvalidDimensionError(f"Euclidean balls have positive capacity only for n >= 2, got n = {n}.")
    if h0 <= 0:
        raise RadialCapacityError(f"H0 must be positive, got {h0}.")
    return (n - 1) * h0 * unit_sphere_area(n) * h0 ** (-n)


def isoperimetric_constant(n: int) -> float:
    """``omega_n / (omega_n/(n + 1))^(n/(n + 1))``: area over volume^(n/(n+1)) of unit balls in R^(n+1)."""
    omega = unit_sphere_area(n)
    return omega / (omega / (n + 1)) ** (n / (n + 1))


def fiber_volume(model: WarpedModel) -> float:
    if model.kind == ModelKind.EXTERIOR:
        return float(model.boundary_area)
    return unit_sphere_area(model.n)


def _check_radii(model: WarpedModel, t0: float, t1: float):
    try:
        model.check_domain(t0, allow_pole=model.kind == ModelKind.EXTERIOR)
    except ManifoldError as e:
        raise RadialCapacityError(f"Inner radius {t0:g} is not interior: {str(e)}")
    if not t1 > t0:
        raise RadialCapacityError(f"Outer radius must exceed the inner radius, got t0 = {t0:g}, t1 = {t1:g}.")


def _inverse_power(model: WarpedModel):
    def integrand(s: float) -> float:
        with np.errstate(over="ignore"):
            return float(np.power(model.g(s), -float(model.n)))
    return integrand


def _combine(*parts: QuadratureResult) -> QuadratureResult:
    if any(part.divergent for part in parts):
        return QuadratureResult(math.inf, math.inf, sum(p.evaluations for p in parts), divergent=True)
    return QuadratureResult(
        value=sum(p.value for p in parts),
        error=sum(p.error for p in parts),
        evaluations=sum(p.evaluations for p in parts),
        converged=all(p.converged for p in parts),
    )


def _improper(func, t0: float) -> QuadratureResult:
    """``int_t0^inf func``; a head interval is integrated first when ``t0 = 0``."""
    if t0 > 0:
        return tail_integral(func, t0)
    return _combine(adaptive_simpson(func, 0.0, HEAD_LENGTH), tail_integral(func, HEAD_LENGTH))


def _affine_tail(model: WarpedModel, start: float) -> QuadratureResult:
    """``int_start^inf (a + b s)^-n ds = a^(1-n) / (b (n - 1))`` for ``g = a + b (s - start)``."""
    a = float(model.g(start))
    b = float(model.dg(start))
    if b <= 0 or model.n == 1:
        return QuadratureResult(math.inf, math.inf, 0, divergent=True)
    return QuadratureResult(a ** (1 - model.n) / (b * (model.n - 1)), 0.0, 0)


def inverse_warping_integral(model: WarpedModel, t0: float, t1: float = math.inf) -> QuadratureResult:
    """``int_t0^t1 g(s)^-n ds``, flagged divergent when the improper integral diverges.

    Raises:
        RadialCapacityError: If ``t0`` is not interior or ``t1 <= t0``.
        InconclusiveTailError: If the tail test cannot decide.
    """
    _check_radii(model, t0, t1)
    func = _inverse_power(model)

    if math.isfinite(model.t_max) and t1 >= model.t_max:
        # g vanishes at the far pole of a compact model.
        logger.debug("Integral reaches t_max = %g of %s; divergent", model.t_max, model.profile.name)
        return QuadratureResult(math.inf, math.inf, 0, divergent=True)
    if math.isfinite(t1):
        return adaptive_simpson(func, t0, t1)

    if model.affine_from is not None:
        knot = max(t0, model.affine_from)
        head = adaptive_simpson(func, t0, knot)
        return _combine(head, _affine_tail(model, knot))
    return _improper(func, t0)


def warped_ball_capacity(model: WarpedModel, t0: float, t1: float = math.inf) -> float:
    """Capacity of ``B(t0)`` relative to ``B(t1)`` (whole model for ``t1 = inf``); 0 if parabolic."""
    integral = inverse_warping_integral(model, t0, t1)
    if integral.divergent:
        logger.debug("Inverse warping integral diverges for %s from t0 = %g", model.profile.name, t0)
        return 0.0
    return fiber_volume(model) / integral.value


def warped_ball_potential(model: WarpedModel, t0: float, t1: float = math.inf) -> RadialPotential:
    """Equilibrium potential of ``B(t0)`` in ``B(t1)`` as a function of ``r = t - t0``.

    Raises:
        RadialCapacityError: If the inverse warping integral diverges (no potential decays to 0).
    """
    integral = inverse_warping_integral(model, t0, t1)
    if integral.divergent:
        raise RadialCapacityError(f"Model {model.profile.name} is parabolic from t0 = {t0:g}; no equilibrium potential.")
    total = integral.value
    func = _inverse_power(model)
    n = model.n

    def value(r):
        offsets = np.asarray(r, dtype=float)
        flat = [1.0 - adaptive_simpson(func, t0, t0 + x).value / total for x in np.atleast_1d(offsets).ravel()]
        return np.clip(np.asarray(flat).reshape(offsets.shape), 0.0, 1.0)

    def derivative(r):
        with np.errstate(over="ignore"):
            return -np.power(model.g(t0 + np.asarray(r, dtype=float)), -float(n)) / total

    def second_derivative(r):
        t = t0 + np.asarray(r, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            return n * np.power(model.g(t), -float(n + 1)) * model.dg(t) / total

    return RadialPotential(
        value=value,
        derivative=derivative,
        second_derivative=second_derivative,
        inner_radius=t0,
        outer_radius=t1,
        n=n,
    )


def warped_laplacian(model: WarpedModel, potential: RadialPotential, r) -> np.ndarray:
    """Laplacian ``u'' + n (g'/g) u'`` of a radial potential on the model."""
    offsets = potential.check_offset(r)
    return radial_laplacian(potential, sphere_mean_curvature(model, potential.inner_radius + offsets), offsets)


def radial_energy(model: WarpedModel, t0: float, t1: float = math.inf) -> float:
    """Dirichlet energy ``fiber * int g^n u'^2`` of the equilibrium potential.

    Integrated numerically without the affine-tail shortcut, so it checks
    the flux value returned by ``warped_ball_capacity``.
    """
    potential = warped_ball_potential(model, t0, t1)
    n = model.n

    def density(s: float) -> float:
        with np.errstate(over="ignore", invalid="ignore"):
            value = float(np.power(model.g(s), n) * potential.derivative(s - t0) ** 2)
        # g^n overflows where u' underflows.
        return value if math.isfinite(value) else 0.0

    if math.isfinite(t1):
        integral = adaptive_simpson(density, t0, t1)
    else:
        integral = _improper(density, t0)
    return fiber_volume(model) * integral.value


def hyperbolicity_indicator(model: WarpedModel) -> bool:
    """True when geodesic balls have positive capacity, i.e. ``int^inf g^-n`` converges.

    Raises:
        RadialCapacityError: For exterior models.
        InconclusiveTailError: If the tail test cannot decide.
    """
    if model.kind != ModelKind.CLOSED:
        raise RadialCapacityError("The hyperbolicity indicator is defined for closed models.")
    t0 = 1.0 if model.t_max > 2.0 else 0.5 * model.t_max
    return not inverse_warping_integral(model, t0, math.inf).divergent


def _sphere_area(model: WarpedModel, t0) -> np.ndarray:
    return fiber_volume(model) * model.g(t0) ** model.n


def _bound_details(model: WarpedModel, radii: np.ndarray, h0: np.ndarray, capacities: np.ndarray) -> dict:
    areas = _sphere_area(model, radii)
    return {
        "model": model.descriptor,
        "h0": h0.tolist(),
        "area": areas.tolist(),
        "capacity_area_ratio": (capacities / areas).tolist(),
        "ball_ratio": ((model.n - 1) * h0).tolist(),
    }


def equality_check_remark(model: WarpedModel, t0: float, h0: Optional[float] = None) -> ComparisonReport:
    """Compare ``cap(B(t0))`` with ``(n - 1) H0 area(dB(t0))``.

    ``H0`` defaults to the sphere mean curvature ``g'(t0)/g(t0)``. Equality
    holds up to 1e-8 (relative) for the spliced convex model; other
    Cartan-Hadamard models give a positive slack.
    """
    if h0 is None:
        h0 = float(sphere_mean_curvature(model, t0))
    capacity = warped_ball_capacity(model, t0)
    bound = (model.n - 1) * h0 * float(_sphere_area(model, t0))
    radii = np.array([t0])
    return build_report(
        context="radial-equality",
        radii=radii,
        computed=[capacity],
        bound=[bound],
        direction=BoundDirection.LOWER,
        tolerance=EQUALITY_TOLERANCE * max(1.0, abs(bound)),
        details=_bound_details(model, radii, np.array([h0]), np.array([capacity])),
    )


def radial_comparison(model: WarpedModel, t0: Radii) -> Tuple[ComparisonReport, ComparisonReport]:
    """Both capacity bounds for geodesic balls of radii ``t0``.

    The lower bound applies on Cartan-Hadamard models and the upper bound on
    models with non-negative Ricci curvature; a report whose certificate
    fails carries the inapplicable verdict.
    """
    radii = np.atleast_1d(np.asarray(t0, dtype=float))
    h0 = np.asarray(sphere_mean_curvature(model, radii), dtype=float)
    capacities = np.array([warped_ball_capacity(model, float(t)) for t in radii])
    bounds = (model.n - 1) * h0 * _sphere_area(model, radii)
    tolerance = EQUALITY_TOLERANCE * max(1.0, float(np.max(np.abs(bounds))))
    details = _bound_details(model, radii, h0, capacities)

    reports = []
    for direction, certificate, context in (
        (BoundDirection.LOWER, is_cartan_hadamard, "radial-cartan-hadamard"),
        (BoundDirection.UPPER, has_nonnegative_ricci, "radial-nonnegative-ricci"),
    ):
        applicable = certificate(model)
        if not applicable:
            logger.warning("%s: %s certificate fails; verdict inapplicable", context, model.profile.name)
        reports.append(build_report(
            context=context,
            radii=radii,
            computed=capacities,
            bound=bounds,
            direction=direction,
            tolerance=tolerance,
            applicable=applicable,
            details=details,
        ))
    return reports[0], reports[1]
