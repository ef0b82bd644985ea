"""Curvature diagnostics of warped models.

For ``dt^2 + g(t)^2 h0`` with ``h0`` the round metric:

    sec(radial plane)     = -g''/g
    sec(tangential plane) = (1 - g'^2)/g^2

and the Ricci eigenvalues are ``n (-g''/g)`` in the radial direction and
``-g''/g + (n - 1)(1 - g'^2)/g^2`` tangentially.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from capacity_lab.choices import ModelKind
from manifolds.exceptions import ManifoldError, PoleEvaluationError
from manifolds.services.warped import WarpedModel

logger = logging.getLogger(__name__)

SAMPLES_PER_DECADE = 512
SIGN_TOLERANCE = 1e-9
POLE_PROBE = 1e-3
FIRST_DERIVATIVE_STEP = 1e-5
SECOND_DERIVATIVE_STEP = 1e-3


@dataclass(frozen=True)
class RadialCurvatures:
    """Sectional curvatures of radial and tangential planes at given t."""

    sec_radial: np.ndarray
    sec_tangent: np.ndarray


@dataclass(frozen=True)
class DerivativeDefect:
    """Largest relative mismatch between the derivative evaluators and finite differences."""

    first: float
    second: float


def _raw_curvatures(model: WarpedModel, t: np.ndarray):
    g = model.g(t)
    return -model.ddg(t) / g, (1.0 - model.dg(t) ** 2) / (g * g)


def _pole_limit(model: WarpedModel) -> RadialCurvatures:
    # Both curvatures are even in t near the pole: extrapolate c0 + c2 t^2 to t = 0.
    probes = np.array([POLE_PROBE, 0.5 * POLE_PROBE])
    radial, tangent = _raw_curvatures(model, probes)
    return RadialCurvatures(
        sec_radial=(4.0 * radial[1] - radial[0]) / 3.0,
        sec_tangent=(4.0 * tangent[1] - tangent[0]) / 3.0,
    )


def radial_curvatures(model: WarpedModel, t) -> RadialCurvatures:
    """Radial and tangential sectional curvatures at ``t``.

    At the pole of a closed model the quotients are 0/0; the limit value is
    used instead and a warning is logged.

    Raises:
        ManifoldError: If ``t`` lies outside the model domain.
    """
    values = model.check_domain(t)
    scalar = values.ndim == 0
    values = np.atleast_1d(values)
    at_pole = (values == 0) & (model.kind == ModelKind.CLOSED)

    safe = np.where(at_pole, POLE_PROBE, values)
    radial, tangent = _raw_curvatures(model, safe)
    if np.any(at_pole):
        logger.warning("Curvature requested at the pole of %s; using the limit value", model.profile.name)
        limit = _pole_limit(model)
        radial = np.where(at_pole, limit.sec_radial, radial)
        tangent = np.where(at_pole, limit.sec_tangent, tangent)

    if scalar:
        return RadialCurvatures(sec_radial=float(radial[0]), sec_tangent=float(tangent[0]))
    return RadialCurvatures(sec_radial=radial, sec_tangent=tangent)


def _require_closed(model: WarpedModel, operation: str):
    if model.kind != ModelKind.CLOSED:
        raise ManifoldError(f"{operation} is defined for closed models only.")


def _sampled_curvatures(model: WarpedModel, sample_count: Optional[int]) -> RadialCurvatures:
    points = model.sample_points(per_decade=SAMPLES_PER_DECADE, count=sample_count)
    radial, tangent = _raw_curvatures(model, points)
    pole = _pole_limit(model)
    return RadialCurvatures(
        sec_radial=np.append(radial, pole.sec_radial),
        sec_tangent=np.append(tangent, pole.sec_tangent),
    )


def is_cartan_hadamard(model: WarpedModel, sample_count: Optional[int] = None) -> bool:
    """True iff every sampled sectional curvature is <= 1e-9.

    Samples are log-spaced with 512 points per decade unless ``sample_count``
    is given; the pole limit is always included.
    """
    _require_closed(model, "Cartan-Hadamard certification")
    curvatures = _sampled_curvatures(model, sample_count)
    worst = max(float(np.max(curvatures.sec_radial)), float(np.max(curvatures.sec_tangent)))
    result = worst <= SIGN_TOLERANCE
    logger.debug("Cartan-Hadamard check for %s: max sec %.3e -> %s", model.profile.name, worst, result)
    return result


def ricci_radial_lower(model: WarpedModel, sample_count: Optional[int] = None) -> float:
    """Smallest sampled Ricci eigenvalue of the model."""
    _require_closed(model, "Ricci lower bound")
    curvatures = _sampled_curvatures(model, sample_count)
    radial_direction = model.n * curvatures.sec_radial
    tangent_direction = curvatures.sec_radial + (model.n - 1) * curvatures.sec_tangent
    value = float(min(np.min(radial_direction), np.min(tangent_direction)))
    # Flat directions come out as -0.0 or round-off; report them as zero.
    return 0.0 if abs(value) <= SIGN_TOLERANCE else value


def has_nonnegative_ricci(model: WarpedModel, sample_count: Optional[int] = None) -> bool:
    return ricci_radial_lower(model, sample_count) >= -SIGN_TOLERANCE


def sphere_mean_curvature(model: WarpedModel, t):
    """Principal curvature ``g'(t)/g(t)`` of the geodesic sphere at distance ``t``.

    Raises:
        PoleEvaluationError: At ``t = 0`` of a closed model.
        ManifoldError: If ``t`` lies outside the model domain.
    """
    values = model.check_domain(t)
    if model.kind == ModelKind.CLOSED and np.any(values == 0):
        raise PoleEvaluationError("Geodesic spheres degenerate at the pole; mean curvature is unbounded.")
    result = model.dg(values) / model.g(values)
    return float(result) if np.ndim(result) == 0 else result


def derivative_defect(model: WarpedModel, t) -> DerivativeDefect:
    """Compare g' and g'' with centred finite differences of g.

    g' uses step ``1e-5 t`` and g'' step ``1e-3 t``. The
    mismatches are normalized by ``max(|g'|, g/t)`` and ``max(|g''|, g/t^2)``
    so flat profiles compare against the natural scale.
    """
    points = np.atleast_1d(model.check_domain(t, allow_pole=False))
    h1 = FIRST_DERIVATIVE_STEP * points
    h2 = SECOND_DERIVATIVE_STEP * points
    fd_first = (model.g(points + h1) - model.g(points - h1)) / (2.0 * h1)
    fd_second = (model.g(points + h2) - 2.0 * model.g(points) + model.g(points - h2)) / (h2 * h2)

    exact_first = model.dg(points)
    exact_second = model.ddg(points)
    scale_first = np.maximum(np.abs(exact_first), np.abs(model.g(points)) / points)
    scale_second = np.maximum(np.abs(exact_second), np.abs(model.g(points)) / points ** 2)
    return DerivativeDefect(
        first=float(np.max(np.abs(fd_first - exact_first) / scale_first)),
        second=float(np.max(np.abs(fd_second - exact_second) / scale_second)),
    )
