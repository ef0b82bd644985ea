"""Riccati flows along normal geodesics and their comparison bounds.

Along a unit-speed normal geodesic leaving a convex boundary, the extremal
Riccati equation for ``f = <E', E>/|E|^2`` is

    f' = -sec(r) - f^2

and the mean curvature of the parallel hypersurfaces obeys

    n H' = -Ric(r) - |sigma_r|^2,    |sigma_r|^2 = u(r) n H^2,  u >= 1,

with ``u = 1`` the umbilic case. On flat, umbilic data both reduce to the
equality curve ``x0 / (1 + x0 r)``.
"""

import logging
from typing import Callable, Optional, Union

import numpy as np

from capacity_lab.choices import BoundDirection, CurvatureKind, FlowStop
from comparison.exceptions import ComparisonError, DomainMismatchError, ProfileKindError
from comparison.services.integrator import FlowResult, blow_up_stop, integrate, threshold_stop
from comparison.services.profiles import CERTIFICATE_SAMPLES, CurvatureProfile
from comparison.services.reports import ComparisonReport, build_report

logger = logging.getLogger(__name__)

DEFAULT_STEP = 0.01
FLOW_TOLERANCE = 1e-6

Umbilicity = Union[float, Callable[[np.ndarray], np.ndarray]]


def riccati_lower_bound(f0: float, r):
    """``f0 / (1 + f0 r)``, the flat solution of the Riccati equation."""
    if f0 <= 0:
        raise ComparisonError(f"f0 must be positive, got {f0}.")
    radii = np.asarray(r, dtype=float)
    if np.any(radii < 0):
        raise ComparisonError("r must be non-negative.")
    return f0 / (1.0 + f0 * radii)


def mean_curvature_upper_bound(h0: float, r):
    """``H0 / (1 + H0 r)``, the mean curvature of parallel spheres in flat space."""
    if h0 <= 0:
        raise ComparisonError(f"H0 must be positive, got {h0}.")
    radii = np.asarray(r, dtype=float)
    if np.any(radii < 0):
        raise ComparisonError("r must be non-negative.")
    return h0 / (1.0 + h0 * radii)


def _flow_range(profile: CurvatureProfile, kind: str, r_max: Optional[float]) -> float:
    if profile.kind != kind:
        raise ProfileKindError(f"Expected a {kind} profile, got {profile.kind}.")
    r_max = profile.r_max if r_max is None else float(r_max)
    if r_max > profile.r_max:
        raise DomainMismatchError(f"r_max = {r_max:g} exceeds the profile domain {profile.r_max:g}.")
    return r_max


def riccati_flow(
    profile: CurvatureProfile,
    f0: float,
    r_max: Optional[float] = None,
    step: float = DEFAULT_STEP,
) -> FlowResult:
    """Integrate ``f' = -sec - f^2`` from ``f(0) = f0``.

    The flow stops at blow-down (``f < 1e-9``) or blow-up (``|f| > 1e9``),
    recorded in ``stop_reason``; on positively curved profiles that is an
    outcome, not an error.
    """
    r_max = _flow_range(profile, CurvatureKind.SECTIONAL, r_max)
    if f0 <= 0:
        raise ComparisonError(f"f0 must be positive, got {f0}.")
    sec = profile.evaluator

    def rhs(r, y):
        return np.array([-float(sec(r)) - y[0] * y[0]])

    result = integrate(rhs, [f0], r_max, step, stop=threshold_stop)
    if result.stop_reason != FlowStop.COMPLETED:
        logger.info("Riccati flow from f0 = %g stopped at r = %g: %s", f0, result.stop_radius, result.stop_reason)
    return result


def _umbilicity_evaluator(umbilicity: Umbilicity, r_max: float) -> Callable[[float], float]:
    if callable(umbilicity):
        evaluator = umbilicity
    else:
        factor = float(umbilicity)
        evaluator = lambda r: np.full(np.shape(r), factor)  # noqa: E731
    samples = np.asarray(evaluator(np.linspace(0.0, r_max, CERTIFICATE_SAMPLES)), dtype=float)
    if np.any(samples < 1.0):
        raise ComparisonError("The umbilicity factor must be at least 1 on the flow range.")
    return lambda r: float(evaluator(r))


def mean_curvature_flow(
    profile: CurvatureProfile,
    h0: float,
    umbilicity: Umbilicity = 1.0,
    r_max: Optional[float] = None,
    step: float = DEFAULT_STEP,
    n: int = 2,
) -> FlowResult:
    """Integrate ``H' = -Ric/n - u H^2`` from ``H(0) = H0``.

    Crossing into negative mean curvature is logged and listed in
    ``crossings``; the flow continues until it blows up.
    """
    r_max = _flow_range(profile, CurvatureKind.RICCI, r_max)
    if h0 <= 0:
        raise ComparisonError(f"H0 must be positive, got {h0}.")
    if n < 1:
        raise ComparisonError(f"Fiber dimension must be positive, got {n}.")
    ricci = profile.evaluator
    factor = _umbilicity_evaluator(umbilicity, r_max)

    def rhs(r, y):
        return np.array([-float(ricci(r)) / n - factor(r) * y[0] * y[0]])

    result = integrate(rhs, [h0], r_max, step, stop=blow_up_stop)
    if result.crossings:
        logger.warning("Mean curvature turns negative at r = %g", result.crossings[0])
    return result


def jacobi_norm(
    profile: CurvatureProfile,
    f0: float,
    r_max: Optional[float] = None,
    step: float = DEFAULT_STEP,
) -> FlowResult:
    """Integrate the Riccati flow together with ``|E|' = f |E|``, ``|E(0)| = 1``.

    Column 1 of ``values`` is ``|E(r)|``; on a flat profile it is ``1 + f0 r``.
    """
    r_max = _flow_range(profile, CurvatureKind.SECTIONAL, r_max)
    if f0 <= 0:
        raise ComparisonError(f"f0 must be positive, got {f0}.")
    sec = profile.evaluator

    def rhs(r, y):
        return np.array([-float(sec(r)) - y[0] * y[0], y[0] * y[1]])

    return integrate(rhs, [f0, 1.0], r_max, step, stop=threshold_stop)


def riccati_report(flow: FlowResult, profile: CurvatureProfile, f0: float, context: str = "riccati") -> ComparisonReport:
    """Lower-bound report of a Riccati flow, gated by the nonpositive certificate."""
    bound = riccati_lower_bound(f0, flow.r)
    if not profile.is_nonpositive:
        logger.warning("%s: sectional profile is not certified nonpositive; verdict inapplicable", context)
    return build_report(
        context=context,
        radii=flow.r,
        computed=flow.curve,
        bound=bound,
        direction=BoundDirection.LOWER,
        tolerance=FLOW_TOLERANCE,
        applicable=profile.is_nonpositive,
        details={"f0": f0, "stop_reason": str(flow.stop_reason), "stop_radius": flow.stop_radius},
    )


def mean_curvature_report(
    flow: FlowResult, profile: CurvatureProfile, h0: float, context: str = "mean-curvature"
) -> ComparisonReport:
    """Upper-bound report of a mean curvature flow, gated by the nonnegative certificate."""
    bound = mean_curvature_upper_bound(h0, flow.r)
    if not profile.is_nonnegative:
        logger.warning("%s: ricci profile is not certified nonnegative; verdict inapplicable", context)
    return build_report(
        context=context,
        radii=flow.r,
        computed=flow.curve,
        bound=bound,
        direction=BoundDirection.UPPER,
        tolerance=FLOW_TOLERANCE,
        applicable=profile.is_nonnegative,
        details={
            "h0": h0,
            "stop_reason": str(flow.stop_reason),
            "stop_radius": flow.stop_radius,
            "crossings": list(flow.crossings),
        },
    )
