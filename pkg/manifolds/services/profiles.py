"""Warping profiles g(t) with their first and second derivatives.

Every evaluator is vectorized over numpy arrays. ``affine_from`` marks the
start of an affine tail, which the radial quadrature integrates analytically.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from capacity_lab.choices import ProfileName
from manifolds.exceptions import InfeasibleSpliceError, ManifoldError

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class WarpingProfile:
    """A warping function on ``[t_min, t_max)`` together with g' and g''."""

    name: str
    value: Evaluator
    first: Evaluator
    second: Evaluator
    t_min: float = 0.0
    t_max: float = math.inf
    affine_from: Optional[float] = None
    parameters: Dict = field(default_factory=dict)

    def __call__(self, t):
        return self.value(np.asarray(t, dtype=float))


def euclidean_profile() -> WarpingProfile:
    """g(t) = t."""
    return WarpingProfile(
        name=ProfileName.EUCLIDEAN,
        value=lambda t: np.asarray(t, dtype=float) * 1.0,
        first=lambda t: np.ones_like(t, dtype=float),
        second=lambda t: np.zeros_like(t, dtype=float),
        affine_from=0.0,
    )


def hyperbolic_profile(curvature: float = -1.0) -> WarpingProfile:
    """g(t) = sinh(kt)/k for constant sectional curvature ``-k^2``."""
    if curvature >= 0:
        raise ManifoldError(f"Hyperbolic profiles need negative curvature, got {curvature}.")
    k = math.sqrt(-curvature)
    return WarpingProfile(
        name=ProfileName.HYPERBOLIC,
        value=lambda t: np.sinh(k * t) / k,
        first=lambda t: np.cosh(k * t),
        second=lambda t: k * np.sinh(k * t),
        parameters={"curvature": curvature},
    )


def spherical_profile(curvature: float = 1.0) -> WarpingProfile:
    """g(t) = sin(kt)/k on ``(0, pi/k)`` for constant curvature ``k^2``."""
    if curvature <= 0:
        raise ManifoldError(f"Spherical profiles need positive curvature, got {curvature}.")
    k = math.sqrt(curvature)
    return WarpingProfile(
        name=ProfileName.SPHERICAL,
        value=lambda t: np.sin(k * t) / k,
        first=lambda t: np.cos(k * t),
        second=lambda t: -k * np.sin(k * t),
        t_max=math.pi / k,
        parameters={"curvature": curvature},
    )


def concave_profile() -> WarpingProfile:
    """g(t) = t (1 + t^2)^(-1/4): concave, with non-negative Ricci curvature."""
    return WarpingProfile(
        name=ProfileName.CONCAVE,
        value=lambda t: t * (1.0 + t * t) ** -0.25,
        first=lambda t: (1.0 + 0.5 * t * t) * (1.0 + t * t) ** -1.25,
        second=lambda t: -t * (1.5 + 0.25 * t * t) * (1.0 + t * t) ** -2.25,
    )


def affine_profile(h0: float) -> WarpingProfile:
    """g(r) = 1 + H0 r, the warping of the exterior equality metric."""
    if h0 <= 0:
        raise ManifoldError(f"H0 must be positive, got {h0}.")
    return WarpingProfile(
        name=ProfileName.AFFINE,
        value=lambda r: 1.0 + h0 * r,
        first=lambda r: np.full_like(r, h0, dtype=float),
        second=lambda r: np.zeros_like(r, dtype=float),
        affine_from=0.0,
        parameters={"h0": h0},
    )


def splice_profile(t0: float, h0: float) -> WarpingProfile:
    """Convex C^2 profile equal to t near the pole and affine beyond ``t0``.

    With ``L = 1/H0``, ``s = t0 - L``, ``G = 2 t0 - L`` and tail slope
    ``sigma = G H0``, the profile is

        g(t) = t + (sigma - 1) L (x^3 - x^4 / 2),   x = clip((t - s)/L, 0, 1)

    for ``t < t0`` and ``G (1 + H0 (t - t0))`` beyond. g'' vanishes at both
    ends of the bridge and equals ``6 (sigma - 1) x (1 - x) / L >= 0`` on it,
    so ``g'(t0)/g(t0) = H0`` exactly.

    Raises:
        InfeasibleSpliceError: If ``H0 t0 < 1``; a convex g with g'(0) = 1
            satisfies ``g(t0) <= t0 g'(t0)``, i.e. ``H0 t0 >= 1``.
    """
    if t0 <= 0 or h0 <= 0:
        raise ManifoldError("Splice parameters t0 and H0 must be positive.")
    if h0 * t0 < 1.0:
        raise InfeasibleSpliceError(
            f"No convex profile has g'(t0)/g(t0) = {h0:g} at t0 = {t0:g}: H0 * t0 must be at least 1."
        )
    width = 1.0 / h0
    start = t0 - width
    tail_value = 2.0 * t0 - width
    slope = tail_value * h0
    lift = slope - 1.0

    def _x(t):
        return np.clip((t - start) / width, 0.0, 1.0)

    def value(t):
        x = _x(t)
        bridge = t + lift * width * (x ** 3 - 0.5 * x ** 4)
        return np.where(t < t0, bridge, tail_value * (1.0 + h0 * (t - t0)))

    def first(t):
        x = _x(t)
        return np.where(t < t0, 1.0 + lift * (3.0 * x ** 2 - 2.0 * x ** 3), slope)

    def second(t):
        x = _x(t)
        return np.where(t < t0, 6.0 * lift * x * (1.0 - x) / width, 0.0)

    return WarpingProfile(
        name=ProfileName.REMARK_SPLICE,
        value=value,
        first=first,
        second=second,
        affine_from=t0,
        parameters={"t0": t0, "h0": h0},
    )


def tabulated_profile(table: Sequence[Sequence[float]]) -> WarpingProfile:
    """Monotone cubic (PCHIP) interpolation of ``(t, g)`` pairs.

    Beyond the last node the profile continues affinely with the end slope.
    """
    data = np.asarray(table, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < 3:
        raise ManifoldError("A tabulated profile needs at least three (t, g) pairs.")
    nodes, values = data[:, 0], data[:, 1]
    if np.any(np.diff(nodes) <= 0):
        raise ManifoldError("Tabulated t values must be strictly increasing.")

    spline = PchipInterpolator(nodes, values)
    d1 = spline.derivative(1)
    d2 = spline.derivative(2)
    t_last = float(nodes[-1])
    g_last = float(values[-1])
    end_slope = float(d1(t_last))

    def value(t):
        inner = spline(np.minimum(t, t_last))
        return np.where(t <= t_last, inner, g_last + end_slope * (t - t_last))

    def first(t):
        return np.where(t <= t_last, d1(np.minimum(t, t_last)), end_slope)

    def second(t):
        return np.where(t < t_last, d2(np.minimum(t, t_last)), 0.0)

    return WarpingProfile(
        name=ProfileName.TABULATED,
        value=value,
        first=first,
        second=second,
        t_min=float(nodes[0]),
        affine_from=t_last,
        parameters={"table": data.tolist()},
    )


PROFILE_BUILDERS = {
    ProfileName.EUCLIDEAN.value: lambda params: euclidean_profile(),
    ProfileName.HYPERBOLIC.value: lambda params: hyperbolic_profile(params.get("curvature", -1.0)),
    ProfileName.SPHERICAL.value: lambda params: spherical_profile(params.get("curvature", 1.0)),
    ProfileName.CONCAVE.value: lambda params: concave_profile(),
    ProfileName.REMARK_SPLICE.value: lambda params: splice_profile(params["t0"], params["h0"]),
    ProfileName.TABULATED.value: lambda params: tabulated_profile(params["table"]),
    ProfileName.AFFINE.value: lambda params: affine_profile(params["h0"]),
}


def build_profile(name: str, parameters: Optional[Dict] = None) -> WarpingProfile:
    """Build a named profile from its parameters."""
    builder = PROFILE_BUILDERS.get(name)
    if builder is None:
        raise ManifoldError(f"Unknown warping profile: {name}")
    return builder(parameters or {})
