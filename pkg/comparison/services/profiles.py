"""Curvature profiles along a normal geodesic."""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from capacity_lab.choices import CurvatureKind, NamedCurvatureProfile, SignCertificate
from comparison.exceptions import ComparisonError, DomainMismatchError
from manifolds.services.diagnostics import radial_curvatures
from manifolds.services.warped import WarpedModel

logger = logging.getLogger(__name__)

CERTIFICATE_SAMPLES = 1024
CERTIFICATE_TOLERANCE = 1e-12

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class CurvatureProfile:
    """
    ``r -> sec(r)`` (sectional) or ``r -> Ric(r)`` (ricci) on ``[0, r_max]``.

    Build profiles through the functions below; they sample the evaluator
    and attach the sign certificate.
    """

    kind: str
    evaluator: Evaluator
    r_max: float
    sign_certificate: str
    name: str = NamedCurvatureProfile.TABLE
    parameters: Dict = field(default_factory=dict)

    def __call__(self, r):
        values = np.asarray(r, dtype=float)
        if np.any(values < 0) or np.any(values > self.r_max * (1.0 + 1e-12)):
            raise DomainMismatchError(f"r outside the profile domain [0, {self.r_max:g}].")
        return self.evaluator(values)

    @property
    def is_nonpositive(self) -> bool:
        return self.sign_certificate == SignCertificate.NONPOSITIVE

    @property
    def is_nonnegative(self) -> bool:
        return self.sign_certificate == SignCertificate.NONNEGATIVE


def certify_sign(evaluator: Evaluator, r_max: float, kind: str, samples: int = CERTIFICATE_SAMPLES) -> str:
    """Sign certificate from ``samples`` equispaced values on ``[0, r_max]``.

    A profile that vanishes on every sample certifies the sign its kind is
    compared under: nonpositive for sectional and nonnegative for ricci.

    Raises:
        ComparisonError: If the evaluator is not finite on a sample.
    """
    values = np.asarray(evaluator(np.linspace(0.0, r_max, samples)), dtype=float)
    if not np.all(np.isfinite(values)):
        raise ComparisonError("Curvature profile is not finite on its domain.")
    nonpositive = bool(np.all(values <= CERTIFICATE_TOLERANCE))
    nonnegative = bool(np.all(values >= -CERTIFICATE_TOLERANCE))
    if nonpositive and nonnegative:
        return SignCertificate.NONPOSITIVE if kind == CurvatureKind.SECTIONAL else SignCertificate.NONNEGATIVE
    if nonpositive:
        return SignCertificate.NONPOSITIVE
    if nonnegative:
        return SignCertificate.NONNEGATIVE
    return SignCertificate.NONE


def _make(kind: str, evaluator: Evaluator, r_max: float, name: str, parameters: Dict) -> CurvatureProfile:
    if kind not in CurvatureKind.values:
        raise ComparisonError(f"Unknown curvature profile kind: {kind}")
    if not r_max > 0 or not math.isfinite(r_max):
        raise ComparisonError(f"Profile domain must be a positive finite length, got {r_max}.")
    certificate = certify_sign(evaluator, r_max, kind)
    logger.debug("Built %s profile %s on [0, %g]: %s", kind, name, r_max, certificate)
    return CurvatureProfile(
        kind=kind,
        evaluator=evaluator,
        r_max=float(r_max),
        sign_certificate=certificate,
        name=name,
        parameters=parameters,
    )


def constant_profile(kind: str, value: float, r_max: float) -> CurvatureProfile:
    """Constant curvature ``value``."""
    name = NamedCurvatureProfile.FLAT if value == 0 else NamedCurvatureProfile.HYPERBOLIC_CONST
    return _make(kind, lambda r: np.full(np.shape(r), float(value)), r_max, name, {"value": value})


def flat_profile(kind: str, r_max: float) -> CurvatureProfile:
    return constant_profile(kind, 0.0, r_max)


def table_profile(kind: str, table: Sequence[Sequence[float]]) -> CurvatureProfile:
    """Monotone cubic interpolation of ``(r, value)`` pairs starting at ``r = 0``.

    PCHIP stays within the range of neighbouring nodes, so the sign of the
    nodes carries over to the profile.
    """
    data = np.asarray(table, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < 2:
        raise ComparisonError("A tabulated curvature profile needs at least two (r, value) pairs.")
    nodes, values = data[:, 0], data[:, 1]
    if nodes[0] != 0 or np.any(np.diff(nodes) <= 0):
        raise ComparisonError("Tabulated r values must start at 0 and increase strictly.")
    spline = PchipInterpolator(nodes, values)
    return _make(kind, spline, float(nodes[-1]), NamedCurvatureProfile.TABLE, {"table": data.tolist()})


def shifted_profile(profile: CurvatureProfile, epsilon: float) -> CurvatureProfile:
    """``profile + epsilon``, a perturbation of supremum norm ``|epsilon|``."""
    return _make(
        profile.kind,
        lambda r: profile.evaluator(r) + epsilon,
        profile.r_max,
        profile.name,
        {**profile.parameters, "shift": epsilon},
    )


def random_table_profile(
    kind: str,
    rng: np.random.Generator,
    low: float,
    high: float,
    r_max: float,
    knots: int = 8,
) -> CurvatureProfile:
    """Piecewise-cubic profile with node values drawn uniformly from ``[low, high]``."""
    nodes = np.linspace(0.0, r_max, knots)
    values = rng.uniform(low, high, size=knots)
    return table_profile(kind, np.column_stack([nodes, values]))


def model_profile(model: WarpedModel, kind: str, t0: float, r_max: float) -> CurvatureProfile:
    """Curvature along the radial geodesic of a warped model leaving the sphere ``t = t0``.

    ``sec(r)`` is the radial sectional curvature ``-g''/g`` at ``t0 + r`` and
    the Ricci profile is ``n`` times that.
    """
    if t0 <= model.t_min or t0 + r_max >= model.t_max:
        raise DomainMismatchError(f"Radial segment [{t0:g}, {t0 + r_max:g}] leaves the model domain.")
    scale = 1.0 if kind == CurvatureKind.SECTIONAL else float(model.n)

    def evaluator(r):
        return scale * radial_curvatures(model, t0 + np.asarray(r, dtype=float)).sec_radial

    return _make(kind, evaluator, r_max, NamedCurvatureProfile.TABLE, {"model": model.descriptor, "t0": t0})


CURVATURE_PROFILE_BUILDERS = {
    NamedCurvatureProfile.FLAT.value: lambda kind, params: flat_profile(kind, params["r_max"]),
    NamedCurvatureProfile.HYPERBOLIC_CONST.value: lambda kind, params: constant_profile(
        kind, params["value"], params["r_max"]
    ),
    NamedCurvatureProfile.TABLE.value: lambda kind, params: table_profile(kind, params["table"]),
}


def build_curvature_profile(name: str, kind: str, parameters: Optional[Dict] = None) -> CurvatureProfile:
    """Build a named profile (flat, hyperbolic-const or table) from scenario parameters."""
    builder = CURVATURE_PROFILE_BUILDERS.get(name)
    if builder is None:
        raise ComparisonError(f"Unknown curvature profile: {name}")
    try:
        return builder(kind, parameters or {})
    except KeyError as e:
        raise ComparisonError(f"Curvature profile '{name}' is missing parameter {str(e)}")
