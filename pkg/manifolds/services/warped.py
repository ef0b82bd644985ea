"""Rotationally symmetric warped models dt^2 + g(t)^2 h."""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from capacity_lab.choices import ModelKind
from capacity_lab.validators import validate_positive_float, validate_positive_integer
from manifolds.exceptions import ManifoldError
from manifolds.services.profiles import WarpingProfile

logger = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-10
SAMPLE_FLOOR = 1e-4
SAMPLE_CEILING = 1e4
ENDPOINT_MARGIN = 1e-6
POSITIVITY_SAMPLES_PER_DECADE = 64
GROWTH_CEILING = 1e100


@dataclass(frozen=True)
class WarpedModel:
    """
    Warped model over the fiber of dimension ``n``.

    Closed models are ``[0, t_max) x S^n`` with a smooth pole at ``t = 0``.
    Exterior models are ``[0, inf) x dK`` where the fiber enters only through
    its total volume ``boundary_area``.
    """

    n: int
    profile: WarpingProfile
    kind: str = ModelKind.CLOSED
    boundary_area: Optional[float] = None

    def __post_init__(self):
        error = validate_positive_integer(self.n, "Fiber dimension n")
        if error:
            raise ManifoldError(error)
        if self.kind not in ModelKind.values:
            raise ManifoldError(f"Unknown model kind: {self.kind}")
        if self.kind == ModelKind.EXTERIOR:
            if self.boundary_area is None:
                raise ManifoldError("Exterior models need the boundary area of the fiber.")
            error = validate_positive_float(self.boundary_area, "Boundary area")
            if error:
                raise ManifoldError(error)
        else:
            self._check_pole()
        self._check_positive()

    def _check_pole(self):
        if self.profile.t_min != 0:
            raise ManifoldError("Closed models must start at the pole t = 0.")
        zero = np.zeros(1)
        g0 = float(self.profile.value(zero)[0])
        slope0 = float(self.profile.first(zero)[0])
        if abs(g0) > POLE_TOLERANCE or abs(slope0 - 1.0) > POLE_TOLERANCE:
            raise ManifoldError(
                f"Closed models need g(0) = 0 and g'(0) = 1; got g(0) = {g0:.3e}, g'(0) = {slope0:.12g}."
            )

    def _check_positive(self):
        samples = self.sample_points(per_decade=POSITIVITY_SAMPLES_PER_DECADE)
        if np.any(self.g(samples) <= 0):
            raise ManifoldError(f"Warping profile '{self.profile.name}' is not positive on its domain.")

    @property
    def t_min(self) -> float:
        return self.profile.t_min

    @property
    def t_max(self) -> float:
        return self.profile.t_max

    @property
    def affine_from(self) -> Optional[float]:
        return self.profile.affine_from

    def g(self, t):
        return self.profile.value(np.asarray(t, dtype=float))

    def dg(self, t):
        return self.profile.first(np.asarray(t, dtype=float))

    def ddg(self, t):
        return self.profile.second(np.asarray(t, dtype=float))

    def check_domain(self, t, allow_pole: bool = True) -> np.ndarray:
        """Return ``t`` as an array, raising ManifoldError if any value lies outside the domain."""
        values = np.asarray(t, dtype=float)
        low_ok = values >= self.t_min if allow_pole else values > self.t_min
        if not np.all(low_ok & (values < self.t_max)):
            raise ManifoldError(
                f"t outside the model domain [{self.t_min:g}, {self.t_max:g})."
            )
        return values

    def sample_points(self, per_decade: int = 512, count: Optional[int] = None) -> np.ndarray:
        """Log-spaced sample points over the open domain.

        The range runs from ``max(t_min, 1e-4)`` to ``min(t_max (1 - 1e-6), 1e4)``;
        exterior models also include ``t = 0``. Points where g exceeds 1e100 are
        dropped so exponentially growing profiles stay finite.
        """
        low = self.t_min if self.t_min > 0 else SAMPLE_FLOOR
        high = self.t_max * (1.0 - ENDPOINT_MARGIN) if math.isfinite(self.t_max) else SAMPLE_CEILING
        high = min(high, SAMPLE_CEILING)
        if count is None:
            count = max(2, int(math.ceil(math.log10(high / low) * per_decade)))
        points = np.geomspace(low, high, count)
        with np.errstate(over="ignore"):
            points = points[np.abs(self.g(points)) < GROWTH_CEILING]
        if self.kind == ModelKind.EXTERIOR and self.t_min == 0:
            points = np.concatenate([[0.0], points])
        return points

    @property
    def descriptor(self) -> Dict:
        data = {"kind": str(self.kind), "n": self.n, "profile": str(self.profile.name)}
        data.update(self.profile.parameters)
        if self.boundary_area is not None:
            data["boundary_area"] = self.boundary_area
        return data

    def __repr__(self):
        return f"WarpedModel({self.descriptor})"
