"""Radial equilibrium potentials as functions of the distance to the inner boundary."""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from radial.exceptions import InvalidDimensionError, RadialCapacityError

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RadialPotential:
    """
    Potential ``u(r)`` with ``r`` the offset from the inner boundary.

    ``u(0) = 1``; ``u(outer_radius - inner_radius) = 0`` for finite outer
    radius and ``u -> 0`` at infinity otherwise.
    """

    value: Evaluator
    derivative: Evaluator
    second_derivative: Evaluator
    inner_radius: float
    outer_radius: float
    n: int

    @property
    def width(self) -> float:
        return self.outer_radius - self.inner_radius

    def check_offset(self, r) -> np.ndarray:
        """Return ``r`` as an array; raise RadialCapacityError outside ``[0, width]``."""
        values = np.asarray(r, dtype=float)
        if np.any(values < 0) or np.any(values > self.width):
            raise RadialCapacityError(f"Offset outside the potential domain [0, {self.width:g}].")
        return values

    def __call__(self, r):
        return self.value(self.check_offset(r))


def _require_dimension(n: int):
    if n < 2:
        raise InvalidDimensionError(f"Closed-form Euclidean potentials need n >= 2, got n = {n}.")


def _require_positive(h0: float):
    if h0 <= 0:
        raise RadialCapacityError(f"H0 must be positive, got {h0}.")


def annulus_potential_euclidean(n: int, h0: float, t: float) -> RadialPotential:
    """Potential of the annulus between spheres of radii ``1/h0`` and ``1/h0 + t`` in R^(n+1).

        u(r) = [(1 + r h0)^(1-n) - (1 + t h0)^(1-n)] / [1 - (1 + t h0)^(1-n)]
    """
    _require_dimension(n)
    _require_positive(h0)
    if t <= 0:
        raise RadialCapacityError(f"Annulus width must be positive, got {t}.")
    outer = (1.0 + t * h0) ** (1 - n)
    denominator = 1.0 - outer
    return RadialPotential(
        value=lambda r: ((1.0 + r * h0) ** (1 - n) - outer) / denominator,
        derivative=lambda r: (1 - n) * h0 * (1.0 + r * h0) ** (-n) / denominator,
        second_derivative=lambda r: n * (n - 1) * h0 ** 2 * (1.0 + r * h0) ** (-n - 1) / denominator,
        inner_radius=1.0 / h0,
        outer_radius=1.0 / h0 + t,
        n=n,
    )


def exterior_potential_euclidean(n: int, h0: float) -> RadialPotential:
    """Exterior potential ``(1 + r h0)^(1-n)`` of the ball of radius ``1/h0``."""
    _require_dimension(n)
    _require_positive(h0)
    return RadialPotential(
        value=lambda r: (1.0 + r * h0) ** (1 - n),
        derivative=lambda r: (1 - n) * h0 * (1.0 + r * h0) ** (-n),
        second_derivative=lambda r: n * (n - 1) * h0 ** 2 * (1.0 + r * h0) ** (-n - 1),
        inner_radius=1.0 / h0,
        outer_radius=math.inf,
        n=n,
    )


def radial_laplacian(potential: RadialPotential, mean_curvature, r) -> np.ndarray:
    """``u'' + n H u'`` for a potential composed with a distance whose level sets have mean curvature H."""
    offsets = potential.check_offset(r)
    return potential.second_derivative(offsets) + potential.n * np.asarray(mean_curvature) * potential.derivative(offsets)
