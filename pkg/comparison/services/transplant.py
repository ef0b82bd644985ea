"""Laplacian of a radial potential transplanted onto a distance function."""

from typing import Callable, Union

import numpy as np

from comparison.exceptions import DomainMismatchError
from comparison.services.integrator import FlowResult
from radial.exceptions import RadialCapacityError
from radial.services.potentials import RadialPotential, radial_laplacian

MeanCurvatureProfile = Union[FlowResult, Callable[[np.ndarray], np.ndarray]]


def _mean_curvature(profile: MeanCurvatureProfile, r: np.ndarray) -> np.ndarray:
    if isinstance(profile, FlowResult):
        return profile.value_at(r)
    return np.asarray(profile(r), dtype=float)


def transplant_laplacian(potential: RadialPotential, h_profile: MeanCurvatureProfile, r):
    """``Phi''(r) + n H(r) Phi'(r)`` for ``v = Phi(dist)`` with level sets of mean curvature ``H(r)``.

    With the exterior Euclidean potential the sign follows the comparison:
    non-positive when H lies above ``H0/(1 + H0 r)``, non-negative below it,
    zero on it.

    Raises:
        DomainMismatchError: If ``r`` lies outside the potential or the sampled profile.
    """
    try:
        offsets = potential.check_offset(r)
    except RadialCapacityError as e:
        raise DomainMismatchError(str(e))
    values = radial_laplacian(potential, _mean_curvature(h_profile, offsets), offsets)
    return float(values) if np.ndim(values) == 0 else values
