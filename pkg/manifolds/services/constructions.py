"""Named model constructions: spliced equality models and exterior ends."""

import logging
from typing import Dict, Optional

import numpy as np

from capacity_lab.choices import ModelKind, ProfileName
from manifolds.exceptions import InfeasibleSpliceError, ManifoldError
from manifolds.services.profiles import affine_profile, build_profile, splice_profile
from manifolds.services.warped import WarpedModel

logger = logging.getLogger(__name__)

CONVEXITY_SAMPLES = 2048


def remark_example_model(t0: float, h0: float, n: int = 2) -> WarpedModel:
    """Closed Cartan-Hadamard model whose geodesic sphere at ``t0`` has curvature ``h0``.

    g is the identity near the pole and affine beyond ``t0``, ``g(t0 + r) =
    g(t0)(1 + h0 r)``, so the exterior of the geodesic ball of radius ``t0`` is
    the equality metric of the lower bound.

    Raises:
        InfeasibleSpliceError: If ``h0 * t0 < 1``.
    """
    model = WarpedModel(n=n, profile=splice_profile(t0, h0), kind=ModelKind.CLOSED)
    grid = np.linspace(0.0, 2.0 * t0, CONVEXITY_SAMPLES)
    if np.any(model.ddg(grid) < 0):
        raise InfeasibleSpliceError("Spliced profile lost convexity on sampling.")
    logger.debug("Spliced model t0=%g H0=%g: g(t0)=%.12g", t0, h0, float(model.g(t0)))
    return model


def exterior_equality_model(n: int, h0: float, boundary_area: float) -> WarpedModel:
    """Exterior model ``dr^2 + (1 + h0 r)^2 h`` over a fiber of volume ``boundary_area``."""
    return WarpedModel(n=n, profile=affine_profile(h0), kind=ModelKind.EXTERIOR, boundary_area=boundary_area)


def build_model(
    profile: str,
    n: int,
    parameters: Optional[Dict] = None,
    kind: str = ModelKind.CLOSED,
    boundary_area: Optional[float] = None,
) -> WarpedModel:
    """Build a warped model from a named profile.

    Splice and affine profiles go through their dedicated constructions so the
    same checks apply whether a model is built in code or from a descriptor.
    """
    parameters = parameters or {}
    if profile == ProfileName.REMARK_SPLICE:
        if kind != ModelKind.CLOSED:
            raise ManifoldError("Spliced profiles define closed models.")
        return remark_example_model(parameters["t0"], parameters["h0"], n=n)
    if profile == ProfileName.AFFINE:
        if kind != ModelKind.EXTERIOR:
            raise ManifoldError("Affine profiles define exterior models.")
        return exterior_equality_model(n, parameters["h0"], boundary_area)
    return WarpedModel(n=n, profile=build_profile(profile, parameters), kind=kind, boundary_area=boundary_area)
