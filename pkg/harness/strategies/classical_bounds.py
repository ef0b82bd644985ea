"""Classical Euclidean capacity estimates: mean curvature integral, isoperimetric volume, area ratio."""

import logging
import math

from capacity_lab.choices import Provenance
from geometry.services.bodies import Ball
from geometry.services.measures import area, integral_mean_curvature, volume
from harness.exceptions import HypothesisViolationError
from harness.strategies.base_strategy import BaseCheckStrategy, CheckResult
from radial.services.capacity import isoperimetric_constant

logger = logging.getLogger(__name__)

# Conjectured infimum of cap/sqrt(area) over convex bodies in R^3, attained by flat disks.
AREA_RATIO_CONSTANT = math.sqrt(32.0 / math.pi)


def _tag(body) -> str:
    return Provenance.CLOSED_FORM if isinstance(body, Ball) else Provenance.QUADRATURE


class MeanCurvatureIntegralStrategy(BaseCheckStrategy):
    """``cap(K) <= integral of H over dK`` for smooth convex bodies in R^3; equality for balls."""

    def check(self) -> CheckResult:
        body = self.body
        if body.dimension != 3:
            raise HypothesisViolationError(f"The mean curvature integral bound is stated in R^3, not R^{body.dimension}.")
        if not body.smooth:
            raise HypothesisViolationError(f"{body.kind} boundary has ridges; mean curvature is undefined there")
        bound = integral_mean_curvature(body, self.resolution)
        self.provenance["bound"] = _tag(body)
        self.details["mean_curvature_integral"] = bound
        return self.result(self.capacity_figure(), bound)


class IsoperimetricVolumeStrategy(BaseCheckStrategy):
    """``cap(K) >= c^2 (n - 1)/(n + 1) vol(K)^((n - 1)/(n + 1))`` with the isoperimetric constant ``c``."""

    def check(self) -> CheckResult:
        body = self.body
        n = body.dimension - 1
        constant = isoperimetric_constant(n)
        measure = volume(body)
        self.provenance["volume"] = Provenance.CLOSED_FORM if isinstance(body, Ball) else Provenance.GRID
        self.details.update({"isoperimetric_constant": constant, "volume": measure})
        bound = constant ** 2 * (n - 1) / (n + 1) * measure ** ((n - 1) / (n + 1))
        return self.result(self.capacity_figure(), bound)


class AreaRatioStrategy(BaseCheckStrategy):
    """
    Exploratory ``cap(K) / sqrt(area(dK))`` against the conjectured
    ``sqrt(32/pi)``. The ratio and the would-be slack are reported; the
    verdict is always inapplicable.
    """

    def check(self) -> CheckResult:
        body = self.body
        if body.dimension != 3:
            raise HypothesisViolationError("The area ratio is only studied in R^3.")
        boundary = area(body, self.resolution)
        self.provenance["area"] = _tag(body)
        figure = self.capacity_figure()
        root = math.sqrt(boundary)
        ratio = figure.value / root
        self.details.update({
            "area": boundary,
            "ratio": ratio,
            "conjectured_constant": AREA_RATIO_CONSTANT,
        })
        logger.info("%s: cap/sqrt(area) = %.6g (conjectured infimum %.6g)", self.scenario.id, ratio, AREA_RATIO_CONSTANT)
        return self.result(figure, AREA_RATIO_CONSTANT * root, applicable=False)
