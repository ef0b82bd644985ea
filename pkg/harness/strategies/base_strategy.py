"""Base class for scenario check strategies."""

import logging
import math
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, Optional, TypedDict

import numpy as np
from django.conf import settings

from capacity_lab.choices import CapacityMethod, Provenance, Verdict
from geometry.services.bodies import ConvexBody
from geometry.services.descriptors import body_from_descriptor
from harness.exceptions import HypothesisViolationError
from harness.services.capacity_service import CapacityFigure, body_capacity, model_capacity
from harness.services.loader import Scenario
from harness.services.verdicts import classify_slack, signed_slack, verdict_tolerance
from manifolds.services.descriptors import model_from_descriptor
from manifolds.services.warped import WarpedModel

logger = logging.getLogger(__name__)


class CheckResult(TypedDict):
    """Data structure for the outcome of one check."""
    capacity: Optional[float]
    method: str
    error_indicator: float
    bound: Optional[float]
    slack: Optional[float]
    tolerance: float
    verdict: str
    h: Optional[float]
    provenance: dict
    details: dict


def jsonable(value: Any) -> Any:
    """Plain JSON types: numpy scalars and arrays unwrapped, non-finite floats as strings."""
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(item) for item in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        number = float(value)
        return number if math.isfinite(number) else str(number)
    return value


class BaseCheckStrategy(ABC):
    """
    Abstract base class for scenario checks.

    Subclasses implement ``check()``; a ``HypothesisViolationError`` raised
    there becomes an inapplicable result, so no bound verdict is emitted
    without its certificate.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.document = scenario.document
        self.provenance: dict[str, str] = {}
        self.details: dict[str, Any] = {}

    @cached_property
    def body(self) -> ConvexBody:
        return body_from_descriptor(self.document["body"])

    @cached_property
    def model(self) -> WarpedModel:
        return model_from_descriptor(self.document["model"])

    @property
    def resolution(self) -> int:
        return self.document.get("resolution") or settings.CAP_MESH_RESOLUTION

    def evaluate(self) -> CheckResult:
        """Run the check and return its result.

        Raises:
            Any app error raised while computing; hypothesis violations are
            returned as inapplicable results.
        """
        try:
            return self.check()
        except HypothesisViolationError as e:
            logger.warning("%s: %s; verdict inapplicable", self.scenario.id, str(e))
            self.details["hypothesis"] = str(e)
            return self.inapplicable()

    @abstractmethod
    def check(self) -> CheckResult:
        """
        Compute the capacity and the bound, and classify the slack.

        Raises:
            HypothesisViolationError: If the bound's hypothesis fails.
        """
        pass

    def capacity_figure(self) -> CapacityFigure:
        if "model" in self.document:
            figure = model_capacity(self.model, self.document["t0"])
        else:
            figure = body_capacity(self.body, self.document.get("capacity"))
        self.provenance["capacity"] = figure.provenance
        if figure.details:
            self.details["capacity"] = figure.details
        return figure

    def result(self, figure: Optional[CapacityFigure], bound: Optional[float], applicable: bool = True) -> CheckResult:
        """Assemble a result with slack, tolerance and verdict from the shared table."""
        kind = self.scenario.kind
        capacity = None if figure is None else float(figure.value)
        indicator = 0.0 if figure is None else float(figure.error_indicator)
        slack = None
        if capacity is not None and bound is not None:
            slack = signed_slack(capacity, bound, kind)
            if not math.isfinite(slack):
                slack = None
        tolerance = verdict_tolerance(capacity, indicator, bound)
        return CheckResult(
            capacity=capacity,
            method=CapacityMethod.NONE if figure is None else figure.method,
            error_indicator=indicator,
            bound=None if bound is None else float(bound),
            slack=slack,
            tolerance=tolerance,
            verdict=classify_slack(slack, tolerance, kind, applicable),
            h=None if figure is None else figure.h,
            provenance=dict(self.provenance),
            details=jsonable(self.details),
        )

    def inapplicable(self, bound: Optional[float] = None) -> CheckResult:
        return CheckResult(
            capacity=None,
            method=CapacityMethod.NONE,
            error_indicator=0.0,
            bound=bound,
            slack=None,
            tolerance=0.0,
            verdict=Verdict.INAPPLICABLE,
            h=None,
            provenance=dict(self.provenance),
            details=jsonable(self.details),
        )

    def user_or_derived(self, key: str, derived: float, note: str) -> float:
        """Scenario value ``key`` if given (tagged user), else ``derived`` (tagged derived, with ``note``)."""
        if self.document.get(key) is not None:
            self.provenance[key] = Provenance.USER
            return float(self.document[key])
        self.provenance[key] = Provenance.DERIVED
        self.details[f"{key}_derivation"] = note
        return float(derived)
