"""Service for running scenarios and suites and persisting their reports."""

import logging
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, Union

from django.conf import settings
from django.core.exceptions import ValidationError
from django.db import transaction

from capacity_lab.choices import ScenarioKind, Verdict
from comparison.exceptions import ComparisonError
from geometry.exceptions import GeometryError
from harness.exceptions import HarnessError
from harness.models import Report, SuiteRun
from harness.services.loader import Scenario, load_directory, load_scenario
from harness.services.worker_init import init_worker as _init_worker
from harness.strategies.base_strategy import BaseCheckStrategy, CheckResult
from harness.strategies.classical_bounds import (
    AreaRatioStrategy,
    IsoperimetricVolumeStrategy,
    MeanCurvatureIntegralStrategy,
)
from harness.strategies.curvature_bounds import CurvatureBoundStrategy, LambdaConvexStrategy, VolumeBoundStrategy
from harness.strategies.flow_suite_strategy import FlowSuiteStrategy
from harness.strategies.radial_strategy import RadialEqualityStrategy
from manifolds.exceptions import ManifoldError
from radial.exceptions import RadialCapacityError
from solver.exceptions import SolverError

logger = logging.getLogger(__name__)

# Errors that end one scenario without ending the suite.
EVALUATION_ERRORS = (GeometryError, ManifoldError, RadialCapacityError, ComparisonError, SolverError, HarnessError)

_CTX = mp.get_context("spawn")


@dataclass(frozen=True)
class Outcome:
    """Picklable result of evaluating one scenario in any process."""

    scenario_id: str
    kind: str
    inputs: Dict[str, Any]
    runtime: float
    result: Optional[CheckResult] = None
    error: Optional[str] = None
    path: Optional[str] = None


STRATEGY_MAP: dict[str, Type[BaseCheckStrategy]] = {
    ScenarioKind.THM_3_1: CurvatureBoundStrategy,
    ScenarioKind.THM_3_5: CurvatureBoundStrategy,
    ScenarioKind.COR_4_1: CurvatureBoundStrategy,
    ScenarioKind.COR_4_2: CurvatureBoundStrategy,
    ScenarioKind.COR_4_3: VolumeBoundStrategy,
    ScenarioKind.COR_4_4: VolumeBoundStrategy,
    ScenarioKind.THM_4_5: LambdaConvexStrategy,
    ScenarioKind.SZEGO_MEAN_CURVATURE: MeanCurvatureIntegralStrategy,
    ScenarioKind.SZEGO_VOLUME: IsoperimetricVolumeStrategy,
    ScenarioKind.POLYA_SZEGO_RATIO: AreaRatioStrategy,
    ScenarioKind.RADIAL_EQUALITY: RadialEqualityStrategy,
    ScenarioKind.RICCATI_SUITE: FlowSuiteStrategy,
}


def get_strategy(scenario: Scenario) -> BaseCheckStrategy:
    """
    Get the strategy instance for a scenario kind.

    Raises:
        HarnessError: If no strategy handles the kind.
    """
    strategy_class = STRATEGY_MAP.get(scenario.kind)
    if not strategy_class:
        raise HarnessError(f"Scenario kind '{scenario.kind}' is not implemented")
    return strategy_class(scenario)


def _failed(scenario: Scenario, started: float, error: Exception) -> Outcome:
    return Outcome(
        scenario_id=scenario.id,
        kind=scenario.kind,
        inputs=scenario.inputs,
        runtime=time.perf_counter() - started,
        error=f"{type(error).__name__}: {str(error)}",
        path=scenario.path,
    )


def evaluate_scenario(scenario: Scenario) -> Outcome:
    """Evaluate one scenario without touching the database; evaluation errors land in ``error``."""
    started = time.perf_counter()
    try:
        result = get_strategy(scenario).evaluate()
    except EVALUATION_ERRORS as e:
        logger.error("Scenario %s failed: %s", scenario.id, str(e))
        return _failed(scenario, started, e)
    except Exception as e:
        logger.exception("Scenario %s raised an unexpected error", scenario.id)
        return _failed(scenario, started, e)
    runtime = time.perf_counter() - started
    logger.info("Scenario %s [%s]: %s in %.2fs", scenario.id, scenario.kind, result["verdict"], runtime)
    return Outcome(
        scenario_id=scenario.id,
        kind=scenario.kind,
        inputs=scenario.inputs,
        runtime=runtime,
        result=result,
        path=scenario.path,
    )


class HarnessService:
    """Orchestrates scenario evaluation, verdicts and report persistence."""

    def __init__(self, workers: Optional[int] = None, overrides: Optional[Dict[str, Any]] = None):
        """
        Initialize harness service.

        Args:
            workers: Worker processes for suites; defaults to ``CAP_WORKERS``
            overrides: CLI values (h, outer, growth, tol, seed) written into
                every scenario before validation
        """
        self.workers = workers or settings.CAP_WORKERS
        self.overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
        if self.workers < 1:
            raise HarnessError(f"Worker count must be at least 1, got {self.workers}")

    def run_file(self, path: Union[str, Path]) -> Report:
        """
        Load, evaluate and persist one scenario file.

        Raises:
            ScenarioParseError: If the file does not validate
            HarnessError: If evaluation or persistence fails
        """
        return self.run_scenario(load_scenario(path, self.overrides))

    @transaction.atomic
    def run_scenario(self, scenario: Scenario, suite_run: Optional[SuiteRun] = None) -> Report:
        """
        Evaluate a scenario and persist its report.

        Raises:
            HarnessError: If evaluation fails; hypothesis violations are
                reported as inapplicable instead
        """
        outcome = evaluate_scenario(scenario)
        if outcome.error:
            raise HarnessError(f"Scenario '{scenario.id}' could not be evaluated: {outcome.error}")
        return self._persist(outcome, suite_run)

    @transaction.atomic
    def run_suite(self, directory: Union[str, Path]) -> SuiteRun:
        """
        Evaluate every scenario file in ``directory`` and persist one report each.

        Files that fail to parse or evaluate are listed in ``SuiteRun.errors``
        and the suite continues.

        Raises:
            ScenarioParseError: If the directory does not exist
        """
        started = time.perf_counter()
        scenarios, failures = load_directory(directory, self.overrides)
        suite_run = SuiteRun(
            source=str(directory),
            seed=int(self.overrides.get("seed", settings.CAP_SEED)),
            workers=self.workers,
        )
        suite_run.save()

        errors = dict(failures)
        counts = {verdict: 0 for verdict in Verdict.values}
        for outcome in self._evaluate_all(scenarios):
            if outcome.error:
                errors[Path(outcome.path).name if outcome.path else outcome.scenario_id] = outcome.error
                continue
            try:
                with transaction.atomic():
                    report = self._persist(outcome, suite_run)
            except HarnessError as e:
                logger.error("%s", str(e))
                errors[outcome.scenario_id] = str(e)
                continue
            counts[report.verdict] += 1

        suite_run.holds = counts[Verdict.HOLDS]
        suite_run.equality = counts[Verdict.EQUALITY]
        suite_run.fails = counts[Verdict.FAILS]
        suite_run.inapplicable = counts[Verdict.INAPPLICABLE]
        suite_run.errors = errors
        suite_run.runtime_seconds = time.perf_counter() - started
        suite_run.save()
        logger.info(
            "Suite %s: %d holds, %d equality, %d fails, %d inapplicable, %d errors in %.1fs",
            directory,
            suite_run.holds,
            suite_run.equality,
            suite_run.fails,
            suite_run.inapplicable,
            len(errors),
            suite_run.runtime_seconds,
        )
        return suite_run

    def _evaluate_all(self, scenarios: List[Scenario]) -> List[Outcome]:
        """Evaluate scenarios, in worker processes when more than one is configured; results in id order."""
        if self.workers == 1 or len(scenarios) < 2:
            outcomes = [evaluate_scenario(scenario) for scenario in scenarios]
        else:
            with ProcessPoolExecutor(
                max_workers=min(self.workers, len(scenarios)),
                initializer=_init_worker,
                mp_context=_CTX,
            ) as pool:
                outcomes = list(pool.map(evaluate_scenario, scenarios))
        return sorted(outcomes, key=lambda outcome: outcome.scenario_id)

    def _persist(self, outcome: Outcome, suite_run: Optional[SuiteRun]) -> Report:
        """
        Create the Report row for an evaluated scenario.

        Raises:
            HarnessError: If the report fails model validation
        """
        result = outcome.result
        report = Report(
            suite_run=suite_run,
            scenario_id=outcome.scenario_id,
            kind=outcome.kind,
            inputs=outcome.inputs,
            capacity=result["capacity"],
            method=result["method"],
            error_indicator=result["error_indicator"],
            bound=result["bound"],
            slack=result["slack"],
            tolerance=result["tolerance"],
            verdict=result["verdict"],
            h=result["h"],
            runtime_seconds=outcome.runtime,
            provenance=result["provenance"],
            details=result["details"],
        )
        try:
            report.save()
        except ValidationError as e:
            raise HarnessError(f"Report for '{outcome.scenario_id}' is inconsistent: {str(e)}")
        return report
