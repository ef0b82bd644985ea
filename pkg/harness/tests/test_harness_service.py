"""Tests for the HarnessService."""

from pathlib import Path

import pytest

from capacity_lab.choices import ScenarioKind, Verdict
from harness.exceptions import HarnessError, ScenarioParseError
from harness.models import Report, SuiteRun
from harness.services.harness_service import STRATEGY_MAP, HarnessService, evaluate_scenario
from harness.strategies.base_strategy import BaseCheckStrategy

BUNDLED_SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


class CrashingStrategy(BaseCheckStrategy):
    """Raises an error no strategy is expected to raise."""

    def check(self):
        raise ValueError("operands could not be broadcast together")


def traces(details):
    """Yield every exhaustion trace nested anywhere in a report's details."""
    if isinstance(details, dict):
        for key, value in details.items():
            if key == "trace" and isinstance(value, list):
                yield value
            else:
                yield from traces(value)
    elif isinstance(details, list):
        for item in details:
            yield from traces(item)


@pytest.mark.unit
class TestEvaluateScenario:
    """Tests for evaluate_scenario outside the database."""

    def test_outcome(self, make_scenario, ball_scenario_document):
        outcome = evaluate_scenario(make_scenario(**ball_scenario_document))
        assert outcome.error is None
        assert outcome.scenario_id == "unit-ball"
        assert outcome.result["verdict"] == Verdict.EQUALITY
        assert outcome.runtime >= 0

    def test_evaluation_error_is_captured(self, make_scenario, unit_ball_document):
        """Asking for a closed form the body does not have ends the scenario, not the process."""
        body = {"kind": "ellipsoid", "semi_axes": [1.0, 1.0, 1.5]}
        scenario = make_scenario(id="e", kind="cor-4.3", body=body, capacity={"method": "closed-form"})
        outcome = evaluate_scenario(scenario)
        assert outcome.result is None
        assert "HarnessError" in outcome.error

    def test_unexpected_error_is_captured(self, monkeypatch, make_scenario, ball_scenario_document):
        monkeypatch.setitem(STRATEGY_MAP, "thm-3.1", CrashingStrategy)
        outcome = evaluate_scenario(make_scenario(**ball_scenario_document))
        assert outcome.result is None
        assert outcome.error.startswith("ValueError: operands")


@pytest.mark.django_db
class TestHarnessServiceRun:
    """Test cases for single scenario runs."""

    def test_run_scenario_persists_report(self, make_scenario, ball_scenario_document):
        report = HarnessService().run_scenario(make_scenario(**ball_scenario_document))

        assert Report.objects.filter(pk=report.pk).exists()
        assert report.verdict == Verdict.EQUALITY
        assert report.inputs["h0"] == 1.0
        assert report.provenance["capacity"] == "closed-form"
        assert report.runtime_seconds >= 0

    def test_run_file_with_overrides(self, write_scenario, ball_scenario_document):
        """CLI overrides reach the scenario document before validation."""
        path = write_scenario("ball.yaml", ball_scenario_document)
        report = HarnessService(overrides={"h": 0.05, "seed": None}).run_file(path)
        assert report.inputs["capacity"] == {"h": 0.05}
        assert report.method == "closed-form"

    def test_run_file_parse_error(self, write_scenario, ball_scenario_document):
        path = write_scenario("ball.yaml", {**ball_scenario_document, "h0": 0.0})
        with pytest.raises(ScenarioParseError):
            HarnessService().run_file(path)
        assert Report.objects.count() == 0

    def test_run_scenario_evaluation_error(self, make_scenario):
        body = {"kind": "ellipsoid", "semi_axes": [1.0, 1.0, 1.5]}
        scenario = make_scenario(id="e", kind="cor-4.3", body=body, capacity={"method": "closed-form"})
        with pytest.raises(HarnessError, match="could not be evaluated"):
            HarnessService().run_scenario(scenario)

    def test_invalid_worker_count(self):
        with pytest.raises(HarnessError):
            HarnessService(workers=-1)


@pytest.mark.django_db
class TestHarnessServiceSuite:
    """Test cases for suite runs."""

    def test_empty_directory(self, tmp_path):
        """An empty directory gives an empty summary and exit status 0."""
        suite_run = HarnessService().run_suite(tmp_path)
        assert suite_run.total == 0
        assert suite_run.errors == {}
        assert suite_run.exit_status == 0

    def test_missing_directory(self, tmp_path):
        with pytest.raises(ScenarioParseError):
            HarnessService().run_suite(tmp_path / "absent")
        assert SuiteRun.objects.count() == 0

    def test_parse_errors_are_listed(self, write_scenario, ball_scenario_document, unit_ball_document, tmp_path):
        write_scenario("ball.yaml", ball_scenario_document)
        write_scenario("ratio.yaml", {"id": "ratio", "kind": "polya-szego-ratio", "body": unit_ball_document})
        write_scenario("bad.yaml", {**ball_scenario_document, "id": "bad", "h0": -2.0})

        suite_run = HarnessService().run_suite(tmp_path)

        assert suite_run.equality == 1
        assert suite_run.inapplicable == 1
        assert suite_run.fails == 0
        assert list(suite_run.errors) == ["bad.yaml"]
        assert suite_run.exit_status == 2
        assert [r.scenario_id for r in suite_run.reports.all()] == ["ratio", "unit-ball"]

    def test_evaluation_errors_are_listed(self, write_scenario, ball_scenario_document, tmp_path):
        write_scenario("ball.yaml", ball_scenario_document)
        write_scenario("closed.yaml", {
            "id": "closed",
            "kind": "cor-4.3",
            "body": {"kind": "ellipsoid", "semi_axes": [1.0, 1.0, 1.5]},
            "capacity": {"method": "closed-form"},
        })
        suite_run = HarnessService().run_suite(tmp_path)
        assert suite_run.total == 1
        assert "closed.yaml" in suite_run.errors

    def test_unexpected_error_keeps_other_reports(
        self, monkeypatch, write_scenario, ball_scenario_document, unit_ball_document, tmp_path
    ):
        """A strategy crashing with a non-app error is listed and the rest of the suite persists."""
        monkeypatch.setitem(STRATEGY_MAP, "polya-szego-ratio", CrashingStrategy)
        write_scenario("ball.yaml", ball_scenario_document)
        write_scenario("ratio.yaml", {"id": "ratio", "kind": "polya-szego-ratio", "body": unit_ball_document})

        suite_run = HarnessService().run_suite(tmp_path)

        assert SuiteRun.objects.count() == 1
        assert [r.scenario_id for r in suite_run.reports.all()] == ["unit-ball"]
        assert list(suite_run.errors) == ["ratio.yaml"]
        assert "ValueError" in suite_run.errors["ratio.yaml"]
        assert suite_run.exit_status == 2

    def test_seed_recorded(self, tmp_path):
        suite_run = HarnessService(overrides={"seed": 99}).run_suite(tmp_path)
        assert suite_run.seed == 99

    @pytest.mark.slow
    def test_workers_merge_in_id_order(self, write_scenario, unit_ball_document, tmp_path):
        """Reports from worker processes are identical to a sequential run."""
        kinds = [ScenarioKind.THM_3_1, ScenarioKind.COR_4_3, ScenarioKind.SZEGO_VOLUME, ScenarioKind.POLYA_SZEGO_RATIO]
        for i, kind in enumerate(kinds):
            write_scenario(f"s{i}.yaml", {"id": f"s{3 - i}", "kind": kind.value, "body": unit_ball_document})

        parallel = HarnessService(workers=2).run_suite(tmp_path)
        sequential = HarnessService(workers=1).run_suite(tmp_path)

        rows = lambda run: [(r.scenario_id, r.capacity, r.bound, r.slack, r.verdict) for r in run.reports.all()]  # noqa: E731
        assert rows(parallel) == rows(sequential)
        assert [row[0] for row in rows(parallel)] == ["s0", "s1", "s2", "s3"]

    @pytest.mark.slow
    def test_bundled_suite(self):
        """The bundled suite parses completely and no bound fails."""
        suite_run = HarnessService().run_suite(BUNDLED_SCENARIOS)

        assert suite_run.errors == {}
        assert suite_run.fails == 0
        assert suite_run.exit_status == 0
        verdicts = {r.scenario_id: r.verdict for r in suite_run.reports.all()}
        assert verdicts["ball-lower-closed-form"] == Verdict.EQUALITY
        assert verdicts["splice-equality"] == Verdict.EQUALITY
        assert verdicts["hyperbolic-lower"] == Verdict.HOLDS
        assert verdicts["hyperbolic-upper-gated"] == Verdict.INAPPLICABLE
        assert verdicts["ball-area-ratio"] == Verdict.INAPPLICABLE
        assert verdicts["spheroid-lower"] == Verdict.HOLDS
        assert verdicts["spheroid-upper"] == Verdict.HOLDS
        assert verdicts["lens-lambda-convex"] == Verdict.HOLDS
        assert verdicts["comparison-flows"] == Verdict.HOLDS

        # outer-radius exhaustion never increases the capacity estimate
        checked = 0
        for report in suite_run.reports.all():
            for trace in traces(report.details):
                values = [step["value"] for step in trace]
                for previous, current in zip(values, values[1:]):
                    assert current <= previous * (1 + 1e-9), report.scenario_id
                checked += 1
        assert checked > 0
