"""Tests for CSV export of reports."""

import math

import pytest

from capacity_lab.choices import CapacityMethod, Verdict
from harness.exceptions import HarnessError
from harness.models import Report
from harness.services.csv_export import CSV_COLUMNS, emit_csv, format_number, read_csv


@pytest.fixture
def reports(suite_run):
    """Return an equality report and an inapplicable report in one suite."""
    return [
        Report.objects.create(
            suite_run=suite_run,
            scenario_id="unit-ball",
            kind="thm-3.1",
            inputs={"id": "unit-ball"},
            capacity=4.0 * math.pi,
            method=CapacityMethod.CLOSED_FORM,
            bound=4.0 * math.pi,
            slack=0.0,
            tolerance=1e-7,
            verdict=Verdict.EQUALITY,
            runtime_seconds=0.25,
        ),
        Report.objects.create(
            suite_run=suite_run,
            scenario_id="gated",
            kind="thm-3.5",
            inputs={"id": "gated"},
            method=CapacityMethod.NONE,
            tolerance=0.0,
            verdict=Verdict.INAPPLICABLE,
        ),
    ]


@pytest.mark.unit
class TestFormatNumber:
    """Tests for format_number."""

    def test_significant_digits(self):
        assert format_number(4.0 * math.pi) == "12.5663706144"
        assert format_number(1e-10) == "1e-10"

    def test_missing(self):
        assert format_number(None) == ""


@pytest.mark.integration
class TestEmitCsv:
    """Tests for emit_csv and read_csv."""

    def test_rows_in_given_order(self, reports, tmp_path):
        path = emit_csv(reports, tmp_path / "out" / "reports.csv")
        rows = read_csv(path)

        assert [row["id"] for row in rows] == ["unit-ball", "gated"]
        assert rows[0]["capacity"] == format_number(4.0 * math.pi)
        assert rows[0]["verdict"] == Verdict.EQUALITY
        assert rows[0]["runtime"] == "0.25"
        assert rows[1]["slack"] == ""
        assert rows[1]["method"] == CapacityMethod.NONE

    def test_header(self, reports, tmp_path):
        path = emit_csv(reports[:1], tmp_path / "reports.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2

    def test_no_reports(self, tmp_path):
        with pytest.raises(HarnessError, match="No reports"):
            emit_csv([], tmp_path / "reports.csv")

    def test_unwritable_path(self, reports, tmp_path):
        """A directory in place of the file is reported, not raised as OSError."""
        (tmp_path / "taken").mkdir()
        with pytest.raises(HarnessError, match="Cannot write"):
            emit_csv(reports, tmp_path / "taken")

    def test_foreign_header(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(HarnessError, match="expected"):
            read_csv(path)

    def test_relative_path_uses_report_dir(self, reports, settings, tmp_path):
        settings.CAP_REPORT_DIR = tmp_path / "reports"
        path = emit_csv(reports, "suite.csv")
        assert path == tmp_path / "reports" / "suite.csv"
        assert len(read_csv(path)) == 2
