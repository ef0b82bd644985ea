"""Tests for comparison reports and verdict classification."""

import numpy as np
import pytest

from capacity_lab.choices import BoundDirection, Verdict
from comparison.services.reports import build_report, classify


@pytest.mark.unit
class TestClassify:
    """Tests for the slack classification."""

    def test_equality(self):
        """Every |slack| within tolerance is equality."""
        assert classify([1e-9, -1e-9, 0.0], 1e-8) == Verdict.EQUALITY

    def test_holds(self):
        """A positive slack beyond tolerance holds."""
        assert classify([0.5, 0.0, -1e-9], 1e-8) == Verdict.HOLDS

    def test_fails(self):
        """A slack below -tol fails."""
        assert classify([0.5, -1e-3], 1e-8) == Verdict.FAILS

    def test_nan_samples_ignored(self):
        """Samples after a stopped flow are ignored; all-NaN fails."""
        assert classify([0.1, np.nan], 1e-8) == Verdict.HOLDS
        assert classify([np.nan], 1e-8) == Verdict.FAILS


@pytest.mark.unit
class TestBuildReport:
    """Tests for build_report."""

    def test_lower_bound_slack(self):
        """Lower bounds use computed - bound."""
        report = build_report("case", [0.0, 1.0], [2.0, 3.0], [1.0, 1.0])
        assert report.worst_slack == 1.0
        assert report.verdict == Verdict.HOLDS
        np.testing.assert_allclose(report.slack, [1.0, 2.0])

    def test_upper_bound_slack(self):
        """Upper bounds use bound - computed."""
        report = build_report("case", [0.0], [2.0], [1.0], direction=BoundDirection.UPPER)
        assert report.worst_slack == -1.0
        assert report.verdict == Verdict.FAILS

    def test_inapplicable(self):
        """A failed certificate overrides the slack."""
        report = build_report("case", [0.0], [2.0], [1.0], applicable=False)
        assert report.verdict == Verdict.INAPPLICABLE
        assert report.worst_slack == 1.0
