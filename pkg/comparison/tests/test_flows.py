"""Tests for the Riccati and mean curvature flows."""

import math

import numpy as np
import pytest

from capacity_lab.choices import CurvatureKind, FlowStop, Verdict
from comparison.exceptions import ComparisonError, DomainMismatchError, ProfileKindError
from comparison.services.flows import (
    jacobi_norm,
    mean_curvature_flow,
    mean_curvature_report,
    mean_curvature_upper_bound,
    riccati_flow,
    riccati_lower_bound,
    riccati_report,
)
from comparison.services.profiles import constant_profile, flat_profile, model_profile


@pytest.mark.unit
class TestClosedFormBounds:
    """Tests for riccati_lower_bound and mean_curvature_upper_bound."""

    def test_riccati_lower_bound(self):
        """Test 1: f0 / (1 + f0 r)."""
        assert riccati_lower_bound(1.0, 0.0) == 1.0
        assert riccati_lower_bound(1.0, 1.0) == 0.5
        assert riccati_lower_bound(2.0, 3.0) == pytest.approx(2.0 / 7.0)

    def test_mean_curvature_upper_bound(self):
        """Test 2: H0 / (1 + H0 r)."""
        assert mean_curvature_upper_bound(1.0, 1.0) == 0.5
        assert mean_curvature_upper_bound(2.5, 0.0) == 2.5
        assert mean_curvature_upper_bound(3.0, 2.0) == pytest.approx(3.0 / 7.0)

    def test_invalid_arguments(self):
        """Non-positive starts and negative radii are rejected."""
        with pytest.raises(ComparisonError):
            riccati_lower_bound(0.0, 1.0)
        with pytest.raises(ComparisonError):
            mean_curvature_upper_bound(1.0, -1.0)


@pytest.mark.unit
class TestRiccatiFlow:
    """Tests for riccati_flow."""

    def test_flat_equality(self):
        """Test 1: sec = 0, f0 = 1 gives f = 1/(1 + r)."""
        flow = riccati_flow(flat_profile(CurvatureKind.SECTIONAL, 2.0), 1.0)
        assert flow.stop_reason == FlowStop.COMPLETED
        assert flow.converged is True
        assert float(flow.value_at(1.0)) == pytest.approx(0.5, abs=1e-9)
        np.testing.assert_allclose(flow.curve, 1.0 / (1.0 + flow.r), atol=1e-9)

    def test_hyperbolic_closed_form(self):
        """Test 2: sec = -1, f0 = coth 1 gives f = coth(1 + r)."""
        profile = constant_profile(CurvatureKind.SECTIONAL, -1.0, 2.0)
        flow = riccati_flow(profile, 1.0 / math.tanh(1.0))
        assert float(flow.value_at(1.0)) == pytest.approx(1.0 / math.tanh(2.0), abs=1e-8)
        assert float(flow.value_at(1.0)) == pytest.approx(1.0373, abs=1e-4)

    def test_hyperbolic_beats_bound(self):
        """Test 3: sec = -1, f0 = 1 stays strictly above 1/(1 + r)."""
        profile = constant_profile(CurvatureKind.SECTIONAL, -1.0, 2.0)
        flow = riccati_flow(profile, 1.0)
        assert float(flow.value_at(1.0)) > 0.5
        report = riccati_report(flow, profile, 1.0)
        assert report.verdict == Verdict.HOLDS
        assert report.worst_slack >= 0.0

    def test_positive_curvature_blows_down(self):
        """Positive curvature focuses the geodesics; the stop is reported, not raised."""
        profile = constant_profile(CurvatureKind.SECTIONAL, 4.0, 3.0)
        flow = riccati_flow(profile, 0.5)
        assert flow.stop_reason == FlowStop.BLOW_DOWN
        assert flow.stop_radius < 3.0
        # f = 2 tan(atan(1/4) - 2 r) reaches zero at atan(1/4)/2.
        assert flow.stop_radius == pytest.approx(math.atan(0.25) / 2.0, abs=0.02)
        report = riccati_report(flow, profile, 0.5)
        assert report.verdict == Verdict.INAPPLICABLE

    def test_wrong_kind(self):
        """Ricci profiles do not drive the Riccati flow."""
        with pytest.raises(ProfileKindError):
            riccati_flow(flat_profile(CurvatureKind.RICCI, 1.0), 1.0)

    def test_range_beyond_profile(self):
        """The flow cannot run past the profile domain."""
        with pytest.raises(DomainMismatchError):
            riccati_flow(flat_profile(CurvatureKind.SECTIONAL, 1.0), 1.0, r_max=2.0)

    def test_model_profile_flow(self, hyperbolic_model):
        """Along H^3 the flow started at coth(t0) follows the sphere curvature coth(t0 + r)."""
        profile = model_profile(hyperbolic_model, CurvatureKind.SECTIONAL, 1.0, 1.5)
        flow = riccati_flow(profile, 1.0 / math.tanh(1.0))
        assert float(flow.value_at(1.5)) == pytest.approx(1.0 / math.tanh(2.5), abs=1e-8)


@pytest.mark.unit
class TestMeanCurvatureFlow:
    """Tests for mean_curvature_flow."""

    def test_flat_umbilic_equality(self):
        """Test 1: Ric = 0 and umbilic give H = 1/(1 + r)."""
        profile = flat_profile(CurvatureKind.RICCI, 2.0)
        flow = mean_curvature_flow(profile, 1.0)
        assert float(flow.value_at(1.0)) == pytest.approx(0.5, abs=1e-9)
        assert mean_curvature_report(flow, profile, 1.0).verdict == Verdict.EQUALITY

    def test_positive_ricci(self, caplog):
        """Test 2: Ric = n lies strictly below the bound and crosses zero at pi/4."""
        profile = constant_profile(CurvatureKind.RICCI, 2.0, 2.0)
        flow = mean_curvature_flow(profile, 1.0, n=2)
        r = flow.r[1:]
        assert np.all(flow.curve[1:] < mean_curvature_upper_bound(1.0, r))
        np.testing.assert_allclose(flow.curve, np.tan(math.pi / 4.0 - flow.r), atol=1e-7)
        assert flow.crossings[0] == pytest.approx(math.pi / 4.0, abs=1e-4)
        assert "negative" in caplog.text
        assert mean_curvature_report(flow, profile, 1.0).verdict == Verdict.HOLDS

    def test_non_umbilic(self):
        """Test 3: umbilicity 1.5 gives H = 1/(1 + 1.5 r) < 1/(1 + r)."""
        flow = mean_curvature_flow(flat_profile(CurvatureKind.RICCI, 1.0), 1.0, umbilicity=1.5)
        assert float(flow.value_at(1.0)) == pytest.approx(0.4, abs=1e-9)
        assert float(flow.value_at(1.0)) < 0.5

    def test_blow_up(self):
        """After crossing zero the flow blows up to -inf and stops."""
        flow = mean_curvature_flow(constant_profile(CurvatureKind.RICCI, 2.0, 3.0), 1.0, n=2)
        assert flow.stop_reason == FlowStop.BLOW_UP
        assert flow.stop_radius == pytest.approx(3.0 * math.pi / 4.0, abs=0.02)

    def test_umbilicity_below_one(self):
        """|sigma|^2 >= n H^2 forces a factor of at least 1."""
        with pytest.raises(ComparisonError):
            mean_curvature_flow(flat_profile(CurvatureKind.RICCI, 1.0), 1.0, umbilicity=0.5)

    def test_negative_ricci_inapplicable(self):
        """Without the Ricci certificate the upper bound is not asserted."""
        profile = constant_profile(CurvatureKind.RICCI, -2.0, 1.0)
        flow = mean_curvature_flow(profile, 1.0)
        report = mean_curvature_report(flow, profile, 1.0)
        assert report.verdict == Verdict.INAPPLICABLE
        assert report.worst_slack < 0


@pytest.mark.unit
class TestJacobiNorm:
    """Tests for jacobi_norm."""

    def test_flat_equality(self):
        """|E(r)| = 1 + H0 r along the flat equality flow."""
        flow = jacobi_norm(flat_profile(CurvatureKind.SECTIONAL, 3.0), 2.0)
        np.testing.assert_allclose(flow.values[:, 1], 1.0 + 2.0 * flow.r, rtol=1e-8)

    def test_negative_curvature_grows_faster(self):
        """sec = -1 with f0 = 1 gives |E| = e^r > 1 + r."""
        flow = jacobi_norm(constant_profile(CurvatureKind.SECTIONAL, -1.0, 2.0), 1.0)
        np.testing.assert_allclose(flow.values[:, 1], np.exp(flow.r), rtol=1e-8)
