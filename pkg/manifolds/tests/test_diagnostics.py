"""Tests for curvature diagnostics of warped models."""

import math

import numpy as np
import pytest

from manifolds.exceptions import ManifoldError, PoleEvaluationError
from manifolds.services.constructions import build_model, exterior_equality_model
from manifolds.services.diagnostics import (
    derivative_defect,
    has_nonnegative_ricci,
    is_cartan_hadamard,
    radial_curvatures,
    ricci_radial_lower,
    sphere_mean_curvature,
)


@pytest.mark.unit
class TestRadialCurvatures:
    """Tests for radial_curvatures."""

    def test_flat(self, euclidean_model):
        """Test 1: g(t) = t is flat."""
        curvatures = radial_curvatures(euclidean_model, 1.0)
        assert curvatures.sec_radial == 0.0
        assert curvatures.sec_tangent == 0.0

    def test_hyperbolic(self, hyperbolic_model):
        """Test 2: g(t) = sinh t has constant curvature -1."""
        curvatures = radial_curvatures(hyperbolic_model, 1.0)
        assert curvatures.sec_radial == pytest.approx(-1.0, abs=1e-12)
        assert curvatures.sec_tangent == pytest.approx(-1.0, abs=1e-12)

    def test_splice_tail_is_radially_flat(self, splice_model):
        """Test 3: beyond t0 the spliced profile is affine, so sec_radial = 0."""
        curvatures = radial_curvatures(splice_model, np.array([1.0, 1.5, 4.0]))
        np.testing.assert_allclose(curvatures.sec_radial, 0.0, atol=1e-15)
        # g(1.5) = 3 and g' = 3 on the tail.
        assert curvatures.sec_tangent[1] == pytest.approx(-8.0 / 9.0)

    def test_pole_uses_limit(self, hyperbolic_model, caplog):
        """At the pole the limit is returned and a warning logged."""
        curvatures = radial_curvatures(hyperbolic_model, 0.0)
        assert curvatures.sec_radial == pytest.approx(-1.0, abs=1e-8)
        assert curvatures.sec_tangent == pytest.approx(-1.0, abs=1e-8)
        assert "pole" in caplog.text

    def test_outside_domain(self):
        """Spherical models end at pi/k."""
        with pytest.raises(ManifoldError):
            radial_curvatures(build_model("spherical", 2), 4.0)


@pytest.mark.unit
class TestCurvatureCertificates:
    """Tests for the sampled sign certificates."""

    def test_cartan_hadamard_models(self, euclidean_model, hyperbolic_model, splice_model):
        """Flat, hyperbolic and spliced models are Cartan-Hadamard."""
        assert is_cartan_hadamard(euclidean_model) is True
        assert is_cartan_hadamard(hyperbolic_model) is True
        assert is_cartan_hadamard(splice_model) is True

    def test_sphere_is_not_cartan_hadamard(self):
        """g = sin t has positive curvature."""
        assert is_cartan_hadamard(build_model("spherical", 2)) is False

    def test_sample_count_override(self, hyperbolic_model):
        """An explicit sample count is honoured."""
        assert is_cartan_hadamard(hyperbolic_model, sample_count=64) is True

    def test_ricci_lower_bounds(self, euclidean_model, hyperbolic_model):
        """Flat gives 0, hyperbolic gives -n."""
        assert ricci_radial_lower(euclidean_model) == 0.0
        assert ricci_radial_lower(hyperbolic_model) == pytest.approx(-2.0, abs=1e-6)
        assert has_nonnegative_ricci(hyperbolic_model) is False

    def test_concave_profile_has_nonnegative_ricci(self):
        """g = t (1 + t^2)^(-1/4) is concave with g' <= 1."""
        model = build_model("concave", 2)
        assert ricci_radial_lower(model) >= 0.0
        assert has_nonnegative_ricci(model) is True
        assert is_cartan_hadamard(model) is False

    def test_sphere_ricci(self):
        """The round sphere has Ric = n."""
        assert ricci_radial_lower(build_model("spherical", 3)) == pytest.approx(3.0, rel=1e-3)

    def test_exterior_models_rejected(self):
        """Certificates are defined for closed models."""
        model = exterior_equality_model(2, 1.0, 4.0 * math.pi)
        with pytest.raises(ManifoldError, match="closed models"):
            is_cartan_hadamard(model)


@pytest.mark.unit
class TestSphereMeanCurvature:
    """Tests for sphere_mean_curvature."""

    def test_euclidean(self, euclidean_model):
        """Test 1: spheres of radius R have curvature 1/R."""
        assert sphere_mean_curvature(euclidean_model, 2.0) == pytest.approx(0.5)

    def test_hyperbolic(self, hyperbolic_model):
        """Test 2: at t = 1 the curvature is coth 1."""
        assert sphere_mean_curvature(hyperbolic_model, 1.0) == pytest.approx(1.3130352854993312)

    def test_splice_at_t0(self, splice_model):
        """Test 3: the spliced model has H0 at t0."""
        assert sphere_mean_curvature(splice_model, 1.0) == pytest.approx(2.0, rel=1e-12)

    def test_pole_rejected(self, euclidean_model):
        """Spheres degenerate at the pole."""
        with pytest.raises(PoleEvaluationError):
            sphere_mean_curvature(euclidean_model, 0.0)

    @pytest.mark.parametrize("profile,parameters", [
        ("hyperbolic", {"curvature": -1.0}),
        ("hyperbolic", {"curvature": -9.0}),
        ("concave", {}),
        ("remark-splice", {"t0": 1.0, "h0": 2.0}),
    ])
    def test_pole_asymptotics(self, profile, parameters):
        """t * g'(t)/g(t) tends to 1 at the pole."""
        model = build_model(profile, 2, parameters)
        ratios = [t * sphere_mean_curvature(model, t) for t in (1e-3, 1e-4)]
        assert abs(ratios[1] - 1.0) <= abs(ratios[0] - 1.0) + 1e-12
        assert ratios[1] == pytest.approx(1.0, abs=1e-6)

    def test_riccati_consequence(self, hyperbolic_model, splice_model):
        """On Cartan-Hadamard models g'/g(t) >= H/(1 + H (t - t0)) with H = g'/g(t0)."""
        t0 = 1.0
        t = np.linspace(t0, 10.0, 200)
        for model in (hyperbolic_model, splice_model):
            h = sphere_mean_curvature(model, t0)
            bound = h / (1.0 + h * (t - t0))
            assert np.all(sphere_mean_curvature(model, t) >= bound - 1e-12)

    def test_exterior_mean_curvature_profile(self):
        """The exterior equality model has H(r) = H0 / (1 + H0 r)."""
        model = exterior_equality_model(2, 2.0, 1.0)
        r = np.array([0.0, 0.5, 3.0])
        np.testing.assert_allclose(sphere_mean_curvature(model, r), 2.0 / (1.0 + 2.0 * r))


@pytest.mark.unit
class TestDerivativeConsistency:
    """Derivative evaluators agree with finite differences of g."""

    def test_hyperbolic(self, hyperbolic_model):
        """Analytic profiles agree to 1e-6."""
        defect = derivative_defect(hyperbolic_model, [0.5, 1.0, 2.0, 5.0])
        assert defect.first <= 1e-6
        assert defect.second <= 1e-6

    def test_euclidean(self, euclidean_model):
        """The flat profile has zero second derivative."""
        defect = derivative_defect(euclidean_model, [0.1, 1.0, 10.0])
        assert defect.first <= 1e-6
        assert defect.second <= 1e-6

    def test_splice_and_concave(self, splice_model):
        """Piecewise and rational profiles agree away from the splice knots."""
        assert derivative_defect(splice_model, [0.25, 0.7, 0.9, 2.0]).first <= 1e-6
        assert derivative_defect(splice_model, [0.25, 0.7, 0.9, 2.0]).second <= 1e-4
        concave = build_model("concave", 2)
        assert derivative_defect(concave, [0.7, 3.0]).first <= 1e-6
        assert derivative_defect(concave, [0.7, 3.0]).second <= 1e-4
