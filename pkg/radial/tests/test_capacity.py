"""Tests for ball capacities, warped capacities and the radial comparison reports."""

import math

import numpy as np
import pytest

from capacity_lab.choices import BoundDirection, Verdict
from manifolds.services.constructions import build_model, exterior_equality_model, remark_example_model
from radial.exceptions import InvalidDimensionError, RadialCapacityError
from radial.services.capacity import (
    ball_capacity_euclidean,
    equality_check_remark,
    hyperbolicity_indicator,
    inverse_warping_integral,
    isoperimetric_constant,
    radial_comparison,
    radial_energy,
    warped_ball_capacity,
    warped_ball_potential,
    warped_laplacian,
)

HYPERBOLIC_UNIT_BALL = 4.0 * math.pi * math.sinh(1.0) * math.e


@pytest.mark.unit
class TestBallCapacityEuclidean:
    """Tests for ball_capacity_euclidean."""

    def test_unit_ball(self):
        """Test 1: n = 2, H0 = 1 gives 4 pi."""
        assert ball_capacity_euclidean(2, 1.0) == pytest.approx(4.0 * math.pi)

    def test_half_ball(self):
        """Test 2: n = 2, H0 = 2 gives 2 pi."""
        assert ball_capacity_euclidean(2, 2.0) == pytest.approx(2.0 * math.pi)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_scaling(self, n):
        """Test 3: H0 -> H0/s multiplies the capacity by s^(n-1)."""
        s = 3.0
        assert ball_capacity_euclidean(n, 1.5 / s) == pytest.approx(s ** (n - 1) * ball_capacity_euclidean(n, 1.5))

    def test_invalid_dimension(self):
        """The plane is parabolic."""
        with pytest.raises(InvalidDimensionError):
            ball_capacity_euclidean(1, 1.0)

    def test_isoperimetric_constant(self):
        """R^3 gives (36 pi)^(1/3); the plane gives 2 sqrt(pi)."""
        assert isoperimetric_constant(2) == pytest.approx((36.0 * math.pi) ** (1.0 / 3.0))
        assert isoperimetric_constant(1) == pytest.approx(2.0 * math.sqrt(math.pi))


@pytest.mark.unit
class TestWarpedBallCapacity:
    """Tests for warped_ball_capacity."""

    def test_concentric_spheres(self, euclidean_model):
        """Test 1: g = t, t0 = 1, t1 = 2 gives 8 pi."""
        assert warped_ball_capacity(euclidean_model, 1.0, 2.0) == pytest.approx(8.0 * math.pi, rel=1e-9)

    def test_euclidean_ball(self, euclidean_model):
        """Test 2: the unit ball of R^3 has capacity 4 pi."""
        assert warped_ball_capacity(euclidean_model, 1.0) == pytest.approx(4.0 * math.pi, rel=1e-12)

    def test_hyperbolic_ball(self, hyperbolic_model):
        """Test 3: the unit geodesic ball of H^3 has capacity 4 pi sinh(1) e."""
        capacity = warped_ball_capacity(hyperbolic_model, 1.0)
        assert capacity == pytest.approx(HYPERBOLIC_UNIT_BALL, rel=1e-8)
        assert capacity == pytest.approx(40.14, abs=5e-3)

    def test_domain_monotonicity(self, hyperbolic_model, splice_model):
        """Capacity decreases in the outer radius towards the whole-model value."""
        outer = [1.25, 1.5, 2.0, 4.0, 8.0, 16.0]
        for model in (hyperbolic_model, splice_model):
            values = [warped_ball_capacity(model, 1.0, t1) for t1 in outer]
            limit = warped_ball_capacity(model, 1.0)
            assert all(a >= b for a, b in zip(values, values[1:]))
            assert values[-1] >= limit
            assert values[-1] == pytest.approx(limit, rel=0.1)

    def test_parabolic_models(self):
        """g = t with n = 1 and the concave profile with n = 2 have zero capacity."""
        assert warped_ball_capacity(build_model("euclidean", 1), 1.0) == 0.0
        assert warped_ball_capacity(build_model("concave", 2), 1.0) == 0.0

    def test_compact_model(self):
        """The round sphere is parabolic: the integral reaches the antipode."""
        sphere = build_model("spherical", 2)
        assert inverse_warping_integral(sphere, 1.0).divergent is True
        assert warped_ball_capacity(sphere, 1.0) == 0.0
        assert warped_ball_capacity(sphere, 1.0, 2.0) > 0.0

    def test_exterior_model(self):
        """The exterior equality model n = 3, H0 = 2 has flux 4 per unit area."""
        model = exterior_equality_model(3, 2.0, 1.0)
        assert warped_ball_capacity(model, 0.0) == pytest.approx(4.0, rel=1e-12)
        potential = warped_ball_potential(model, 0.0)
        assert float(potential.derivative(0.0)) == pytest.approx(-4.0, rel=1e-12)

    def test_invalid_radii(self, euclidean_model):
        """The pole and reversed radii are rejected."""
        with pytest.raises(RadialCapacityError, match="not interior"):
            warped_ball_capacity(euclidean_model, 0.0)
        with pytest.raises(RadialCapacityError, match="exceed"):
            warped_ball_capacity(euclidean_model, 2.0, 1.0)


@pytest.mark.unit
class TestHyperbolicityIndicator:
    """Tests for hyperbolicity_indicator."""

    def test_hyperbolic_models(self, euclidean_model, hyperbolic_model):
        """Test 1: R^3 and H^3 carry sets of positive capacity."""
        assert hyperbolicity_indicator(euclidean_model) is True
        assert hyperbolicity_indicator(hyperbolic_model) is True

    def test_plane(self):
        """Test 2: g = t with n = 1 is parabolic."""
        assert hyperbolicity_indicator(build_model("euclidean", 1)) is False

    def test_sphere(self):
        """Compact models are parabolic."""
        assert hyperbolicity_indicator(build_model("spherical", 2)) is False

    def test_exterior_rejected(self):
        """The indicator is defined for closed models."""
        with pytest.raises(RadialCapacityError):
            hyperbolicity_indicator(exterior_equality_model(2, 1.0, 1.0))


@pytest.mark.unit
class TestPotentialIdentities:
    """Boundary values, harmonicity and the flux-energy identity."""

    def test_boundary_values(self, euclidean_model):
        """u(t0) = 1, u(t1) = 0 and u matches 2/t - 1 between concentric spheres."""
        potential = warped_ball_potential(euclidean_model, 1.0, 2.0)
        assert float(potential(0.0)) == pytest.approx(1.0)
        assert float(potential(1.0)) == pytest.approx(0.0, abs=1e-9)
        assert float(potential(0.5)) == pytest.approx(1.0 / 3.0, rel=1e-9)

    def test_harmonic(self, hyperbolic_model, splice_model):
        """The radial Laplacian of the equilibrium potential vanishes."""
        r = np.array([0.0, 0.3, 1.0, 2.5])
        for model in (hyperbolic_model, splice_model):
            potential = warped_ball_potential(model, 1.0)
            values = warped_laplacian(model, potential, r)
            scale = np.abs(potential.second_derivative(r)) + 1.0
            np.testing.assert_allclose(values / scale, 0.0, atol=1e-8)

    def test_nonincreasing(self, hyperbolic_model):
        """Sampled potentials decrease."""
        potential = warped_ball_potential(hyperbolic_model, 1.0, 3.0)
        values = potential(np.linspace(0.0, 2.0, 21))
        assert np.all(np.diff(values) <= 1e-12)

    def test_flux_energy_identity(self, euclidean_model, hyperbolic_model, splice_model):
        """The Dirichlet energy equals the boundary flux."""
        cases = [
            (euclidean_model, 1.0, 2.0),
            (hyperbolic_model, 1.0, math.inf),
            (splice_model, 1.0, math.inf),
        ]
        for model, t0, t1 in cases:
            assert radial_energy(model, t0, t1) == pytest.approx(warped_ball_capacity(model, t0, t1), rel=1e-6)

    def test_parabolic_has_no_potential(self):
        """No equilibrium potential exists on a parabolic model."""
        with pytest.raises(RadialCapacityError, match="parabolic"):
            warped_ball_potential(build_model("euclidean", 1), 1.0)


@pytest.mark.unit
class TestEqualityCheck:
    """Tests for equality_check_remark."""

    def test_splice_equality(self, splice_model):
        """Test 1: t0 = 1, H0 = 2, n = 2 reaches equality."""
        report = equality_check_remark(splice_model, 1.0, 2.0)
        assert report.verdict == Verdict.EQUALITY
        assert report.computed_curve[0] == pytest.approx(18.0 * math.pi, rel=1e-8)
        assert report.bound_curve[0] == pytest.approx(18.0 * math.pi, rel=1e-12)

    def test_euclidean_equality(self):
        """Test 2: the trivial splice is the Euclidean ball."""
        report = equality_check_remark(remark_example_model(1.0, 1.0), 1.0)
        assert report.verdict == Verdict.EQUALITY
        assert report.details["capacity_area_ratio"][0] == pytest.approx(1.0)

    def test_hyperbolic_strict(self, hyperbolic_model):
        """Test 3: the hyperbolic ball beats the bound 2 pi sinh 2 with a positive slack."""
        report = equality_check_remark(hyperbolic_model, 1.0)
        assert report.bound_curve[0] == pytest.approx(2.0 * math.pi * math.sinh(2.0), rel=1e-10)
        assert report.verdict == Verdict.HOLDS
        assert report.worst_slack == pytest.approx(HYPERBOLIC_UNIT_BALL - 2.0 * math.pi * math.sinh(2.0), rel=1e-6)

    def test_higher_dimension_splice(self):
        """Equality holds in every fiber dimension."""
        model = remark_example_model(1.0, 3.0, n=4)
        assert equality_check_remark(model, 1.0).verdict == Verdict.EQUALITY


@pytest.mark.unit
class TestRadialComparison:
    """Tests for the radial-scale capacity sandwich."""

    def test_euclidean_sandwich(self, euclidean_model):
        """Flat space is extremal for both bounds."""
        lower, upper = radial_comparison(euclidean_model, [0.5, 1.0, 2.0])
        assert lower.direction == BoundDirection.LOWER
        assert upper.direction == BoundDirection.UPPER
        assert lower.verdict == Verdict.EQUALITY
        assert upper.verdict == Verdict.EQUALITY

    def test_cartan_hadamard_models(self, hyperbolic_model, splice_model):
        """Cartan-Hadamard models satisfy the lower bound; the upper one is gated off."""
        for model in (hyperbolic_model, splice_model):
            lower, upper = radial_comparison(model, [0.5, 1.0, 2.0])
            assert lower.verdict in (Verdict.HOLDS, Verdict.EQUALITY)
            assert upper.verdict == Verdict.INAPPLICABLE

    def test_nonnegative_ricci_model(self, caplog):
        """The concave profile satisfies the upper bound; the lower one is gated off."""
        model = build_model("concave", 3)
        lower, upper = radial_comparison(model, 1.0)
        assert upper.verdict == Verdict.HOLDS
        assert lower.verdict == Verdict.INAPPLICABLE
        assert "inapplicable" in caplog.text
