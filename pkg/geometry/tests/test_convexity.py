"""Tests for the supporting-ball lambda-convexity check."""

import numpy as np
import pytest

from geometry.exceptions import GeometryError
from geometry.services.bodies import Ball, parallel_body
from geometry.services.convexity import lambda_convexity_check


@pytest.mark.unit
class TestLambdaConvexity:
    """Tests for lambda_convexity_check."""

    def test_unit_ball_at_one(self, unit_ball):
        """Test 1: the unit ball is 1-convex with a vanishing margin."""
        report = lambda_convexity_check(unit_ball, 1.0)
        assert report.holds is True
        assert abs(report.worst_margin) < 1e-6

    def test_unit_ball_beyond_one(self, unit_ball):
        """Test 2: the unit ball is not 1.01-convex."""
        report = lambda_convexity_check(unit_ball, 1.01)
        assert report.holds is False
        assert report.failures
        assert report.worst_margin < 0

    def test_lens_is_one_convex(self, lens_body):
        """Test 3: an intersection of unit balls is 1-convex, rim included."""
        assert lambda_convexity_check(lens_body, 1.0).holds is True

    def test_lens_fails_above_one(self, lens_body):
        """Cap points have curvature 1, so larger lambda fails."""
        assert lambda_convexity_check(lens_body, 1.05).holds is False

    def test_parallel_body_convexity(self, lens_body):
        """K_r of a 1-convex body is 1/(1 + r)-convex."""
        grown = parallel_body(lens_body, 0.5)
        assert lambda_convexity_check(grown, 1.0 / 1.5).holds is True

    def test_spheroid_monotone_in_lambda(self, spheroid):
        """Margins shrink as lambda grows, and kappa_min = 4/9 bounds the admissible lambda."""
        loose = lambda_convexity_check(spheroid, 0.3)
        tight = lambda_convexity_check(spheroid, 0.4)
        assert loose.holds is True
        assert tight.holds is True
        assert loose.worst_margin >= tight.worst_margin
        assert lambda_convexity_check(spheroid, 2.0).holds is False

    def test_higher_dimensional_ball(self):
        """Balls outside R^3 use the closed form."""
        ball = Ball(np.zeros(5), 2.0)
        assert lambda_convexity_check(ball, 0.5).holds is True
        assert lambda_convexity_check(ball, 0.6).holds is False

    @pytest.mark.parametrize("lam", [0.0, -1.0])
    def test_nonpositive_lambda_rejected(self, unit_ball, lam):
        """Lambda must be positive."""
        with pytest.raises(GeometryError, match="positive"):
            lambda_convexity_check(unit_ball, lam)
