"""Tests for principal curvature estimates."""

import math

import numpy as np
import pytest

from geometry.exceptions import GeometryError
from geometry.services.bodies import Ball, parallel_body
from geometry.services.curvature import curvature_estimates, principal_curvatures, tangent_bases


@pytest.mark.unit
class TestPrincipalCurvatures:
    """Tests for principal_curvatures."""

    def test_sphere_radius_two(self):
        """Test 1: a sphere of radius 2 has curvatures (0.5, 0.5) everywhere."""
        ball = Ball((0.0, 0.0, 0.0), 2.0)
        point = np.array([2.0, 1.0, 1.5])
        point = 2.0 * point / np.linalg.norm(point)
        np.testing.assert_allclose(principal_curvatures(ball, point), [0.5, 0.5], atol=1e-6)

    def test_spheroid_pole(self, spheroid):
        """Test 2: at the pole (0, 0, 1.5) both curvatures are 1.5 / 1^2."""
        values = principal_curvatures(spheroid, [0.0, 0.0, 1.5])
        np.testing.assert_allclose(values, [1.5, 1.5], atol=1e-4)

    def test_spheroid_equator(self, spheroid):
        """At the equator the meridian curvature is 1 / 2.25 and the parallel one is 1."""
        values = principal_curvatures(spheroid, [1.0, 0.0, 0.0])
        np.testing.assert_allclose(values, [1.0 / 2.25, 1.0], atol=1e-4)

    def test_lens_rim_is_ridge(self, lens_body):
        """Test 3: at a rim point one curvature is +inf, the other 1/sqrt(0.75)."""
        values = principal_curvatures(lens_body, [0.0, math.sqrt(0.75), 0.0])
        assert values[0] == pytest.approx(1.0 / math.sqrt(0.75), rel=1e-3)
        assert math.isinf(values[1])

    def test_lens_cap_point(self, lens_body):
        """Cap points of the lens see the unit sphere."""
        values = principal_curvatures(lens_body, [-0.5, 0.0, 0.0])
        np.testing.assert_allclose(values, [1.0, 1.0], atol=1e-4)

    def test_parallel_lens_bounds(self, lens_body):
        """Curvatures of K_r are at most 1/r and at least 1/(1 + r)."""
        grown = parallel_body(lens_body, 0.5)
        rim = np.array([0.0, math.sqrt(0.75) + 0.5, 0.0])
        values = principal_curvatures(grown, rim)
        assert values[0] >= 1.0 / 1.5 - 1e-3
        assert values[1] == pytest.approx(2.0, rel=1e-3)

    def test_off_boundary_point_rejected(self, unit_ball):
        """Points off the boundary are rejected."""
        with pytest.raises(GeometryError, match="not on the boundary"):
            principal_curvatures(unit_ball, [0.5, 0.0, 0.0])

    def test_nonpositive_probe_rejected(self, unit_ball):
        """The probe must be positive."""
        with pytest.raises(GeometryError, match="positive"):
            principal_curvatures(unit_ball, [1.0, 0.0, 0.0], probe=0.0)


@pytest.mark.unit
class TestCurvatureEstimates:
    """Tests for the batch estimator."""

    def test_batch_sorted_ascending(self, spheroid):
        """Values are sorted per point and carry an uncertainty."""
        points = np.array([[0.0, 0.0, 1.5], [1.0, 0.0, 0.0], [0.0, -1.0, 0.0]])
        estimate = curvature_estimates(spheroid, points)
        assert np.all(np.diff(estimate.values, axis=-1) >= 0)
        assert np.all(estimate.uncertainty < 1e-4)
        assert np.all(estimate.regular_mask)

    def test_tangent_bases_orthonormal(self, rng):
        """Tangent frames are orthonormal and orthogonal to the normal."""
        normals = rng.normal(size=(20, 3))
        normals /= np.linalg.norm(normals, axis=-1, keepdims=True)
        frames = tangent_bases(normals)
        gram = np.einsum("mia,mib->mab", frames, frames)
        np.testing.assert_allclose(gram, np.broadcast_to(np.eye(2), gram.shape), atol=1e-12)
        np.testing.assert_allclose(np.einsum("mi,mia->ma", normals, frames), 0.0, atol=1e-12)
