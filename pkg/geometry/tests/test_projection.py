"""Tests for the metric projection and distance gradient."""

import math

import numpy as np
import pytest

from geometry.exceptions import PointInsideBodyError, ProjectionNotConvergedError
from geometry.services.bodies import SdfBody
from geometry.services.meshing import boundary_samples
from geometry.services.projection import (
    distance_gradient,
    finite_difference_gradient,
    metric_projection,
    project_points,
    supporting_normals,
)


def _shifted_sphere():
    centre = np.array([0.3, 0.0, 0.0])
    return SdfBody(
        lambda p: np.linalg.norm(p - centre, axis=-1) - 1.0,
        bounding_radius=1.3,
        center=centre,
        label="shifted-sphere",
    ), centre


@pytest.mark.unit
class TestMetricProjection:
    """Tests for metric_projection."""

    def test_unit_ball_radial(self, unit_ball):
        """Test 1: (2, 0, 0) projects to (1, 0, 0)."""
        np.testing.assert_allclose(metric_projection(unit_ball, [2.0, 0, 0]), [1.0, 0, 0])

    def test_distance_gradient(self, unit_ball):
        """Test 2: the distance gradient at (0, 0, 3) is (0, 0, 1)."""
        np.testing.assert_allclose(distance_gradient(unit_ball, [0, 0, 3.0]), [0, 0, 1.0], atol=1e-15)

    def test_lens_projects_to_rim(self, lens_body):
        """Test 3: (0, 0, 2) projects onto the rim circle of the lens."""
        foot = metric_projection(lens_body, [0.0, 0.0, 2.0])
        np.testing.assert_allclose(foot, [0.0, 0.0, math.sqrt(0.75)], atol=1e-10)

    def test_lens_projection_matches_dense_boundary(self, lens_body):
        """The projection is at least as close as every sampled boundary point."""
        p = np.array([0.4, 0.3, 1.7])
        foot = metric_projection(lens_body, p)
        samples = boundary_samples(lens_body, 96)
        nearest = np.min(np.linalg.norm(samples.points - p, axis=-1))
        assert np.linalg.norm(p - foot) <= nearest + 1e-9
        assert nearest - np.linalg.norm(p - foot) < 2.0 * samples.spacing

    def test_iterative_projection_for_generic_sdf(self):
        """Bodies without an exact projector use the iteration."""
        body, centre = _shifted_sphere()
        p = np.array([2.0, 1.0, -0.5])
        expected = centre + (p - centre) / np.linalg.norm(p - centre)
        np.testing.assert_allclose(metric_projection(body, p), expected, atol=1e-9)

    def test_postcondition(self, spheroid):
        """|p - q| equals sdf(p) and q lies on the boundary."""
        p = np.array([1.1, 0.9, 1.8])
        q = metric_projection(spheroid, p)
        assert np.linalg.norm(p - q) == pytest.approx(spheroid.sdf(p[None, :])[0], rel=1e-9)
        assert abs(spheroid.sdf(q[None, :])[0]) <= 1e-9

    def test_inside_point_rejected(self, unit_ball):
        """Points with sdf <= 0 are rejected."""
        with pytest.raises(PointInsideBodyError):
            metric_projection(unit_ball, [0.5, 0, 0])
        with pytest.raises(PointInsideBodyError):
            metric_projection(unit_ball, [1.0, 0, 0])

    def test_bad_sdf_rejected(self):
        """A function that is not a distance fails the projection checks."""
        body = SdfBody(lambda p: 0.5 * (np.linalg.norm(p, axis=-1) - 1.0), bounding_radius=1.0)
        with pytest.raises(ProjectionNotConvergedError):
            metric_projection(body, [3.0, 0.0, 0.0])


@pytest.mark.unit
class TestProjectionProperties:
    """Sampled properties of the projection."""

    def test_contraction(self, spheroid, rng):
        """|xi(p) - xi(q)| <= |p - q| on sampled exterior pairs."""
        points = rng.normal(size=(400, 3))
        points = 3.0 * points / np.linalg.norm(points, axis=-1, keepdims=True)
        feet = project_points(spheroid, points)
        p, q = points[:200], points[200:]
        fp, fq = feet[:200], feet[200:]
        assert np.all(
            np.linalg.norm(fp - fq, axis=-1) <= np.linalg.norm(p - q, axis=-1) + 1e-9
        )

    def test_lens_contraction(self, lens_body, rng):
        """The contraction property holds at the non-smooth rim as well."""
        points = rng.uniform(-2.0, 2.0, size=(300, 3))
        points = points[lens_body.sdf(points) > 0]
        feet = project_points(lens_body, points)
        half = len(points) // 2
        assert np.all(
            np.linalg.norm(feet[:half] - feet[half:2 * half], axis=-1)
            <= np.linalg.norm(points[:half] - points[half:2 * half], axis=-1) + 1e-9
        )

    def test_gradient_identity(self, spheroid, rng):
        """Finite-difference gradient of the distance equals (p - xi(p)) / r."""
        points = rng.normal(size=(50, 3))
        points = 2.5 * points / np.linalg.norm(points, axis=-1, keepdims=True)
        gradient = finite_difference_gradient(spheroid.sdf, points, 1e-4)
        feet = project_points(spheroid, points)
        expected = (points - feet) / np.linalg.norm(points - feet, axis=-1, keepdims=True)
        np.testing.assert_allclose(gradient, expected, atol=1e-6)

    def test_supporting_normal_at_rim(self, lens_body):
        """At the rim the supporting normal bisects the two cap normals."""
        normal = supporting_normals(lens_body, np.array([[0.0, math.sqrt(0.75), 0.0]]))[0]
        np.testing.assert_allclose(normal, [0.0, 1.0, 0.0], atol=1e-8)
