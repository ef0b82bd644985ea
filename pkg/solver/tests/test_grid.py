"""Tests for lattice classification and boundary cuts."""

import numpy as np
import pytest

from capacity_lab.choices import NodeClass, SolveMode
from geometry.services.bodies import Ball, Ellipsoid
from solver.exceptions import DomainTooThinError, SolverError
from solver.services.grid import build_grid, cut_fractions


@pytest.fixture(scope="module")
def ball_grid():
    """Full 3-D lattice around the unit ball, outer radius 2, h = 0.1."""
    return build_grid(Ball((0.0, 0.0, 0.0), 1.0), 2.0, 0.1, SolveMode.FULL3D)


@pytest.mark.unit
class TestBuildGrid:
    """Tests for build_grid."""

    def test_classification_matches_geometry(self, ball_grid):
        """Test 1: inside, fluid and outside nodes sit where the radii say."""
        radius = np.linalg.norm(ball_grid.points(), axis=-1)
        classes = ball_grid.classes
        assert np.all(radius[classes == NodeClass.INSIDE] <= 1.0)
        assert np.all(radius[classes == NodeClass.OUTSIDE] >= 2.0)
        fluid = ball_grid.unknown
        assert np.all((radius[fluid] > 1.0) & (radius[fluid] < 2.0))
        assert np.count_nonzero(classes == NodeClass.BOUNDARY_ADJACENT) > 0

    def test_cut_points_lie_on_the_boundaries(self, ball_grid):
        """Test 2: every cut along +x ends on the unit sphere or on the outer sphere."""
        h = ball_grid.h
        points = ball_grid.points()
        theta = ball_grid.fractions[..., 1]
        values = ball_grid.arm_values[..., 1]
        for value, radius in ((1.0, 1.0), (0.0, 2.0)):
            cut = values == value
            assert np.any(cut)
            ends = points[cut] + theta[cut, None] * h * np.array([1.0, 0.0, 0.0])
            assert np.allclose(np.linalg.norm(ends, axis=-1), radius, atol=1e-9 * h)

    def test_fractions_in_unit_interval(self, ball_grid):
        """Cut fractions lie in (0, 1]."""
        assert np.all(ball_grid.fractions > 0)
        assert np.all(ball_grid.fractions <= 1.0)

    def test_unknown_numbering(self, ball_grid):
        """Unknown nodes are numbered consecutively."""
        numbers = ball_grid.index[ball_grid.unknown]
        assert np.array_equal(numbers, np.arange(ball_grid.unknown_count))
        assert np.all(ball_grid.index[~ball_grid.unknown] == -1)

    def test_auto_mode_uses_half_plane_for_spheroid(self, spheroid):
        """A spheroid is solved on the (rho, z) half-plane along its long axis."""
        grid = build_grid(spheroid, 3.0, 0.1)
        assert grid.mode == SolveMode.AXISYM
        assert grid.ndim == 2
        assert np.allclose(np.abs(grid.direction), [0.0, 0.0, 1.0])

    def test_auto_mode_falls_back_to_full_grid(self):
        """A body without a symmetry axis gets the full lattice."""
        body = Ellipsoid((0.0, 0.0, 0.0), (0.6, 0.8, 1.0))
        assert build_grid(body, 1.5, 0.1).mode == SolveMode.FULL3D

    def test_axisym_requires_axis(self):
        """Requesting the half-plane for a triaxial body fails."""
        body = Ellipsoid((0.0, 0.0, 0.0), (0.6, 0.8, 1.0))
        with pytest.raises(SolverError):
            build_grid(body, 1.5, 0.1, SolveMode.AXISYM)

    def test_thin_domain(self, unit_ball):
        """Fewer than three cells between body and outer sphere is rejected."""
        with pytest.raises(DomainTooThinError):
            build_grid(unit_ball, 1.25, 0.1)

    def test_dimension(self):
        """Bodies outside R^3 are not solved on grids."""
        with pytest.raises(SolverError):
            build_grid(Ball((0.0, 0.0, 0.0, 0.0), 1.0), 2.0, 0.1)

    def test_spacing(self, unit_ball):
        """Non-positive spacing is rejected."""
        with pytest.raises(SolverError):
            build_grid(unit_ball, 2.0, 0.0)


@pytest.mark.unit
class TestCutFractions:
    """Tests for cut_fractions."""

    def test_linear_crossing(self):
        """A plane crossing at x = 0.3 is found at fraction 0.3."""
        start = np.zeros((4, 3))
        end = np.tile([1.0, 0.0, 0.0], (4, 1))
        theta = cut_fractions(lambda p: p[..., 0] - 0.3, start, end, 0.1)
        assert np.allclose(theta, 0.3, atol=1e-10)

    def test_reversed_sign(self):
        """Crossings from negative to positive values are found as well."""
        start = np.zeros((1, 3))
        end = np.array([[0.0, 2.0, 0.0]])
        theta = cut_fractions(lambda p: 0.5 - p[..., 1], start, end, 0.1)
        assert theta[0] == pytest.approx(0.25, abs=1e-10)

    def test_empty(self):
        """No segments, no fractions."""
        assert cut_fractions(lambda p: p[..., 0], np.zeros((0, 3)), np.zeros((0, 3)), 0.1).size == 0
