"""Tests for the nested-domain monotonicity check."""

import pytest

from solver.exceptions import GridMismatchError
from solver.services.dirichlet import solve_annulus
from solver.services.monotonicity import potential_monotonicity_check


@pytest.mark.unit
class TestPotentialMonotonicityCheck:
    """Tests for potential_monotonicity_check."""

    def test_nested_domains(self, coarse_ball_potential, coarse_wide_ball_potential):
        """Test 1: the potential of the larger domain dominates, u_4 >= u_2 - 1e-8."""
        report = potential_monotonicity_check(coarse_ball_potential, coarse_wide_ball_potential)
        assert report.passed
        assert report.max_violation <= 1e-8
        assert report.common_nodes == coarse_ball_potential.grid.unknown_count

    def test_identical_domains(self, coarse_ball_potential):
        """Test 2: a potential compared with itself differs by exactly 0."""
        report = potential_monotonicity_check(coarse_ball_potential, coarse_ball_potential)
        assert report.max_violation == 0.0
        assert report.passed

    def test_swapped_arguments(self, coarse_ball_potential, coarse_wide_ball_potential):
        """Test 3: swapping the domains reports a clear violation."""
        report = potential_monotonicity_check(coarse_wide_ball_potential, coarse_ball_potential)
        assert not report.passed
        assert report.max_violation > 0.2

    def test_spacing_mismatch(self, coarse_ball_potential, unit_ball):
        """Different spacings cannot be compared node by node."""
        other = solve_annulus(unit_ball, 2.0, 0.1)
        with pytest.raises(GridMismatchError):
            potential_monotonicity_check(coarse_ball_potential, other)
