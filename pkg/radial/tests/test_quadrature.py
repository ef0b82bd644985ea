"""Tests for adaptive Simpson and the dyadic tail integrator."""

import math

import pytest

from radial.exceptions import QuadratureDivergenceError, RadialCapacityError
from radial.services.quadrature import adaptive_simpson, tail_integral


@pytest.mark.unit
class TestAdaptiveSimpson:
    """Tests for adaptive_simpson."""

    def test_sine(self):
        """Test 1: int_0^pi sin = 2."""
        result = adaptive_simpson(math.sin, 0.0, math.pi)
        assert result.value == pytest.approx(2.0, abs=1e-10)
        assert result.converged is True

    def test_reversed_bounds(self):
        """Swapping the bounds flips the sign."""
        assert adaptive_simpson(math.exp, 1.0, 0.0).value == pytest.approx(1.0 - math.e, rel=1e-10)

    def test_empty_interval(self):
        """A degenerate interval integrates to zero without evaluations."""
        result = adaptive_simpson(math.exp, 2.0, 2.0)
        assert result.value == 0.0
        assert result.evaluations == 0

    def test_non_finite_integrand(self):
        """Infinite samples are reported, not summed."""
        with pytest.raises(QuadratureDivergenceError):
            adaptive_simpson(lambda x: math.inf if x == 0 else 1.0 / x, 0.0, 1.0)

    def test_depth_limit(self, caplog):
        """A tiny depth budget leaves the result unconverged and logs a warning."""
        result = adaptive_simpson(lambda x: math.sin(50.0 * x), 0.0, 10.0, max_depth=2)
        assert result.converged is False
        assert "depth limit" in caplog.text


@pytest.mark.unit
class TestTailIntegral:
    """Tests for tail_integral."""

    def test_power_law(self):
        """Test 1: int_1^inf s^-2 = 1."""
        result = tail_integral(lambda s: s ** -2, 1.0)
        assert result.divergent is False
        assert result.value == pytest.approx(1.0, rel=1e-9)

    def test_exponential(self):
        """Test 2: int_1^inf e^-s = 1/e."""
        result = tail_integral(lambda s: math.exp(-s), 1.0)
        assert result.value == pytest.approx(math.exp(-1.0), rel=1e-9)

    def test_harmonic_tail_diverges(self):
        """Test 3: int^inf 1/s diverges."""
        result = tail_integral(lambda s: 1.0 / s, 1.0)
        assert result.divergent is True
        assert result.value == math.inf

    def test_non_positive_start(self):
        """The dyadic blocks need a positive start."""
        with pytest.raises(RadialCapacityError):
            tail_integral(lambda s: s ** -2, 0.0)
