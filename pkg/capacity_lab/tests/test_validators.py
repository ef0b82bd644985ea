"""Tests for capacity_lab/validators.py."""

import math

import pytest

from capacity_lab.validators import (
    validate_finite_float,
    validate_minimum_float,
    validate_non_negative_float,
    validate_non_negative_integer,
    validate_positive_float,
    validate_positive_integer,
    validate_scenario_identifier,
)


@pytest.mark.unit
class TestValidatePositiveFloat:
    """Tests for validate_positive_float."""

    def test_valid_positive(self):
        """Should return None for a positive float."""
        assert validate_positive_float(0.02, 'h') is None

    def test_string_number(self):
        """Should accept numeric strings as scenario files may quote numbers."""
        assert validate_positive_float('1.5', 'H0') is None

    def test_zero(self):
        """Should reject zero."""
        error = validate_positive_float(0, 'H0')
        assert 'greater than zero' in error

    def test_negative(self):
        """Should reject negative values."""
        assert 'greater than zero' in validate_positive_float(-1.0, 'H0')

    def test_nan_and_inf(self):
        """Should reject non-finite values."""
        assert 'finite' in validate_positive_float(math.nan, 'H0')
        assert 'finite' in validate_positive_float(math.inf, 'H0')

    def test_boolean_rejected(self):
        """Should not treat True as the number 1."""
        assert 'real number' in validate_positive_float(True, 'H0')

    def test_garbage(self):
        """Should reject non-numeric text."""
        assert 'real number' in validate_positive_float('abc', 'H0')

    def test_none_value(self):
        """Should return None for None (optional field)."""
        assert validate_positive_float(None, 'H0') is None


@pytest.mark.unit
class TestOtherFloatValidators:
    """Tests for the non-negative, minimum and finite float validators."""

    def test_non_negative_allows_zero(self):
        """Zero offset is a valid parallel-body radius."""
        assert validate_non_negative_float(0.0, 'Offset') is None

    def test_non_negative_rejects_negative(self):
        """Inner parallel bodies are rejected."""
        assert 'cannot be negative' in validate_non_negative_float(-0.1, 'Offset')

    def test_minimum_float(self):
        """Growth factors below 1.5 are rejected."""
        assert validate_minimum_float(1.5, 'Growth', 1.5) is None
        assert 'at least 1.5' in validate_minimum_float(1.2, 'Growth', 1.5)

    def test_finite_accepts_negative(self):
        """Slack values may be negative."""
        assert validate_finite_float(-3.2, 'Slack') is None
        assert 'finite' in validate_finite_float(math.inf, 'Slack')


@pytest.mark.unit
class TestIntegerValidators:
    """Tests for integer validators."""

    def test_positive_integer(self):
        """Should accept integers above the minimum."""
        assert validate_positive_integer(64, 'Resolution', min_value=8) is None

    def test_below_minimum(self):
        """Should report the minimum."""
        assert validate_positive_integer(1, 'n', min_value=2) == 'n must be at least 2.'

    def test_float_rejected(self):
        """Should reject floats."""
        assert validate_positive_integer(1.5, 'n') == 'n must be an integer.'

    def test_non_negative_integer(self):
        """Zero is allowed, negatives are not."""
        assert validate_non_negative_integer(0, 'Count') is None
        assert 'cannot be negative' in validate_non_negative_integer(-1, 'Count')


@pytest.mark.unit
class TestValidateScenarioIdentifier:
    """Tests for validate_scenario_identifier."""

    def test_valid(self):
        """Dots, dashes and underscores are allowed."""
        assert validate_scenario_identifier('ball_thm-3.1') is None

    def test_empty(self):
        """Empty ids are rejected."""
        assert 'cannot be empty' in validate_scenario_identifier('')

    def test_spaces(self):
        """Whitespace is rejected."""
        assert 'may only contain' in validate_scenario_identifier('bad id')

    def test_too_long(self):
        """Ids longer than 100 characters are rejected."""
        assert 'maximum length' in validate_scenario_identifier('a' * 101)
