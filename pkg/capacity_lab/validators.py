"""Custom validators for the capacity toolkit.

Validators return an error message or None, so they can be collected into
an ``errors`` dict in model ``clean()`` methods and reused from serializers.
Numbers in this project are floats; non-finite values are always rejected.
"""

import math
from typing import Any, Optional


def _validate_float_threshold(
    value: Any,
    field_name: str,
    min_value: float,
    inclusive: bool,
    custom_error_msg: Optional[str] = None
) -> Optional[str]:
    """Base validator for float threshold checks.

    Args:
        value: The value to validate (can be any type, will attempt conversion).
        field_name: Name of the field being validated, used in error messages.
        min_value: Minimum allowed value.
        inclusive: If True, uses >= comparison; if False, uses > comparison.
        custom_error_msg: Optional custom error message to override defaults.

    Returns:
        Error message string if validation fails, None if validation passes.
    """
    if value is None:
        return None

    if isinstance(value, bool):
        return f"{field_name} must be a real number."

    try:
        number = float(value)
    except (TypeError, ValueError):
        return f"{field_name} must be a real number."

    if not math.isfinite(number):
        return f"{field_name} must be finite."

    if inclusive:
        if number < min_value:
            return custom_error_msg or (
                f"{field_name} cannot be negative." if min_value == 0
                else f"{field_name} must be at least {min_value}."
            )
    else:
        if number <= min_value:
            return custom_error_msg or (
                f"{field_name} must be greater than zero." if min_value == 0
                else f"{field_name} must be greater than {min_value}."
            )

    return None


def validate_positive_float(
    value: Any,
    field_name: str,
    custom_error_msg: Optional[str] = None
) -> Optional[str]:
    """Validate that a value is a finite real number strictly greater than zero.

    Used for curvature bounds, grid spacings and radii.

    Example:
        >>> validate_positive_float(0.02, "Grid spacing")
        None
        >>> validate_positive_float(0, "H0")
        'H0 must be greater than zero.'
    """
    return _validate_float_threshold(
        value, field_name, 0.0, inclusive=False, custom_error_msg=custom_error_msg
    )


def validate_non_negative_float(
    value: Any,
    field_name: str,
    custom_error_msg: Optional[str] = None
) -> Optional[str]:
    """Validate that a value is a finite real number >= 0."""
    return _validate_float_threshold(
        value, field_name, 0.0, inclusive=True, custom_error_msg=custom_error_msg
    )


def validate_minimum_float(
    value: Any,
    field_name: str,
    min_value: float,
    custom_error_msg: Optional[str] = None
) -> Optional[str]:
    """Validate that a value is a finite real number >= ``min_value``.

    Example:
        >>> validate_minimum_float(1.2, "Growth factor", 1.5)
        'Growth factor must be at least 1.5.'
    """
    return _validate_float_threshold(
        value, field_name, min_value, inclusive=True, custom_error_msg=custom_error_msg
    )


def validate_finite_float(value: Any, field_name: str) -> Optional[str]:
    """Validate that a value is a finite real number of either sign."""
    return _validate_float_threshold(value, field_name, -math.inf, inclusive=True)


def _validate_integer_threshold(
    value: Any,
    field_name: str,
    min_value: int,
    custom_error_msg: Optional[str] = None
) -> Optional[str]:
    """Base validator for integer threshold checks (inclusive)."""
    if value is None:
        return None

    if isinstance(value, bool) or not isinstance(value, int):
        return f"{field_name} must be an integer."

    if value < min_value:
        if min_value == 0:
            return custom_error_msg or f"{field_name} cannot be negative."
        return custom_error_msg or f"{field_name} must be at least {min_value}."

    return None


def validate_positive_integer(
    value: Any,
    field_name: str,
    min_value: int = 1,
    custom_error_msg: Optional[str] = None
) -> Optional[str]:
    """Validate that a value is an integer of at least ``min_value``.

    Example:
        >>> validate_positive_integer(2, "Sphere dimension", min_value=2)
        None
        >>> validate_positive_integer(1, "Sphere dimension", min_value=2)
        'Sphere dimension must be at least 2.'
        >>> validate_positive_integer(1.5, "Resolution")
        'Resolution must be an integer.'
    """
    return _validate_integer_threshold(value, field_name, min_value, custom_error_msg)


def validate_non_negative_integer(
    value: Any,
    field_name: str,
    custom_error_msg: Optional[str] = None
) -> Optional[str]:
    """Validate that a value is a non-negative integer (>= 0)."""
    return _validate_integer_threshold(value, field_name, 0, custom_error_msg)


def validate_scenario_identifier(value: Any, field_name: str = "Scenario id") -> Optional[str]:
    """Validate a scenario identifier.

    Identifiers end up as CSV cells and file names, so they are restricted to
    letters, digits, dots, dashes and underscores.

    Example:
        >>> validate_scenario_identifier("ball-thm-3.1")
        None
        >>> validate_scenario_identifier("bad id")
        'Scenario id may only contain letters, digits, dots, dashes and underscores.'
    """
    if not value:
        return f"{field_name} cannot be empty."
    if not isinstance(value, str):
        return f"{field_name} must be a string."
    if len(value) > 100:
        return f"{field_name} exceeds maximum length of 100 characters."
    allowed = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-")
    if any(char not in allowed for char in value):
        return f"{field_name} may only contain letters, digits, dots, dashes and underscores."
    return None
