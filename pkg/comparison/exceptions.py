"""Custom exceptions for the comparison app."""


class ComparisonError(Exception):
    """Base error for curvature profiles and comparison flows."""
    pass


class ProfileKindError(ComparisonError):
    """Raised when a flow receives a profile of the wrong kind (sectional vs ricci)."""
    pass


class DomainMismatchError(ComparisonError):
    """Raised when a radius lies outside the domain of a potential or a sampled profile."""
    pass
