"""Custom exceptions for the manifolds app."""


class ManifoldError(Exception):
    """Base error for warped models and their diagnostics."""
    pass


class PoleEvaluationError(ManifoldError):
    """Raised when a quantity that blows up at the pole is requested at t = 0."""
    pass


class InfeasibleSpliceError(ManifoldError):
    """Raised when no convex profile reaches the requested affine tail (H0 * t0 < 1)."""
    pass


class ModelDescriptorError(ManifoldError):
    """Raised when a model descriptor document is malformed.

    Attributes:
        errors: Serializer error dict, when validation produced one.
    """

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors or {}
