"""Custom exceptions for the geometry app."""


class GeometryError(Exception):
    """Base error for body construction and boundary computations."""
    pass


class PointInsideBodyError(GeometryError):
    """Raised when a metric projection is requested for a point with sdf <= 0."""
    pass


class ProjectionNotConvergedError(GeometryError):
    """Raised when the projection iteration exceeds its budget (usually a bad sdf)."""
    pass


class NegativeOffsetError(GeometryError):
    """Raised when an inner parallel body (negative offset) is requested."""
    pass


class MeshingError(GeometryError):
    """Raised when boundary extraction cannot produce a surface."""
    pass


class RidgePointError(GeometryError):
    """Raised when curvature extrapolation over probe offsets diverges."""
    pass


class NonSmoothBodyError(GeometryError):
    """Raised when an operation needs a smooth boundary and the body is not smooth."""
    pass


class DescriptorError(GeometryError):
    """Raised when a body descriptor document is malformed.

    Attributes:
        errors: Serializer error dict, when validation produced one.
    """

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors or {}
