"""Custom exceptions for the radial app."""


class RadialCapacityError(Exception):
    """Base error for radial potentials, quadrature and capacities."""
    pass


class InvalidDimensionError(RadialCapacityError):
    """Raised when a closed-form potential is requested for n < 2."""
    pass


class QuadratureDivergenceError(RadialCapacityError):
    """Raised when the integrand is not finite on a finite interval."""
    pass


class InconclusiveTailError(RadialCapacityError):
    """Raised when the tail test cannot decide convergence within its block budget."""
    pass
