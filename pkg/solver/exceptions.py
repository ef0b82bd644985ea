"""Custom exceptions for the solver app."""


class SolverError(Exception):
    """Base error for grids, Dirichlet solves and grid capacities."""
    pass


class DomainTooThinError(SolverError):
    """Raised when fewer than three grid cells separate the body from the outer sphere."""
    pass


class NonConvergenceError(SolverError):
    """Raised when the linear solve misses its residual target within the iteration budget."""
    pass


class OffsetOutsideDomainError(SolverError):
    """Raised when a flux surface is outside [2h, 5h] or leaves the solved region."""
    pass


class GridMismatchError(SolverError):
    """Raised when two potentials do not share spacing, layout and alignment."""
    pass


class BudgetExhaustedError(SolverError):
    """Raised on request when an exhaustion sequence stopped before converging."""
    pass
