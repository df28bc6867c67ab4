"""Exception types shared across the package."""


class ScopeError(Exception):
    """Raised when an asymptotic formula is requested outside its proven range."""


class ConvergenceError(RuntimeError):
    """Raised when a quadrature refinement stalls above the requested tolerance."""
