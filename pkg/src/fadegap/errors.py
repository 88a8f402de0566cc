"""Exception types shared across the package."""

__all__ = ["ValidationError", "InternalConsistencyError"]


class ValidationError(ValueError):
    """Raised when user-supplied input violates a documented precondition."""


class InternalConsistencyError(RuntimeError):
    """Raised when two independent internal computations of the same quantity
    disagree beyond tolerance.  This signals an implementation bug, never bad
    input."""
