"""Exception types shared across the package."""


class SsvdError(Exception):
    """Base class for all package errors."""


class ValidationError(SsvdError, ValueError):
    """Bad input: shapes, budgets, indices, file contents."""


class NumericError(SsvdError, ArithmeticError):
    """A numerical kernel failed (non-convergence, non-finite values)."""


class CapExceededError(SsvdError):
    """An enumeration or size cap would be exceeded."""
