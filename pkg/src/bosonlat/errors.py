"""Exceptions shared across the package."""


class GuardError(RuntimeError):
    """A cost guard refused an exponentially expensive computation."""


class NormalizationError(ArithmeticError):
    """An exactly computed distribution failed its unit-sum check."""
