"""Exception types shared across the package."""


class CSKError(Exception):
    """Base class for all errors raised by cskbool."""


class DomainError(CSKError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ConvergenceError(CSKError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""


class RootIsolationError(ConvergenceError):
    """Real roots could not be isolated or a non-real root was detected."""
