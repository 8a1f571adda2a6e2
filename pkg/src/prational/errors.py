"""Shared exception types."""


class NotSquarefreeError(ValueError):
    """Polynomial (or integer) has a repeated factor where a squarefree one is required."""


class NotAUnitError(ValueError):
    """Minimal polynomial does not define an algebraic unit (|constant term| != 1)."""


class NonConvergenceError(RuntimeError):
    """Certified refinement failed to separate/decide below the precision cap."""


class RamifiedUnsupportedError(ValueError):
    """Operation requested at a ramified prime; ramified primes are excluded."""


class PartialFactorizationError(RuntimeError):
    """A complete factorization was required but the engine gave up on a cofactor."""


class TooLargeDiscriminantError(ValueError):
    """Class-number search exceeded its certified bound; supply the class number explicitly."""


class InsufficientRecordsError(ValueError):
    """Scan records do not cover the window required by the count report."""
