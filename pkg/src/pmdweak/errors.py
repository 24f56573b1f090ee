"""Exception hierarchy shared by all pmdweak modules."""


class PmdWeakError(Exception):
    """Base class for every error raised by pmdweak."""


class ValidationError(PmdWeakError, ValueError):
    """An argument violates a documented precondition."""


class AnnihilationError(PmdWeakError, ArithmeticError):
    """Post-selection removes (numerically) all of the light."""


class DivergentWeakValueError(PmdWeakError, ArithmeticError):
    """A weak-value or pointer quotient has a vanishing denominator."""


class TopologyError(PmdWeakError, ValueError):
    """The network structure is not supported by the requested computation."""
