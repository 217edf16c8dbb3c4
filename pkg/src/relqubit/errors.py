"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """Input violates an operation's precondition."""


class NumericalDegradationError(ArithmeticError):
    """A computed object drifted outside its invariant tolerance."""


class LittleGroupViolationError(NumericalDegradationError):
    """The Wigner product failed to fix the rest momentum."""
