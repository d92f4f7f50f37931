"""Exception hierarchy shared by all modules."""


class VerificationError(Exception):
    """Base class for domain errors raised by tripleverify."""


class NonDivisible(VerificationError, ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class DivisionByZero(VerificationError, ZeroDivisionError):
    pass


class PoleEncountered(VerificationError, ArithmeticError):
    """A Gamma-type factor was evaluated at (or numerically on top of) a pole."""


class ConvergenceViolation(VerificationError, ValueError):
    """Exponents lie outside the region where the integral converges."""


class DepthTooSmall(VerificationError, ValueError):
    """Oracle truncation depth cannot isolate the singular point."""


class RouteMismatch(VerificationError, AssertionError):
    """Two independent evaluation routes disagreed on an exact value."""


class ConfigError(VerificationError, ValueError):
    pass


class NoConvergence(VerificationError, RuntimeError):
    """Quadrature refinement stopped before reaching tolerance.

    The best available estimate is carried on ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
