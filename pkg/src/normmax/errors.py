"""Exception types raised by the numerical routines."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class DegenerateScaleError(DomainError):
    """A norming scale would be zero or negative."""


class InvalidPairError(DomainError):
    """A norming pair cannot be used to build a search bracket."""


class ConvergenceError(ArithmeticError):
    """An iterative solver did not meet its stopping rule."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature exceeded its subdivision depth."""


class NoRootError(ArithmeticError):
    """No sign change was found for a scalar equation."""
