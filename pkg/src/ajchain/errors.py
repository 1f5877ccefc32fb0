"""Exception hierarchy shared by the library and the command line."""


class ParameterError(ValueError):
    """Input lies outside the domain where a quantity is defined."""


class PoleError(ParameterError):
    """A closed-form expression hits a pole or a vanishing denominator."""


class NumericalError(ArithmeticError):
    """A numerical procedure failed to reach its accuracy target."""


class ConvergenceError(NumericalError):
    """An iterative or series evaluation did not converge."""


class QuadratureError(NumericalError):
    """A quadrature rule could not be built or failed a self-check."""
