"""Exception hierarchy shared by the library and the CLI.

The CLI maps InadmissibleParameters to exit code 2 and DegenerateFactor
(and its subclasses) to exit code 3.
"""


class InstantonError(Exception):
    """Base class for all library errors."""


class InadmissibleParameters(InstantonError, ValueError):
    """Parameters violate a hypothesis of the formula being evaluated."""


class RegimeViolation(InadmissibleParameters):
    pass


class BudgetExceeded(InstantonError, ValueError):
    """A quadrature grid would exceed the configured point budget."""


class CapExceeded(InstantonError, ValueError):
    """A Verma-module computation would leave the allowed level range."""


class DegenerateFactor(InstantonError, ArithmeticError):
    """A product factor vanished (within tolerance) where it must not."""


class GridViolation(DegenerateFactor):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class PoleHit(DegenerateFactor):
    pass


class SingularKacMatrix(DegenerateFactor):
    def __init__(self, message, distance):
        super().__init__(message)
        self.distance = distance
