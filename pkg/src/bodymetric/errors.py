"""Exception types shared across the package."""


class BodyMetricError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateBody(BodyMetricError, ValueError):
    """Input describes a set with zero area/volume."""


class TooFewPoints(BodyMetricError, ValueError):
    pass


class DimensionMismatch(BodyMetricError, ValueError):
    pass


class NotUnimodular(BodyMetricError, ValueError):
    """Integer matrix whose determinant is not +1 or -1."""


class IrrationalDirection(BodyMetricError, ValueError):
    """Edge direction that cannot be represented by a rational vector."""


class UnboundedBody(BodyMetricError, ValueError):
    pass


class InputError(BodyMetricError, ValueError):
    """Malformed body or group-element file."""


class BudgetExceeded(BodyMetricError):
    """Search could not certify its answer within the configured budget.

    The best (heuristic) result found so far is available as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
