"""Exception types shared by the numerical modules."""


class DomainError(ValueError):
    """Input lies outside the region where an evaluator is defined."""


class PoleError(DomainError):
    """Input sits on a pole (Gamma at a non-positive integer, zeta at s = 1)."""


class PreconditionError(ValueError):
    """A stated precondition of an operation does not hold.

    ``max_t`` is set by the first-approximation evaluator to the largest
    admissible height for the cutoff that was requested.
    """

    def __init__(self, message, max_t=None):
        super().__init__(message)
        self.max_t = max_t


class AccuracyError(RuntimeError):
    """A quadrature or series did not reach its target inside its budget.

    ``partial`` carries whatever result was available when the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EvaluationError(ArithmeticError):
    """An integrand returned non-finite values inside the integration range."""
