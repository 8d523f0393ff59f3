"""Exception taxonomy for the workbench.

Exit-code mapping used by the CLI and service layers:
  2 -- input/schema errors (InputError subtree),
  3 -- mathematical precondition failures (MathError subtree),
  4 -- numerical non-convergence (NumericalError subtree).
"""


class VjpError(Exception):
    """Base class for all workbench errors."""

    exit_code = 3


class InputError(VjpError):
    """Malformed input: grammar, schema, or reference errors."""

    exit_code = 2


class ExprSyntaxError(InputError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownCoordinateError(InputError):
    pass


class SchemaError(InputError):
    pass


class MathError(VjpError):
    """A mathematical precondition of an operation failed."""

    exit_code = 3


class JetOrderExceededError(MathError):
    pass


class NonPolynomialInT(MathError):
    """The homotopy-parameter integrand is outside the exactly integrable class."""


class DivisionByZeroExpression(MathError):
    pass


class UndecidableEquality(MathError):
    """All sampling attempts hit evaluation singularities."""


class DegreeError(MathError):
    pass


class NotVariationallyTrivial(MathError):
    pass


class HelmholtzFailed(MathError):
    pass


class UnsupportedOrder(MathError):
    pass


class ChartMismatchError(MathError):
    pass


class MissingOverlapError(MathError):
    pass


class CocycleError(MathError):
    pass


class InconsistentSourceForm(MathError):
    pass


class NoRepresentativeAvailable(MathError):
    pass


class CycleNotClosed(MathError):
    pass


class SectionNotGlobal(MathError):
    pass


class PropositionViolation(MathError):
    """A certified critical section coexists with a nonzero current class.

    This cross-check failing means a bug somewhere upstream, never a valid
    mathematical state; it is raised as a hard error on purpose.
    """


class NumericalError(VjpError):
    exit_code = 4


class QuadratureNonConvergence(NumericalError):
    pass


class IntegratorStepFailure(NumericalError):
    pass
