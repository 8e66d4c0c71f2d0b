"""Exception types shared across the package.

The CLI maps these onto its exit-code table, so algorithm code should
raise the most specific type that applies.
"""


class EquibaseError(Exception):
    """Base class for all package errors."""


class MalformedInputError(EquibaseError, ValueError):
    """Unparseable or schema-invalid input (bad ids, bad documents)."""


class InfeasibleError(EquibaseError):
    """The requested object provably does not exist for this input."""

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class PreconditionError(EquibaseError):
    """An operation was called outside its stated precondition."""


class BudgetExceededError(EquibaseError):
    """An exhaustive enumeration hit its safety budget.

    Deliberately distinct from InfeasibleError: a budget abort says
    nothing about existence.
    """


class InvariantViolationError(EquibaseError):
    """A guarantee the theory promises was observed to fail: always a bug."""
