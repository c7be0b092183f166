"""Exception hierarchy shared by every module.

Each class carries the process exit code the CLI maps it to.
"""


class HyperGTError(Exception):
    exit_code = 1


class PreconditionError(HyperGTError, ValueError):
    """An input violates a documented precondition."""

    exit_code = 2


class ParseError(PreconditionError):
    """Malformed hypergraph or matrix text."""


class InconsistencyError(HyperGTError):
    """Oracle answers are incompatible with every candidate hyperedge,
    or a certified guarantee was observed to fail."""

    exit_code = 3


class AdaptivityError(InconsistencyError):
    """A batch was submitted for a stage that has already been answered."""


class BudgetExceeded(HyperGTError):
    """A randomized construction or sampler ran out of attempts."""

    exit_code = 4

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
