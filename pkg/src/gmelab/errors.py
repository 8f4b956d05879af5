"""Shared exception types.

The CLI maps these onto exit codes: file problems -> 1, violated
preconditions -> 2, solver nonconvergence -> 3.
"""


class QstFormatError(ValueError):
    """A .qst file could not be parsed or failed a load-time check."""


class PreconditionError(ValueError):
    """Operation inputs violate a documented precondition."""


class NonconvergenceError(RuntimeError):
    """An iterative routine exhausted its budget without converging."""
