"""Exception hierarchy shared by the library and the CLI.

The CLI maps these to exit codes: invalid arguments exit 1, exceeded
ranges/budgets and failed constructions exit 2.
"""


class GpflabError(Exception):
    """Base class for all gpflab errors."""


class InvalidArgumentError(GpflabError):
    """An argument violates a documented precondition."""


class RangeBudgetError(GpflabError):
    """A request exceeds a documented range or compute budget."""


class ConstructionFailedError(GpflabError):
    """A search or construction could not produce a result."""
