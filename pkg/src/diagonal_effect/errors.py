"""Semantic exception hierarchy shared by all modules."""


class DiagonalEffectError(Exception):
    """Base class for all errors raised by this package."""


class InputError(DiagonalEffectError, ValueError):
    """Input violates a contract: wrong shape, negative count, bad field."""


class SizeMismatchError(InputError):
    """Two objects that must share the table size I do not."""


class BudgetExceededError(DiagonalEffectError):
    """An exhaustive computation hit its configured resource cap.

    Raised instead of silently truncating; the caller should either raise
    the budget or switch to a sampling-based method.
    """


class ConvergenceError(DiagonalEffectError):
    """An iterative fit failed to converge within its sweep limit."""


class InvariantViolationError(DiagonalEffectError):
    """An internal consistency check failed; indicates a bug, not bad input."""
