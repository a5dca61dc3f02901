"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`BetaShiftError`.
The CLI maps :class:`DomainError` to exit code 2 and :class:`PrecisionError` /
:class:`GuardError` / :class:`UndecidedError` to exit code 3.
"""


class BetaShiftError(Exception):
    """Base class for all package errors."""


class DomainError(BetaShiftError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidExpansionError(DomainError):
    """A digit tail is not the expansion of 1 for any base."""


class InadmissibleWordError(DomainError):
    """A word is not in the language of the beta-shift."""


class PrecisionError(BetaShiftError, ArithmeticError):
    """An orbit came too close to a digit boundary to trust the next digit.

    ``reliable`` is the number of leading digits that were determined safely.
    """

    def __init__(self, message, reliable=0):
        super().__init__(message)
        self.reliable = reliable


class UndecidedError(PrecisionError):
    """A comparison needs digits of the expansion of 1 beyond the known depth."""


class GuardError(BetaShiftError, OverflowError):
    """A size guard (word length, shift count) was exceeded."""
