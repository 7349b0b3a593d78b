# File: app/core/errors.py


class CrseqError(Exception):
    """
    Base class for every error raised by the toolkit.
    `hint` is a one-line remediation shown by the command line.
    """

    hint = None

    def __init__(self, message, hint=None):
        super().__init__(message)
        if hint is not None:
            self.hint = hint


# Bad input (also ValueError, so callers may catch them the usual way)


class InputError(CrseqError, ValueError):
    pass


class ParseError(InputError):
    pass


class UsageError(InputError):
    pass


class BothZero(InputError):
    pass


class ZeroPolynomial(InputError):
    pass


class NotMonic(InputError):
    pass


class KGreaterThanR(InputError):
    pass


class TooFewTerms(InputError):
    pass


class LengthMismatch(InputError):
    pass


class InvalidRelation(InputError):
    pass


class ZeroRoot(InputError):
    pass


# Computation failures


class ComputationError(CrseqError):
    pass


class InsufficientTerms(ComputationError):
    """
    The candidate order is too close to the window size.
    `needed` is the minimum number of extra terms that would make the
    window long enough.
    """

    def __init__(self, message, needed, hint=None):
        super().__init__(
            message,
            hint or f"supply at least {needed} more terms (or raise --guard/--mmax windows)",
        )
        self.needed = needed


class ValidationFailed(ComputationError):
    hint = "the window was too short; retry with a larger --guard"


class TooLarge(ComputationError):
    hint = "lower M or the number of roots; the enumeration is capped at 10^6"


class BudgetExceeded(ComputationError):
    hint = "narrow the ranges, lower --mmax, raise --budget, or pass --deep"
