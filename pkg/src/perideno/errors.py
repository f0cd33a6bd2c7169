"""Exception types raised by perideno."""


class PeridenoError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(PeridenoError, ValueError):
    pass


class NonExpandableFactor(PeridenoError, ValueError):
    """A denominator factor is not positive under the grading, so it has no
    geometric expansion in the chosen domain."""


class IndivisibleDenominator(PeridenoError, ArithmeticError):
    pass


class AntiInvarianceViolation(PeridenoError, ValueError):
    def __init__(self, message, transposition=None):
        super().__init__(message)
        self.transposition = transposition


class CutoffTooTight(PeridenoError, ValueError):
    pass
