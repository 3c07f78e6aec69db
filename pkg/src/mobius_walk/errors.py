"""Exception types raised across the package."""


class WalkError(Exception):
    """Base class for every error raised by mobius_walk."""


class ValidationError(WalkError, ValueError):
    """Bad user-supplied parameters. ``field`` names the offending input."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NonUnitaryCoin(ValidationError):
    pass


class InvalidN(ValidationError):
    pass


class BadInitialState(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class KOutOfRange(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class OddNNotApplicable(ValidationError):
    pass


class NotDegenerateRegime(ValidationError):
    pass


class UnsupportedInitialState(ValidationError):
    pass


class IncompleteEigensystem(ValidationError):
    pass


class NumericalFailure(WalkError, ArithmeticError):
    pass


class EigConvergenceFailure(NumericalFailure):
    pass


class DegenerateFallback(WalkError):
    """Signal that the closed-form eigensystem is unusable for one k.

    Not a failure: the caller is expected to fall back to the numeric
    eigensolver.
    """

    def __init__(self, k, reason):
        super().__init__(f"k={k}: {reason}")
        self.k = k
        self.reason = reason
