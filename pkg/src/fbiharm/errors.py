"""Exception hierarchy shared by every module of the package."""


class FbiharmError(Exception):
    """Base class for all package errors."""


class OutOfDomain(FbiharmError):
    pass


class SingularPoint(FbiharmError):
    """Evaluation hit a declared singularity or produced a non-finite jet."""


class ToleranceNotMet(FbiharmError):
    pass


class NonPositiveFactor(FbiharmError):
    pass


class XVanishes(FbiharmError):
    """The tension coefficient vanishes where a nonzero value is required."""


class NonBiharmonicInput(FbiharmError):
    pass


class StepFailure(FbiharmError):
    pass


class InversionError(FbiharmError):
    pass


class UnknownCase(FbiharmError, KeyError):
    pass


class InvalidOverride(FbiharmError, ValueError):
    pass


class ExprSyntaxError(FbiharmError, SyntaxError):
    """Raised by the expression parser; ``pos`` is the 0-based column."""

    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownIdentifier(ExprSyntaxError):
    pass
