"""Exception hierarchy shared by all groovekit modules."""


class GrooveKitError(Exception):
    """Base class for every error raised by groovekit."""


class DomainError(GrooveKitError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class NonConvergence(GrooveKitError, ArithmeticError):
    """A series did not meet its stopping rule within the term budget."""


class TruncationError(GrooveKitError, ArithmeticError):
    """A truncated power series cannot certify the requested accuracy."""


class ContourFailure(GrooveKitError, ArithmeticError):
    """Numerical Laplace inversion failed its node-halving check."""


class QuadratureFailure(GrooveKitError, ArithmeticError):
    """An oscillatory integral exhausted its panel budget."""


class StabilityError(GrooveKitError, ValueError):
    """Time step violates the stability bound of an explicit scheme."""


class SolveError(GrooveKitError, ArithmeticError):
    """The banded linear system of the PDE oracle could not be solved."""


class ParseError(GrooveKitError, ValueError):
    """Malformed profile input. ``line`` holds the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnitError(ParseError):
    """Unknown length unit in a profile header."""


class RankDeficient(GrooveKitError, ArithmeticError):
    """Design matrix rank is below the number of fitted parameters."""


class NoMinimum(GrooveKitError, ArithmeticError):
    """RSS has no interior minimum over the searched B range."""
