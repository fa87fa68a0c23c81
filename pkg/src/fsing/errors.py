"""Exception hierarchy shared by all fsing modules."""


class FsingError(Exception):
    """Base class for every error raised deliberately by fsing."""


class FieldMismatchError(FsingError, ValueError):
    """Operands belong to different finite fields."""


class RingMismatchError(FsingError, ValueError):
    """Operands belong to different polynomial rings."""


class ExponentOverflowError(FsingError, OverflowError):
    """An exponent would leave the supported 64-bit range."""


class ZeroPolynomialDegreeError(FsingError, ValueError):
    """The zero polynomial has no degree."""


class BudgetExceededError(FsingError):
    """A bounded search or enumeration hit its configured budget."""


class GroebnerBudgetExceeded(BudgetExceededError):
    """Buchberger's algorithm exceeded its basis-size or reduction-step cap."""


class PreconditionError(FsingError, ValueError):
    """Input violates a documented precondition."""


class RegularSequenceError(FsingError):
    """The complete-intersection colon identity failed: the sequence is not regular."""


class CyclicityError(FsingError):
    """A colon module that must be cyclic was not generated by the expected element."""


class SingularMatrixError(FsingError, ValueError):
    """A matrix that must be invertible is singular."""


class BoundExhaustedError(FsingError):
    """A search over extensions finished without success inside its bound."""


class NotMonicError(FsingError, ValueError):
    """The hypersurface equation does not contain a unit multiple of y_n^d."""


class ParseError(FsingError, ValueError):
    """Malformed expression text; carries 1-based line and column."""

    def __init__(self, message, source="", line=1, column=1):
        self.message = message
        self.source = source
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class UnknownVariableError(ParseError):
    """A name in the expression is not a declared ring variable."""


class ExponentOverflowParseError(ParseError, ExponentOverflowError):
    """An exponent literal in parsed text overflows 64 bits."""
