"""Exception hierarchy.

Every error raised by the library derives from :class:`RingError`, which is
itself a ``ValueError`` so callers that only care about bad input can catch
that.
"""


class RingError(ValueError):
    pass


# chain rings
class CompositeCharacteristic(RingError):
    pass


class ReduciblePolynomial(RingError):
    pass


class UnsupportedGaloisRing(RingError):
    pass


class MissingPolynomial(RingError):
    pass


class UnexpectedPolynomial(RingError):
    pass


class SpecMismatch(RingError):
    pass


# products / Z_N
class EmptyProduct(RingError):
    pass


class ModulusTooSmall(RingError):
    pass


class ModulusTooLarge(RingError):
    pass


class NotAZnRing(RingError):
    pass


class OutOfRange(RingError):
    pass


class NotAUnit(RingError):
    pass


# vectors and matrices
class LengthMismatch(RingError):
    pass


class NotSquare(RingError):
    pass


class TooLarge(RingError):
    pass


class WideMatrix(RingError):
    pass


class BadIndex(RingError):
    pass


class SingularMatrix(RingError):
    pass


class InfeasibleShape(RingError):
    pass


class ShapeMismatch(RingError):
    pass


# codes
class EnumerationTooLarge(RingError):
    pass


class DegenerateCode(RingError):
    pass


class NonlinearCode(RingError):
    pass


# verification
class NotNSC(RingError):
    pass


class ConditionNotMet(RingError):
    pass


class HypothesisSatisfied(RingError):
    pass


class TheoremViolation(AssertionError):
    """A checked statement failed on an input that satisfies its hypotheses."""


class ParseError(RingError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)


class ConfigError(RingError):
    pass
