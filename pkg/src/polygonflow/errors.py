"""Exception hierarchy shared by every polygonflow module."""


class PolygonFlowError(Exception):
    """Base class for all errors raised by polygonflow."""


class InvalidInput(PolygonFlowError, ValueError):
    """An argument violates a documented precondition."""


class LengthMismatch(InvalidInput):
    pass


class TooFewVertices(InvalidInput):
    pass


class NonFiniteCoordinate(InvalidInput):
    pass


class DegeneratePolygon(PolygonFlowError, ArithmeticError):
    """A centered coordinate vector is (numerically) the zero vector."""


class SchemeLengthMismatch(InvalidInput):
    pass


class DivisionPointOutOfRange(InvalidInput):
    pass


class SizeMismatch(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput, IndexError):
    pass


class CircleDegenerate(PolygonFlowError, ArithmeticError):
    """Singular values coincide, so no principal axis exists."""


class DegenerateFit(PolygonFlowError, ArithmeticError):
    """Points are collinear or the best conic is not an ellipse."""


class LcmOverflow(PolygonFlowError, OverflowError):
    pass


class ParseError(InvalidInput):
    pass


class ValidationError(InvalidInput):
    """Configuration value rejected; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class FormatError(InvalidInput):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
