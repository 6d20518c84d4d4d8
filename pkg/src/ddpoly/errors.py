"""Exception hierarchy shared by all ddpoly modules."""


class DDPolyError(Exception):
    """Base class for every error raised by this package."""


class NotNumerical(DDPolyError, ValueError):
    """A polynomial does not take integer values on large integers."""


class WindowTooSmall(DDPolyError, ValueError):
    pass


class NotEventuallyPolynomial(DDPolyError, ValueError):
    """Supplied values disagree with the polynomial fitted on the leading points."""

    def __init__(self, message, r=None, expected=None, got=None):
        super().__init__(message)
        self.r = r
        self.expected = expected
        self.got = got


class DegreeExceedsCap(DDPolyError, ValueError):
    pass


class EmptySet(DDPolyError, ValueError):
    pass


class BlockOutOfRange(DDPolyError, IndexError):
    pass


class SignatureMismatch(DDPolyError, ValueError):
    pass


class InversiveUnsupported(DDPolyError, ValueError):
    pass


class NotSigmaDeltaClosed(DDPolyError, ValueError):
    pass


class NonMonomialGenerator(DDPolyError, ValueError):
    pass


class TransitionNotInvertible(DDPolyError, ValueError):
    pass


class ContainmentViolated(DDPolyError, ValueError):
    pass


class NotFree(DDPolyError, ValueError):
    pass


class NotSingleGenerator(DDPolyError, ValueError):
    pass


class AmbientNotFree(DDPolyError, ValueError):
    pass


class NotStabilized(DDPolyError, RuntimeError):
    """The oracle's closure sweeps hit their cap before the table settled."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table


class ParseError(DDPolyError, ValueError):
    """Malformed input; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ValidationError(DDPolyError, ValueError):
    pass


class OracleMismatch(DDPolyError, AssertionError):
    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
