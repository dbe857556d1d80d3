"""Exception hierarchy shared by every engine."""


class AlgebraError(Exception):
    """Base class for all errors raised by wittgk."""


class IndexOutOfRange(AlgebraError, ValueError):
    """A generator index (or the central symbol) is not valid for the algebra kind."""


class IndexOverflow(IndexOutOfRange, OverflowError):
    """Index arithmetic left the signed 64-bit range."""


class KindMismatch(AlgebraError, TypeError):
    """Operands live in different algebras, or the kind does not support the operation."""


class ParseError(AlgebraError, ValueError):
    """Malformed element text.  ``position`` is the 1-based column of the offending character."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at column {position})")
        self.position = position


class ZeroElement(AlgebraError, ValueError):
    """The operation needs a nonzero element."""


class ZeroGenerator(ZeroElement):
    pass


class NotHomogeneous(AlgebraError, ValueError):
    pass


class PreconditionViolated(AlgebraError, ValueError):
    pass


class NotReducible(AlgebraError, ValueError):
    pass


class InvariantViolation(AlgebraError, RuntimeError):
    """An internal invariant failed; indicates a bug, never bad input."""


class ResourceLimit(AlgebraError, RuntimeError):
    pass


class IterationBudgetExceeded(ResourceLimit):
    pass


class InsufficientData(AlgebraError, ValueError):
    pass
