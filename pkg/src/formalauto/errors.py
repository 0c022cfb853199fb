"""Exception types shared across the package."""


class FormalAutoError(Exception):
    """Base class for errors raised by this package."""


class OperatorSyntaxError(FormalAutoError, ValueError):
    """Malformed operator or series expression."""

    def __init__(self, message: str, position: int, expected=(), text: str = ""):
        self.position = position
        self.expected = tuple(expected)
        self.text = text
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class UnboundParameter(FormalAutoError, KeyError):
    def __init__(self, name: str, position: int = -1):
        self.name = name
        self.position = position
        super().__init__(name)

    def __str__(self):
        return f"unbound parameter {self.name!r} at position {self.position}"


class NonNormalForm(FormalAutoError, ValueError):
    """A derivative appears to the left of a variable factor."""

    def __init__(self, message: str, position: int = -1):
        self.position = position
        super().__init__(f"{message} at position {position}")


class EmptyInput(FormalAutoError, ValueError):
    pass


class EmptyOperator(FormalAutoError, ValueError):
    pass


class NegativeM(FormalAutoError, ValueError):
    """``max(j - ord_t(a_jr)) < 0``: the integro order is undefined."""


class EmptyPrincipalPart(FormalAutoError, ValueError):
    pass


class IndexOutOfRange(FormalAutoError, IndexError):
    pass


class InexactMoment(FormalAutoError, ValueError):
    """An exact computation was requested for a moment sequence with irrational ratios."""


class ResonanceObstruction(FormalAutoError, ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"characteristic polynomial vanishes at n = {witness}")


class TruncationTooShort(FormalAutoError, ValueError):
    pass


class PositiveM(FormalAutoError, ValueError):
    """The kernel is trivial for a positive lower ordinate."""


class ResidualError(FormalAutoError, AssertionError):
    """A computed solution failed its residual check (internal inconsistency)."""


class ProblemError(FormalAutoError, ValueError):
    """Invalid problem file contents."""
