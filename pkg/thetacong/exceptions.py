"""Custom exceptions for thetacong."""


class ThetaCongError(Exception):
    """Base exception for all thetacong errors."""

    pass


class ThetaCongDomainError(ThetaCongError, ValueError):
    """Raised when an input violates an operation's preconditions."""

    pass


class SurdParseError(ThetaCongDomainError):
    """Raised when a surd expression cannot be parsed into the target field."""

    pass


class InvalidTriangleError(ThetaCongError):
    """Raised when a defining identity of a theta-triangle fails.

    The message always names the identity that failed.
    """

    def __init__(self, identity: str, detail: str = ""):
        self.identity = identity
        message = f"{identity} fails"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class NotInImageError(ThetaCongError):
    """Raised when a curve point has no triangle preimage (a square root is missing)."""

    pass


class OutsideClassificationError(ThetaCongError):
    """Raised when a triangle over K matches none of the four types."""

    pass


class DegenerateSumError(ThetaCongError):
    """Raised when two triangles cannot be composed (W2^2 = m W1^2)."""

    pass


class ThetaCongInternalError(ThetaCongError):
    """Raised on states that should be unreachable; signals a bug."""

    pass


class FixtureError(ThetaCongError):
    """Raised when a fixture file is unreadable or malformed."""

    pass
