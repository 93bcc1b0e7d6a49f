"""Exception hierarchy shared across the library."""


class ShiftLabError(Exception):
    """Base class for every library-specific failure."""


class DuplicateNode(ShiftLabError):
    """Two interpolation nodes coincide."""


class SingularSystem(ShiftLabError):
    """An exact linear system has no unique solution."""


class NegativeValue(ShiftLabError):
    """A polynomial took a negative value where nonnegativity is required."""


class UnsupportedBase(ShiftLabError):
    """The base moment oracle cannot produce exact monomial moments."""


class ZeroMass(ShiftLabError):
    """A normalizing moment is zero, so the derived measure is undefined."""


class ZeroMoment(ShiftLabError):
    """A moment needed as a denominator vanished."""


class TailExhausted(ShiftLabError):
    """A weight beyond the stored prefix was requested and no tail rule applies."""


class WindowTooSmall(TailExhausted):
    """A 2-variable grid does not cover the requested index range."""


class CommutativityViolation(ShiftLabError):
    """The two weight families fail the commuting-pair identity at a grid point."""

    def __init__(self, point, message=None):
        self.point = tuple(point)
        super().__init__(message or f"commutativity fails at grid point {self.point}")


class NonpositiveDensity(ShiftLabError):
    """A solved density came out <= 0, signalling a wrong atom list."""


class NotMonotone(ShiftLabError):
    """Endpoint evaluations contradict the declared monotone direction."""


class DenominatorLimitExceeded(ShiftLabError):
    """A rational exceeded the configured denominator bit bound."""


class DescriptorError(ShiftLabError):
    """A JSON descriptor failed schema validation."""

    def __init__(self, message, path="$"):
        self.path = path
        super().__init__(f"{path}: {message}")
