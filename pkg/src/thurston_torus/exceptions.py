"""Custom exceptions for the thurston-torus package."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .farey import Slope


class ThurstonError(Exception):
    """Base exception for all thurston-torus errors."""

    pass


class InvalidSlope(ThurstonError, ValueError):
    """Raised when a numerator/denominator pair is not a reduced slope."""

    pass


class InvalidMarking(ThurstonError, ValueError):
    """Raised when two slopes do not intersect exactly once."""

    pass


class MarkovViolation(ThurstonError):
    """Raised when a trace triple is off the Markov variety.

    Attributes
    ----------
    residual
        Relative residual ``|x² + y² + z² − xyz| / xyz``.
    """

    def __init__(self, residual: float, message: str | None = None) -> None:
        self.residual: float = residual
        super().__init__(message or f"trace triple violates the Markov identity (relative residual {residual:.3e})")

    def __str__(self) -> str:
        return f"{self.__class__.__name__}: {super().__str__()}"


class TraceRangeError(ThurstonError):
    """Raised when a trace walk leaves the supported magnitude range.

    Attributes
    ----------
    digits
        Decimal digits of the offending trace.
    """

    def __init__(self, digits: int, message: str | None = None) -> None:
        self.digits: int = digits
        super().__init__(message or f"trace with {digits} decimal digits is out of range")


class DegenerateLength(ThurstonError, ValueError):
    """Raised when a Fenchel-Nielsen length is not positive."""

    pass


class InvalidTangent(ThurstonError, ValueError):
    """Raised when a tangent vector is not tangent to the Markov variety."""

    pass


class ZeroTangent(ThurstonError, ValueError):
    """Raised when a norm is requested for the zero vector."""

    pass


class NotSimpleCurve(ThurstonError):
    """Raised when the maximally stretched lamination may not be a simple curve.

    Attributes
    ----------
    witness
        Best curve found by the search.
    gap
        Its isolation gap.
    """

    def __init__(self, witness: Slope, gap: float) -> None:
        self.witness = witness
        self.gap: float = gap
        super().__init__(f"witness {witness} is not isolated (gap {gap:.3e})")


class NotInOut(ThurstonError):
    """Raised when the target is not in the out-envelope of the source.

    Attributes
    ----------
    reason
        Which of the membership conditions failed.
    """

    def __init__(self, reason: str) -> None:
        self.reason: str = reason
        super().__init__(reason)


class GeometryError(ThurstonError):
    """Base exception for configurations the plane primitives cannot handle."""

    pass


class CrossingGeodesics(GeometryError):
    """Raised when two geodesics expected to be disjoint intersect."""

    pass


class SharedEndpoint(GeometryError):
    """Raised when two geodesics are asymptotic."""

    pass


class DisjointCurves(GeometryError):
    """Raised when two curves (or geodesics) expected to cross are disjoint."""

    pass


class FlatSegmentUnderflow(ThurstonError):
    """Raised when a flat segment is too short to represent."""

    pass


class PreconditionError(ThurstonError, ValueError):
    """Raised when an operation's documented precondition does not hold."""

    pass
