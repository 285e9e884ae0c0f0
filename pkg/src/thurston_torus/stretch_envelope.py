"""Stretch paths along a simple curve and the envelope of geodesics between two points.

For a curve ``α`` the two completions ``α⁺`` and ``α⁻`` give stretch lines on
which the shear ``s± = τ ± (ℓ + 2 log coth(ℓ/2))`` and the length ``ℓ`` both
scale by ``e^t``. In Fenchel–Nielsen terms the twist moves as

    τ±(t) = e^t τ₀ ± 2 e^t log coth(ℓ₀/2) ∓ 2 log coth(e^t ℓ₀/2).

When the maximally stretched curve from X to Y is ``α``, every geodesic from X
to Y lies in a quadrilateral bounded by four such segments.
"""

from __future__ import annotations

import enum
import logging
import math
from typing import Any

from attrs import frozen
from scipy.optimize import bisect

from .constants import (
    CORNER_BRACKET_HIGH,
    CORNER_BRACKET_LOW,
    CORNER_XTOL,
    SECTOR_BOUNDARY_TOL,
    TRACE_DIGITS_CEILING,
)
from .dual import exp, expm1, log1p, primal
from .exceptions import NotInOut, NotSimpleCurve, TraceRangeError
from .farey import Slope
from .metric import max_stretch_curve
from .search import SearchBudget
from .torus_model import FnCoords, TorusPoint, fn_coords, from_fn, length_of, systole_triple

__all__ = [
    "EnvelopeEdge",
    "EnvelopeQuad",
    "SectorPosition",
    "ShearCoords",
    "Sign",
    "envelope",
    "log_coth_half",
    "out_contains",
    "shear_coords",
    "stretch_point",
    "stretch_twist",
    "transversality_gap",
    "transversality_gap_at",
]

logger = logging.getLogger(__name__)


class Sign(enum.Enum):
    """Which completion of the curve is stretched."""

    PLUS = "+"
    MINUS = "-"

    @property
    def factor(self) -> int:
        return 1 if self is Sign.PLUS else -1

    @property
    def opposite(self) -> Sign:
        return Sign.MINUS if self is Sign.PLUS else Sign.PLUS


class SectorPosition(enum.Enum):
    """Position of a point relative to the out-envelope ``Out(X, α)``."""

    INTERIOR = "interior"
    BOUNDARY_PLUS = "boundary_plus"
    BOUNDARY_MINUS = "boundary_minus"
    OUTSIDE = "outside"


def log_coth_half(length: Any) -> Any:
    """``log coth(ℓ/2)`` without cancellation; accepts dual numbers."""
    if primal(length) > 40:
        return 2 * exp(-length)
    return log1p(2 / expm1(length))


# --------------------------------------------------------------------------- #
# Shear coordinates and stretch lines                                         #
# --------------------------------------------------------------------------- #


@frozen
class ShearCoords:
    """Length and shear of a point for the completion ``alpha^sign``."""

    alpha: Slope
    sign: Sign
    length: float
    shear: float

    def to_dict(self) -> dict[str, Any]:
        return {"alpha": str(self.alpha), "sign": self.sign.value, "length": self.length, "shear": self.shear}


def _shear(length: float, twist: float, sign: Sign) -> float:
    return twist + sign.factor * (length + 2 * log_coth_half(length))


def shear_coords(X: TorusPoint, a: Slope, sign: Sign) -> ShearCoords:
    """Shearing coordinates ``(ℓ_α, s_α)`` of ``X`` for ``α^sign``."""
    c = fn_coords(X, a)
    return ShearCoords(a, sign, c.length, _shear(c.length, c.twist, sign))


def stretch_twist(length: Any, twist: Any, sign: Sign, t: Any) -> Any:
    """Twist after stretching for time ``t``; generic in ``t`` so dual times give tangents."""
    scale = exp(t)
    return scale * (twist + sign.factor * 2 * log_coth_half(length)) - sign.factor * 2 * log_coth_half(scale * length)


def stretch_point(X: TorusPoint, a: Slope, sign: Sign, t: float) -> TorusPoint:
    """The point at time ``t`` on the ``α^sign`` stretch line through ``X`` (any real ``t``).

    Raises
    ------
    TraceRangeError
        When the stretched curve's trace leaves the supported range.
    """
    if t == 0:
        return X
    try:
        scale = math.exp(t)
    except OverflowError as exc:
        raise TraceRangeError(TRACE_DIGITS_CEILING + 1, f"stretching {a} for time {t} overflows") from exc
    c = fn_coords(X, a)
    return from_fn(FnCoords(a, c.length * scale, stretch_twist(c.length, c.twist, sign, t)))


def transversality_gap_at(length: float) -> float:
    """``d/dt (τ⁺ − τ⁻)`` at ``t = 0`` for a curve of length ``length``."""
    return 4 * log_coth_half(length) + 4 * length / math.sinh(length)


def transversality_gap(X: TorusPoint, a: Slope) -> float:
    """Rate at which the ``α⁺`` and ``α⁻`` stretch lines through ``X`` separate in twist."""
    return transversality_gap_at(length_of(X, a))


def out_contains(X: TorusPoint, a: Slope, Y: TorusPoint) -> SectorPosition:
    """Locate ``Y`` relative to the sector bounded by the two stretch rays from ``X``."""
    cx, cy = fn_coords(X, a), fn_coords(Y, a)
    t_star = math.log(cy.length / cx.length)
    if t_star <= 0:
        return SectorPosition.OUTSIDE
    upper = stretch_twist(cx.length, cx.twist, Sign.PLUS, t_star)
    lower = stretch_twist(cx.length, cx.twist, Sign.MINUS, t_star)
    tol = SECTOR_BOUNDARY_TOL * max(1.0, abs(cy.twist))
    if abs(cy.twist - upper) <= tol:
        return SectorPosition.BOUNDARY_PLUS
    if abs(cy.twist - lower) <= tol:
        return SectorPosition.BOUNDARY_MINUS
    if lower < cy.twist < upper:
        return SectorPosition.INTERIOR
    return SectorPosition.OUTSIDE


# --------------------------------------------------------------------------- #
# Envelopes                                                                   #
# --------------------------------------------------------------------------- #


@frozen
class EnvelopeEdge:
    """A stretch segment: ``duration`` along ``alpha^sign`` from ``start``."""

    start: TorusPoint
    alpha: Slope
    sign: Sign
    duration: float

    @property
    def end(self) -> TorusPoint:
        return stretch_point(self.start, self.alpha, self.sign, self.duration)

    def point_at(self, s: float) -> TorusPoint:
        return stretch_point(self.start, self.alpha, self.sign, s)

    def to_dict(self) -> dict[str, Any]:
        return {"alpha": str(self.alpha), "sign": self.sign.value, "duration": self.duration}


@frozen
class EnvelopeQuad:
    """The quadrilateral swept by the geodesics from ``X`` to ``Y``.

    ``plus_durations`` are the times of ``X → corner_plus`` along ``α⁺`` and
    ``corner_plus → Y`` along ``α⁻``; ``minus_durations`` mirror them.
    """

    X: TorusPoint
    Y: TorusPoint
    alpha: Slope
    corner_plus: TorusPoint
    corner_minus: TorusPoint
    plus_durations: tuple[float, float]
    minus_durations: tuple[float, float]
    degenerate: bool = False

    @property
    def distance(self) -> float:
        return sum(self.plus_durations)

    def edges(self) -> list[EnvelopeEdge]:
        """The four boundary segments, the ``+`` corner path first."""
        return [
            EnvelopeEdge(self.X, self.alpha, Sign.PLUS, self.plus_durations[0]),
            EnvelopeEdge(self.corner_plus, self.alpha, Sign.MINUS, self.plus_durations[1]),
            EnvelopeEdge(self.X, self.alpha, Sign.MINUS, self.minus_durations[0]),
            EnvelopeEdge(self.corner_minus, self.alpha, Sign.PLUS, self.minus_durations[1]),
        ]

    def sample(self, n: int) -> list[TorusPoint]:
        """``n`` evenly spaced interior points on each edge of positive duration."""
        points = []
        for edge in self.edges():
            if edge.duration <= 0:
                continue
            points.extend(edge.point_at(edge.duration * (k + 1) / (n + 1)) for k in range(n))
        return points

    def to_dict(self) -> dict[str, Any]:
        return {
            "witness": str(self.alpha),
            "corners": {"plus": self.corner_plus.to_dict(), "minus": self.corner_minus.to_dict()},
            "edges": [edge.to_dict() for edge in self.edges()],
            "distance": self.distance,
            "degenerate": self.degenerate,
        }


def _ratio_gap(cx: FnCoords, cy: FnCoords, sign: Sign) -> float:
    """Shear-ratio gap between the ``sign`` ray out of X and the opposite ray into Y, less 2.

    The 2 cancels symbolically, so small gaps keep their relative accuracy.
    """
    drift = sign.factor * (cx.twist / cx.length - cy.twist / cy.length)
    return drift + 2 * (log_coth_half(cx.length) / cx.length + log_coth_half(cy.length) / cy.length)


def _corner_time(cx: FnCoords, cy: FnCoords, sign: Sign) -> float:
    """Time along the ``sign`` ray from X to where it meets the opposite ray into Y.

    The two rays meet at the length solving ``4·log coth(ℓ/2)/ℓ = gap``,
    clamped to ``[ℓ_X, ℓ_Y]``.
    """
    gap = _ratio_gap(cx, cy, sign)

    def f(length: float) -> float:
        return 4 * log_coth_half(length) / length - gap

    if f(CORNER_BRACKET_HIGH) >= 0:
        root = CORNER_BRACKET_HIGH
    else:
        root = float(bisect(f, CORNER_BRACKET_LOW, CORNER_BRACKET_HIGH, xtol=CORNER_XTOL))
    logger.debug("corner length %.15g for shear ratio gap %.6e", root, gap)
    return math.log(min(max(root, cx.length), cy.length) / cx.length)


def _segment(X: TorusPoint, Y: TorusPoint, a: Slope, sign: Sign) -> EnvelopeQuad:
    duration = math.log(length_of(Y, a) / length_of(X, a))
    forward = (duration, 0.0)
    backward = (0.0, duration)
    if sign is Sign.PLUS:
        return EnvelopeQuad(X, Y, a, Y, X, forward, backward, degenerate=True)
    return EnvelopeQuad(X, Y, a, X, Y, backward, forward, degenerate=True)


def envelope(
    X: TorusPoint,
    Y: TorusPoint,
    budget: SearchBudget | None = None,
    *,
    strict: bool = False,
) -> EnvelopeQuad:
    """The envelope of geodesics from ``X`` to ``Y``.

    Raises
    ------
    NotSimpleCurve
        The witness of the distance search is not isolated. Unless ``strict``,
        a target on a stretch ray from ``X`` still yields the degenerate segment.
    NotInOut
        ``Y`` is not in the out-envelope of ``X`` for the witness.
    """
    if X == Y:
        systole = systole_triple(X)[1][0]
        return EnvelopeQuad(X, Y, systole, X, X, (0.0, 0.0), (0.0, 0.0), degenerate=True)

    stretch = max_stretch_curve(X, Y, budget)
    a = stretch.witness
    position = out_contains(X, a, Y)
    on_ray = position in (SectorPosition.BOUNDARY_PLUS, SectorPosition.BOUNDARY_MINUS)
    if not stretch.isolated:
        if strict or not on_ray:
            raise NotSimpleCurve(a, stretch.gap)
        return _segment(X, Y, a, Sign.PLUS if position is SectorPosition.BOUNDARY_PLUS else Sign.MINUS)

    cx, cy = fn_coords(X, a), fn_coords(Y, a)
    if cy.length <= cx.length:
        raise NotInOut(f"ℓ_{a} does not grow from X to Y")
    if position is SectorPosition.OUTSIDE:
        raise NotInOut(f"Y lies outside the out-envelope of X for {a}")

    if _ratio_gap(cx, cy, Sign.PLUS) <= 0 or _ratio_gap(cx, cy, Sign.MINUS) <= 0:
        raise NotInOut(f"shear ratios of X and Y admit no corner for {a}")

    t_plus, t_minus = _corner_time(cx, cy, Sign.PLUS), _corner_time(cx, cy, Sign.MINUS)
    total = math.log(cy.length / cx.length)
    return EnvelopeQuad(
        X,
        Y,
        a,
        stretch_point(X, a, Sign.PLUS, t_plus),
        stretch_point(X, a, Sign.MINUS, t_minus),
        (t_plus, total - t_plus),
        (t_minus, total - t_minus),
        degenerate=on_ray,
    )
