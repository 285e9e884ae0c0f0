"""Exact combinatorics of slopes, the Farey graph, markings and pivots.

A slope ``p/q`` names a simple closed curve on the once-punctured torus; it is
also a primitive vector ``(p, q)`` of the integer lattice, defined up to sign.
Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from typing import Any

from attrs import field, frozen

from .exceptions import InvalidMarking, InvalidSlope

__all__ = [
    "Matrix",
    "Marking",
    "PivotSequence",
    "Slope",
    "Vector",
    "apply",
    "canonical_neighbor",
    "compose",
    "cross",
    "dehn_twist",
    "elementary_moves",
    "frame",
    "intersection",
    "inverse",
    "marking_geodesic",
    "pivots",
    "separates",
    "side",
    "stern_brocot_path",
    "twist_matrix",
]

Vector = tuple[int, int]
Matrix = tuple[tuple[int, int], tuple[int, int]]


# --------------------------------------------------------------------------- #
# Lattice helpers                                                             #
# --------------------------------------------------------------------------- #


def cross(u: Vector, v: Vector) -> int:
    """Return ``det[u | v]``."""
    return u[0] * v[1] - u[1] * v[0]


def apply(g: Matrix, v: Vector) -> Vector:
    """Apply an integer matrix to a column vector."""
    return (g[0][0] * v[0] + g[0][1] * v[1], g[1][0] * v[0] + g[1][1] * v[1])


def inverse(g: Matrix) -> Matrix:
    """Inverse of a GL(2,Z) matrix."""
    (a, b), (c, d) = g
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError(f"matrix {g} is not in GL(2,Z)")
    return ((d * det, -b * det), (-c * det, a * det))


def compose(g: Matrix, h: Matrix) -> Matrix:
    """Matrix product ``g·h``."""
    (a, b), (c, d) = g
    (e, f), (k, m) = h
    return ((a * e + b * k, a * f + b * m), (c * e + d * k, c * f + d * m))


# --------------------------------------------------------------------------- #
# Slopes                                                                      #
# --------------------------------------------------------------------------- #


@frozen
class Slope:
    """A reduced fraction ``p/q`` with ``q ≥ 0``; ``1/0`` is infinity."""

    p: int
    q: int

    def __attrs_post_init__(self) -> None:
        if self.q < 0 or math.gcd(abs(self.p), self.q) != 1 or (self.q == 0 and self.p != 1):
            raise InvalidSlope(f"{self.p}/{self.q} is not a reduced slope")

    @classmethod
    def from_vector(cls, p: int, q: int) -> Slope:
        """Reduce an arbitrary nonzero integer vector to its slope."""
        g = math.gcd(p, q)
        if g == 0:
            raise InvalidSlope("the zero vector has no slope")
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def parse(cls, text: str) -> Slope:
        """Parse ``"p/q"`` (``"1/0"`` for infinity); a bare integer means ``p/1``."""
        raw = text.strip()
        num, sep, den = raw.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise InvalidSlope(f"cannot parse slope {text!r}") from None
        return cls(p, q)

    @property
    def vector(self) -> Vector:
        return (self.p, self.q)

    @property
    def height(self) -> int:
        return max(abs(self.p), self.q)

    @property
    def key(self) -> tuple[int, int, int]:
        """Deterministic tie-break: height, then numerator, then denominator."""
        return (self.height, self.p, self.q)

    @property
    def value(self) -> float:
        return math.inf if self.q == 0 else self.p / self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)
ONE = Slope(1, 1)


def intersection(a: Slope, b: Slope) -> int:
    """Geometric intersection number ``|p·s − r·q|``."""
    return abs(cross(a.vector, b.vector))


def twist_matrix(about: Slope, power: int = 1) -> Matrix:
    """Homology action of ``D_about^power``: ``v ↦ v + n·det(α, v)·α``."""
    p, q = about.vector
    n = power
    return ((1 - n * p * q, n * p * p), (-n * q * q, 1 + n * p * q))


def dehn_twist(target: Slope, about: Slope, power: int = 1) -> Slope:
    """Image of ``target`` under ``power`` positive Dehn twists about ``about``.

    One positive twist about 1/0 sends 0/1 to 1/1. For other curves the map
    is the conjugate parabolic, which moves slopes the same way around the
    boundary circle.
    """
    return Slope.from_vector(*apply(twist_matrix(about, power), target.vector))


def canonical_neighbor(a: Slope) -> Slope:
    """The Farey neighbour ``β`` with ``det(α, β) = 1`` of smallest norm.

    Returned as a slope; :func:`frame` keeps the oriented vector.
    """
    return Slope.from_vector(*_neighbor_vector(a))


def _neighbor_vector(a: Slope) -> Vector:
    p, q = a.vector
    # extended Euclid: p*s - q*r = 1
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    # old_s*p + old_t*q = old_r = ±1
    sign = 1 if old_r == 1 else -1
    base = (-old_t * sign, old_s * sign)
    norm = p * p + q * q
    shift = -((base[0] * p + base[1] * q) // norm) if norm else 0
    candidates = [(base[0] + k * p, base[1] + k * q) for k in (shift - 1, shift, shift + 1)]
    return min(candidates, key=lambda v: (v[0] * v[0] + v[1] * v[1], v[0], v[1]))


def frame(a: Slope) -> Matrix:
    """The SL(2,Z) matrix with columns ``α`` and its canonical neighbour."""
    r, s = _neighbor_vector(a)
    return ((a.p, r), (a.q, s))


def stern_brocot_path(v: Vector) -> tuple[int, list[tuple[int, int]]]:
    """Run-length encoded descent from a root triangle to the slope of ``v``.

    The positive root is the triangle (0/1, 1/0, 1/1), the negative root is
    (−1/0, 0/1, −1/1). Returns the root sign and the list of runs
    ``(direction, count)``: ``+1`` replaces the left vertex by the mediant,
    ``−1`` replaces the right one. After the last run the mediant is ``v``.
    Slopes 1/0 and 0/1 are root vertices and have no path.
    """
    target = Slope.from_vector(*v).vector
    if target[0] == 0 or target[1] == 0:
        raise InvalidSlope(f"{Slope.from_vector(*v)} is a root vertex")
    half = 1 if target[0] > 0 else -1
    lo, hi = ((0, 1), (1, 0)) if half > 0 else ((-1, 0), (0, 1))
    mid = (lo[0] + hi[0], lo[1] + hi[1])
    runs: list[tuple[int, int]] = []
    while mid != target:
        a = cross(target, mid)
        if a > 0:
            k = -(a // cross(target, hi))
            lo = (mid[0] + (k - 1) * hi[0], mid[1] + (k - 1) * hi[1])
            mid = (mid[0] + k * hi[0], mid[1] + k * hi[1])
            runs.append((1, k))
        else:
            k = -(a // cross(target, lo))
            hi = (mid[0] + (k - 1) * lo[0], mid[1] + (k - 1) * lo[1])
            mid = (mid[0] + k * lo[0], mid[1] + k * lo[1])
            runs.append((-1, k))
    return half, runs


# --------------------------------------------------------------------------- #
# Markings                                                                    #
# --------------------------------------------------------------------------- #


@frozen(eq=False)
class Marking:
    """An unordered pair of slopes intersecting once (an edge of the Farey graph)."""

    a: Slope
    b: Slope

    def __attrs_post_init__(self) -> None:
        if intersection(self.a, self.b) != 1:
            raise InvalidMarking(f"{self.a} and {self.b} do not intersect once")

    @classmethod
    def parse(cls, text: str) -> Marking:
        """Parse ``"p/q,r/s"``."""
        first, sep, second = text.partition(",")
        if not sep:
            raise InvalidMarking(f"cannot parse marking {text!r}")
        return cls(Slope.parse(first), Slope.parse(second))

    @property
    def slopes(self) -> tuple[Slope, Slope]:
        first, second = sorted((self.a, self.b), key=lambda s: s.key)
        return (first, second)

    def __contains__(self, slope: object) -> bool:
        return slope == self.a or slope == self.b

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Marking):
            return NotImplemented
        return {self.a, self.b} == {other.a, other.b}

    def __hash__(self) -> int:
        return hash(frozenset((self.a, self.b)))

    def __str__(self) -> str:
        first, second = self.slopes
        return f"{first},{second}"

    def to_dict(self) -> str:
        return str(self)


def elementary_moves(m: Marking) -> list[Marking]:
    """The four markings one elementary move away from ``m``."""
    return [
        Marking(m.a, dehn_twist(m.b, m.a, 1)),
        Marking(m.a, dehn_twist(m.b, m.a, -1)),
        Marking(dehn_twist(m.a, m.b, 1), m.b),
        Marking(dehn_twist(m.a, m.b, -1), m.b),
    ]


def _marking_matrix(m: Marking) -> Matrix:
    u, w = m.a.vector, m.b.vector
    if cross(u, w) < 0:
        w = (-w[0], -w[1])
    return ((u[0], w[0]), (u[1], w[1]))


def _normalized(v: Vector) -> Vector:
    return Slope.from_vector(*v).vector


def side(edge: Marking, s: Slope) -> int:
    """Which arc of the boundary circle cut by ``edge`` contains ``s``.

    Returns ``+1`` for the arc through ``a + b``, ``-1`` for the arc through
    ``a − b`` and ``0`` if ``s`` is an endpoint of ``edge``.
    """
    p, q = _normalized(apply(inverse(_marking_matrix(edge)), s.vector))
    if p == 0 or q == 0:
        return 0
    return 1 if p > 0 else -1


def separates(edge: Marking, m1: Marking, m2: Marking) -> bool:
    """Half-space test: does ``edge`` separate the interiors of ``m1`` and ``m2``?"""
    sides1 = {side(edge, s) for s in (m1.a, m1.b)} - {0}
    sides2 = {side(edge, s) for s in (m2.a, m2.b)} - {0}
    return len(sides1) == 1 and len(sides2) == 1 and sides1 != sides2


def marking_geodesic(m1: Marking, m2: Marking) -> list[Marking]:
    """The ordered edges ``Ē(m1, m2)`` of the marking-graph geodesic.

    Walks the dual tree of the Farey tessellation from ``m1`` towards ``m2``.
    Runs of moves in the same direction are counted with integer arithmetic,
    so the cost is linear in the number of returned markings.
    """
    if m1 == m2:
        return [m1]
    g = _marking_matrix(m1)
    g_inv = inverse(g)
    targets = [_normalized(apply(g_inv, v)) for v in (m2.a.vector, m2.b.vector)]

    if all(p >= 0 for p, _ in targets):
        lo, hi = (0, 1), (1, 0)
    else:
        lo, hi = (-1, 0), (0, 1)
        targets = [(-1, 0) if v == (1, 0) else v for v in targets]
    t_lo, t_hi = targets if cross(targets[0], targets[1]) < 0 else targets[::-1]

    def emit(u: Vector, w: Vector) -> Marking:
        return Marking(Slope.from_vector(*apply(g, u)), Slope.from_vector(*apply(g, w)))

    edges = [emit(lo, hi)]
    while cross(lo, t_lo) != 0 or cross(hi, t_hi) != 0:
        mid = (lo[0] + hi[0], lo[1] + hi[1])
        if cross(t_lo, mid) >= 0:
            run = cross(t_lo, mid) // -cross(t_lo, hi) + 1
            for j in range(run):
                edges.append(emit((mid[0] + j * hi[0], mid[1] + j * hi[1]), hi))
            lo = (mid[0] + (run - 1) * hi[0], mid[1] + (run - 1) * hi[1])
        else:
            run = -cross(t_hi, mid) // cross(t_hi, lo) + 1
            for j in range(run):
                edges.append(emit(lo, (mid[0] + j * lo[0], mid[1] + j * lo[1])))
            hi = (mid[0] + (run - 1) * lo[0], mid[1] + (run - 1) * lo[1])
    return edges


# --------------------------------------------------------------------------- #
# Pivots                                                                      #
# --------------------------------------------------------------------------- #


@frozen
class PivotSequence:
    """Pivots of a marking-graph geodesic with their coefficients ``n_α``."""

    entries: tuple[tuple[Slope, int], ...] = field(factory=tuple)

    def __attrs_post_init__(self) -> None:
        if any(n < 2 for _, n in self.entries):
            raise ValueError("pivot coefficients are at least 2")

    @property
    def slopes(self) -> list[Slope]:
        return [s for s, _ in self.entries]

    @property
    def coefficients(self) -> list[int]:
        return [n for _, n in self.entries]

    def coefficient(self, slope: Slope) -> int:
        """``n_α`` for ``slope``, or 0 if it is not a pivot."""
        return dict(self.entries).get(slope, 0)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[Slope, int]]:
        return iter(self.entries)

    def to_dict(self) -> list[dict[str, Any]]:
        return [{"pivot": str(s), "coefficient": n} for s, n in self.entries]


def pivot_counts(edges: Sequence[Marking]) -> PivotSequence:
    """Count edges per slope and keep those in two or more, ordered by their last edge."""
    counts: dict[Slope, int] = {}
    last: dict[Slope, int] = {}
    for index, edge in enumerate(edges):
        for s in (edge.a, edge.b):
            counts[s] = counts.get(s, 0) + 1
            last[s] = index
    pivots_ = sorted((s for s, n in counts.items() if n >= 2), key=lambda s: (last[s], s.key))
    return PivotSequence(tuple((s, counts[s]) for s in pivots_))


def pivots(m1: Marking, m2: Marking) -> PivotSequence:
    """Pivot sequence of the marking-graph geodesic from ``m1`` to ``m2``."""
    return pivot_counts(marking_geodesic(m1, m2))
