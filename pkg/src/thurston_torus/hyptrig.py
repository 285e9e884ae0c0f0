"""Upper half-plane primitives and the horizontal/vertical decomposition of a curve.

Geodesics are stored by their two boundary endpoints. Every measurement first
moves the relevant geodesic to the imaginary axis by a Möbius map, so nothing
is computed from nearly equal endpoints.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np
import numpy.typing as npt
from attrs import field, frozen

from .constants import PARABOLIC_CLAMP
from .exceptions import CrossingGeodesics, DisjointCurves, SharedEndpoint
from .farey import Slope
from .torus_model import TorusPoint, holonomy, length_of

__all__ = [
    "Geodesic",
    "HVDecomposition",
    "SaccheriConfiguration",
    "axis",
    "collar_twist",
    "common_perpendicular",
    "crossing_angle",
    "crossing_cosine",
    "hv_decomposition",
    "hyperbolic_distance",
    "mobius",
    "saccheri_configuration",
    "translate_along",
    "translation_length",
]

Mobius = npt.NDArray[np.float64]

_FLIP = np.array([[0.0, -1.0], [1.0, 0.0]])


def _boundary(value: float) -> float:
    return math.inf if math.isinf(value) else float(value)


@frozen
class Geodesic:
    """The oriented geodesic from boundary point ``start`` to ``end`` (``inf`` allowed)."""

    start: float = field(converter=_boundary)
    end: float = field(converter=_boundary)

    def __attrs_post_init__(self) -> None:
        if self.start == self.end:
            raise ValueError(f"geodesic endpoints coincide at {self.start}")

    def reversed(self) -> Geodesic:
        return Geodesic(self.end, self.start)


def mobius(m: Mobius, z: Any) -> Any:
    """Apply ``z ↦ (az + b)/(cz + d)`` to a point of the plane or of its boundary."""
    (a, b), (c, d) = m
    if isinstance(z, float) and math.isinf(z):
        return a / c if c != 0 else math.inf
    den = c * z + d
    if den == 0:
        return math.inf
    return (a * z + b) / den


def _image(m: Mobius, g: Geodesic) -> Geodesic:
    return Geodesic(mobius(m, g.start), mobius(m, g.end))


def _normalizer(g: Geodesic) -> Mobius:
    """Orientation preserving map sending ``g.start`` to 0 and ``g.end`` to ∞."""
    a, b = g.start, g.end
    if math.isinf(b):
        return np.array([[1.0, -a], [0.0, 1.0]])
    if math.isinf(a):
        return np.array([[0.0, -1.0], [1.0, -b]])
    if a < b:
        return np.array([[1.0, -a], [-1.0, b]])
    return np.array([[1.0, -a], [1.0, -b]])


def hyperbolic_distance(z: complex, w: complex) -> float:
    """Distance between two points of the upper half-plane."""
    return 2 * math.asinh(abs(z - w) / (2 * math.sqrt(z.imag * w.imag)))


def translation_length(m: Mobius) -> float:
    """``2·arccosh(|tr|/2)`` of the normalised matrix, with near-parabolics clamped."""
    trace = abs(float(np.trace(m))) / math.sqrt(abs(float(np.linalg.det(m))))
    return 2 * math.acosh(max(trace, 2 + PARABOLIC_CLAMP) / 2)


def translate_along(g: Geodesic, distance: float) -> Mobius:
    """The hyperbolic isometry translating along ``g`` towards ``g.end`` by ``distance``."""
    m = _normalizer(g)
    shift = np.diag([math.exp(distance / 2), math.exp(-distance / 2)])
    return np.linalg.inv(m) @ shift @ m


def axis(m: Mobius) -> Geodesic:
    """Oriented axis of a hyperbolic matrix, from its repelling to its attracting fixed point."""
    (a, b), (c, d) = m
    trace = a + d
    if c == 0:
        finite = b / (d - a)
        return Geodesic(finite, math.inf) if abs(a) > abs(d) else Geodesic(math.inf, finite)
    root = math.sqrt(trace * trace - 4 * (a * d - b * c))
    sign = 1 if trace > 0 else -1
    attracting = ((a - d) + sign * root) / (2 * c)
    repelling = ((a - d) - sign * root) / (2 * c)
    return Geodesic(repelling, attracting)


# --------------------------------------------------------------------------- #
# Pairs of geodesics                                                          #
# --------------------------------------------------------------------------- #


def common_perpendicular(g1: Geodesic, g2: Geodesic) -> tuple[complex, complex, float]:
    """Feet on ``g1`` and ``g2`` and length of the common perpendicular of disjoint geodesics."""
    m = _normalizer(g1)
    u, w = mobius(m, g2.start), mobius(m, g2.end)
    if u == 0 or w == 0 or math.isinf(u) or math.isinf(w):
        raise SharedEndpoint(f"{g1} and {g2} share an endpoint")
    if u * w < 0:
        raise CrossingGeodesics(f"{g1} and {g2} intersect")
    if u < 0:
        m = _FLIP @ m
        u, w = -1 / u, -1 / w
    r = math.sqrt(u * w)
    x = 2 * u * w / (u + w)
    foot1 = complex(0.0, r)
    foot2 = complex(x, math.sqrt(max(r * r - x * x, 0.0)))
    dist = math.acosh((u + w) / abs(w - u))
    back = np.linalg.inv(m)
    return mobius(back, foot1), mobius(back, foot2), dist


def crossing_cosine(g1: Geodesic, g2: Geodesic) -> float:
    """Cosine of the angle from oriented ``g1`` to oriented ``g2`` at their crossing."""
    m = _normalizer(g1)
    u, w = mobius(m, g2.start), mobius(m, g2.end)
    if u == 0 or w == 0 or math.isinf(u) or math.isinf(w):
        raise SharedEndpoint(f"{g1} and {g2} share an endpoint")
    if u * w > 0:
        raise DisjointCurves(f"{g1} and {g2} do not cross")
    return (u + w) / (w - u)


def crossing_angle(g1: Geodesic, g2: Geodesic) -> float:
    """Unoriented crossing angle in ``(0, π/2]``."""
    m = _normalizer(g1)
    u, w = mobius(m, g2.start), mobius(m, g2.end)
    if u * w > 0:
        raise DisjointCurves(f"{g1} and {g2} do not cross")
    height = math.sqrt(-u * w)
    return math.atan2(height, abs(u + w) / 2)


@frozen
class SaccheriConfiguration:
    """Two geodesics with their common perpendicular ``[p, p']`` and points on them.

    ``x ∈ ω`` and ``x' ∈ ω'`` are equidistant from the feet on the same side,
    and ``y`` is an arbitrary point of ``ω'``.
    """

    omega: Geodesic
    omega_prime: Geodesic
    p: complex
    p_prime: complex
    x: complex
    x_prime: complex
    y: complex


def _random_isometry(rng: np.random.Generator) -> Mobius:
    a = float(rng.uniform(0.5, 2.0))
    b, c = (float(v) for v in rng.normal(size=2))
    return np.array([[a, b], [c, (1 + b * c) / a]])


def saccheri_configuration(
    d: float, s: float, rng: np.random.Generator, y_offset: float = 0.0
) -> SaccheriConfiguration:
    """Quadrilateral with feet at distance ``d`` and ``d(x, p) = s``, moved by a random isometry.

    ``y`` sits at signed distance ``y_offset`` from ``p'`` along ``ω'``.
    """
    # translation along the unit circle carries the imaginary axis to ω'
    t = np.array([[math.cosh(d / 2), math.sinh(d / 2)], [math.sinh(d / 2), math.cosh(d / 2)]])
    g = _random_isometry(rng)
    omega = Geodesic(0.0, math.inf)
    points = {
        "p": 1j,
        "p_prime": mobius(t, 1j),
        "x": 1j * math.exp(s),
        "x_prime": mobius(t, 1j * math.exp(s)),
        "y": mobius(t, 1j * math.exp(y_offset)),
    }
    return SaccheriConfiguration(
        omega=_image(g, omega),
        omega_prime=_image(g @ t, omega),
        **{name: complex(mobius(g, z)) for name, z in points.items()},
    )


# --------------------------------------------------------------------------- #
# Curves on the torus                                                         #
# --------------------------------------------------------------------------- #


@frozen
class HVDecomposition:
    """Lengths of the horizontal and vertical components of a curve crossing ``omega``."""

    h: float
    v: float

    def to_dict(self) -> dict[str, float]:
        return {"h": self.h, "v": self.v}


def hv_decomposition(X: TorusPoint, omega: Slope, a: Slope) -> HVDecomposition:
    """Split ``a`` at ``X`` into its components along and across ``omega``.

    With ``ω̃`` the imaginary axis and ``φ`` the holonomy of ``a``, ``v`` is the
    distance from ``ω̃`` to ``φ(ω̃)`` and ``h`` the translation length of
    ``ψ⁻¹φ``, where ``ψ`` translates along their common perpendicular.
    """
    if a == omega:
        return HVDecomposition(h=length_of(X, a), v=0.0)
    word = holonomy(X, a, omega)
    (p, q), (r, s) = word
    if q * r <= 0:
        raise DisjointCurves(f"{a} does not cross {omega}")
    # φ(ω̃) has endpoints q/s and p/r; cosh v = 1 + 2qr
    v = 2 * math.asinh(math.sqrt(q * r))
    radius = math.sqrt((q / s) * (p / r))
    frame = np.array([[1.0, radius], [-1.0, radius]])
    shift = np.diag([math.exp(-v / 2), math.exp(v / 2)])
    psi_inv = np.linalg.inv(frame) @ shift @ frame
    rest = psi_inv @ word
    h = abs(math.log(abs(rest[0][0] / rest[1][1])))
    return HVDecomposition(h=h, v=v)


def collar_twist(X: TorusPoint, lam: Slope, a: Slope) -> float:
    """Geometric twisting of ``lam`` about ``a``: the projection length of ``lam`` to ``a`` over ``ℓ_a``."""
    length = length_of(X, a)
    v = hv_decomposition(X, lam, a).v
    ratio = math.sinh(length / 2) / math.sinh(v / 2)
    return 2 * math.acosh(max(1.0, ratio)) / length
