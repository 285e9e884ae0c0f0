"""SVG figures: in-envelopes and envelope quadrilaterals in the disk, and norm balls.

Points of Teichmüller space are placed with the approximate half-plane chart
``u + iv = τ_base/ℓ_base + iπ/ℓ_base`` and then mapped to the disk. The chart
is qualitative only and every figure says so in its ``<desc>``.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from collections.abc import Iterable, Sequence

from attrs import field, frozen, validators

from .constants import SVG_SIZE
from .farey import Slope
from .norm import NormSphere
from .stretch_envelope import EnvelopeQuad, Sign, stretch_point
from .torus_model import FnCoords, TorusPoint, fn_coords, from_fn, systole_triple

__all__ = [
    "ChartPoint",
    "chart",
    "from_chart",
    "render_envelopes",
    "render_quad",
    "render_sphere",
    "svg_is_well_formed",
    "to_pixels",
]

_RAY_SAMPLES = 40
_EDGE_SAMPLES = 40
_MARGIN = 0.95
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_NUMERIC_ATTRIBUTES = ("cx", "cy", "r", "x1", "y1", "x2", "y2", "width", "height")


@frozen
class ChartPoint:
    """A point ``u + iv`` of the upper half-plane chart."""

    u: float
    v: float = field(validator=validators.gt(0))

    def to_disk(self) -> complex:
        z = complex(self.u, self.v)
        return (z - 1j) / (z + 1j)


def chart(X: TorusPoint, base: Slope) -> ChartPoint:
    """``(τ_base/ℓ_base, π/ℓ_base)``."""
    c = fn_coords(X, base)
    return ChartPoint(c.twist / c.length, math.pi / c.length)


def from_chart(u: float, v: float, base: Slope) -> TorusPoint:
    """Inverse of :func:`chart`."""
    length = math.pi / v
    return from_fn(FnCoords(base, length, u * length))


def to_pixels(point: TorusPoint, base: Slope) -> tuple[str, str]:
    """Formatted SVG coordinates of ``point`` in the disk figure."""
    return _pixels(chart(point, base).to_disk())


def _pixels(w: complex) -> tuple[str, str]:
    half = SVG_SIZE / 2
    return f"{half * (1 + _MARGIN * w.real):.6f}", f"{half * (1 - _MARGIN * w.imag):.6f}"


def _polyline(points: Iterable[tuple[str, str]], color: str, width: float = 1.5) -> str:
    coords = " ".join(f"{x},{y}" for x, y in points)
    return f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width:.1f}"/>'


def _document(body: Sequence[str], desc: str) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">'
    )
    return "\n".join([head, f"<desc>{desc}</desc>", *body, "</svg>"]) + "\n"


def _disk(base: Slope) -> tuple[list[str], str]:
    half = SVG_SIZE / 2
    circle = (
        f'<circle cx="{half:.6f}" cy="{half:.6f}" r="{half * _MARGIN:.6f}" '
        f'fill="none" stroke="#000000" stroke-width="1.0"/>'
    )
    desc = f"approximate chart u + iv = twist/length + i pi/length about {base}, mapped to the disk"
    return [circle], desc


def _dot(x: str, y: str, color: str) -> str:
    return f'<circle cx="{x}" cy="{y}" r="3.000000" fill="{color}"/>'


def _quad_elements(quad: EnvelopeQuad, base: Slope) -> list[str]:
    body = []
    for index, edge in enumerate(quad.edges()):
        if edge.duration <= 0:
            continue
        times = [edge.duration * k / _EDGE_SAMPLES for k in range(_EDGE_SAMPLES + 1)]
        color = _COLORS[index % len(_COLORS)]
        body.append(_polyline((to_pixels(edge.point_at(t), base) for t in times), color))
    for point in (quad.X, quad.Y, quad.corner_plus, quad.corner_minus):
        body.append(_dot(*to_pixels(point, base), "#000000"))
    return body


def render_envelopes(
    X: TorusPoint,
    curves: Sequence[Slope],
    T: float = 2.0,
    quad: EnvelopeQuad | None = None,
    base: Slope | None = None,
) -> str:
    """Both boundary rays of ``In(X, α)``, ``t ∈ [−T, 0]``, for every curve in ``curves``."""
    base = base or systole_triple(X)[1][0]
    body, desc = _disk(base)
    for index, a in enumerate(curves):
        color = _COLORS[index % len(_COLORS)]
        for sign in (Sign.PLUS, Sign.MINUS):
            times = [-T * k / _RAY_SAMPLES for k in range(_RAY_SAMPLES + 1)]
            body.append(_polyline((to_pixels(stretch_point(X, a, sign, t), base) for t in times), color))
    if curves:
        body.append(_dot(*to_pixels(X, base), "#000000"))
    if quad is not None:
        body.extend(_quad_elements(quad, base))
    return _document(body, desc)


def render_quad(quad: EnvelopeQuad, base: Slope | None = None) -> str:
    """The four edges and corners of an envelope."""
    base = base or quad.alpha
    body, desc = _disk(base)
    body.extend(_quad_elements(quad, base))
    return _document(body, desc)


def render_sphere(sphere: NormSphere) -> str:
    """The sampled unit sphere in its tangent chart, flat segments drawn thick."""
    points = sphere.points()
    reach = max(math.hypot(x, y) for x, y in points)
    half = SVG_SIZE / 2
    scale = half * _MARGIN / reach

    def pixels(p: tuple[float, float]) -> tuple[str, str]:
        return f"{half + scale * p[0]:.6f}", f"{half - scale * p[1]:.6f}"

    body = [_polyline([pixels(p) for p in [*points, points[0]]], "#000000", 1.0)]
    n = len(points)
    for index, seg in enumerate(sphere.flat_segments):
        span = (seg.end - seg.start) % n
        run = [points[(seg.start + k) % n] for k in range(span + 1)]
        body.append(_polyline([pixels(p) for p in run], _COLORS[index % len(_COLORS)], 3.0))
    body.append(_dot(*pixels((0.0, 0.0)), "#000000"))
    desc = f"unit sphere of the Thurston norm at {sphere.base} in an orthonormal tangent frame"
    return _document(body, desc)


def svg_is_well_formed(text: str) -> bool:
    """One ``<svg>`` root element and finite numbers in every coordinate attribute."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError:
        return False
    if not root.tag.endswith("svg"):
        return False
    for element in root.iter():
        values = [element.attrib[name] for name in _NUMERIC_ATTRIBUTES if name in element.attrib]
        if "points" in element.attrib:
            values.extend(c for pair in element.attrib["points"].split() for c in pair.split(","))
        try:
            if not all(math.isfinite(float(v)) for v in values):
                return False
        except ValueError:
            return False
    return True
