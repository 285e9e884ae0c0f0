import math

import pytest

from thurston_torus.farey import INFINITY, ZERO
from thurston_torus.norm import unit_sphere
from thurston_torus.render import (
    ChartPoint,
    chart,
    from_chart,
    render_envelopes,
    render_quad,
    render_sphere,
    svg_is_well_formed,
    to_pixels,
)
from thurston_torus.stretch_envelope import Sign, envelope, stretch_point
from thurston_torus.torus_model import FnCoords, TorusPoint, dehn_twist_point, from_fn


def test_chart_of_untwisted_point() -> None:
    """Test that a point without twist sits on the imaginary axis at height π/ℓ."""
    point = chart(from_fn(FnCoords(INFINITY, 2.5, 0.0)), INFINITY)
    assert point.u == pytest.approx(0.0, abs=1e-12)
    assert point.v == pytest.approx(math.pi / 2.5)


def test_dehn_twist_shifts_chart(thick_point: TorusPoint) -> None:
    """Test that a Dehn twist about the base curve is a unit translation."""
    before = chart(thick_point, INFINITY)
    after = chart(dehn_twist_point(thick_point, INFINITY, 1), INFINITY)
    assert after.u == pytest.approx(before.u + 1, rel=1e-9)
    assert after.v == pytest.approx(before.v, rel=1e-9)


def test_from_chart_inverts_chart() -> None:
    """Test that placing a chart point and reading it back is the identity."""
    point = chart(from_chart(0.3, 0.8, ZERO), ZERO)
    assert (point.u, point.v) == pytest.approx((0.3, 0.8), rel=1e-9)


def test_chart_point_lives_in_upper_half_plane() -> None:
    """Test that non-positive heights are rejected and the disk image is inside the unit disk."""
    with pytest.raises(ValueError):
        ChartPoint(0.0, 0.0)
    assert abs(ChartPoint(0.0, 1.0).to_disk()) == pytest.approx(0.0)
    assert abs(ChartPoint(5.0, 0.1).to_disk()) < 1


def test_envelopes_figure(thick_point: TorusPoint) -> None:
    """Test the in-envelope figure: two rays per curve, one marked point."""
    svg = render_envelopes(thick_point, [INFINITY, ZERO], T=1.0)
    assert svg_is_well_formed(svg)
    assert svg.count("<polyline") == 4
    assert "approximate chart" in svg
    assert f'cx="{to_pixels(thick_point, ZERO)[0]}"' in svg


def test_envelopes_figure_without_curves(thick_point: TorusPoint) -> None:
    """Test that an empty curve list draws only the disk boundary."""
    svg = render_envelopes(thick_point, [])
    assert svg_is_well_formed(svg)
    assert "<polyline" not in svg
    assert svg.count("<circle") == 1
    assert svg == render_envelopes(thick_point, [])


def test_quad_figure(thick_point: TorusPoint) -> None:
    """Test that an envelope quadrilateral is drawn with its four corners."""
    corner = stretch_point(thick_point, INFINITY, Sign.PLUS, 0.5)
    quad = envelope(thick_point, stretch_point(corner, INFINITY, Sign.MINUS, 0.5))
    svg = render_quad(quad)
    assert svg_is_well_formed(svg)
    assert svg.count('r="3.000000"') == 4
    assert 1 <= svg.count("<polyline") <= 4


def test_sphere_figure(thick_point: TorusPoint) -> None:
    """Test that the sampled unit sphere renders as a closed polyline."""
    sphere = unit_sphere(thick_point, 16)
    svg = render_sphere(sphere)
    assert svg_is_well_formed(svg)
    assert svg.count("<polyline") == 1 + len(sphere.flat_segments)
    assert "unit sphere" in svg


@pytest.mark.parametrize(
    "text",
    [
        "<svg",
        "<html/>",
        '<svg xmlns="http://www.w3.org/2000/svg"><circle cx="nan" cy="1" r="1"/></svg>',
        '<svg xmlns="http://www.w3.org/2000/svg"><polyline points="1,2 x,3"/></svg>',
    ],
)
def test_malformed_svg_is_rejected(text: str) -> None:
    """Test that broken documents and non-numeric coordinates are caught."""
    assert not svg_is_well_formed(text)
