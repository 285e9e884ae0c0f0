"""Tests for stretch lines, out-envelopes and envelope quadrilaterals."""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from thurston_torus.exceptions import NotSimpleCurve, TraceRangeError
from thurston_torus.farey import INFINITY, ONE, ZERO, Slope, apply
from thurston_torus.metric import thurston_dist
from thurston_torus.search import SearchBudget
from thurston_torus.stretch_envelope import (
    SectorPosition,
    Sign,
    envelope,
    log_coth_half,
    out_contains,
    shear_coords,
    stretch_point,
    stretch_twist,
    transversality_gap_at,
)
from thurston_torus.torus_model import FnCoords, TorusPoint, fn_coords, from_fn, length_of, relabel

SLOPES = [INFINITY, ZERO, ONE, Slope(-1, 1), Slope(2, 3), Slope(-3, 1)]

# order-three rotation of the hexagonal torus: 1/0 -> 0/1 -> 1/1 -> 1/0
ROTATION = ((0, -1), (1, -1))


# --------------------------------------------------------------------------- #
# Stretch lines                                                               #
# --------------------------------------------------------------------------- #


@pytest.mark.parametrize("length", [0.05, 1.0, 30.0, 50.0])
def test_log_coth_half(length: float) -> None:
    """The cancellation-free form matches a high-precision evaluation."""
    with mpmath.workdps(50):
        exact = float(mpmath.log(mpmath.coth(mpmath.mpf(length) / 2)))
    assert log_coth_half(length) == pytest.approx(exact, rel=1e-9)


@pytest.mark.parametrize("length", [0.1, 1.0, 5.0, 20.0])
def test_transversality_gap_is_twist_separation_rate(length: float) -> None:
    """The gap is the derivative of τ⁺ − τ⁻ at time zero."""
    h = 1e-5

    def separation(t: float) -> float:
        return float(stretch_twist(length, 0.0, Sign.PLUS, t) - stretch_twist(length, 0.0, Sign.MINUS, t))

    numeric = (separation(h) - separation(-h)) / (2 * h)
    assert transversality_gap_at(length) == pytest.approx(numeric, rel=1e-4)


def test_transversality_gap_is_positive() -> None:
    """The two stretch lines through a point separate for every length."""
    assert all(transversality_gap_at(float(x)) > 0 for x in np.linspace(0.1, 20.0, 50))


@pytest.mark.parametrize("sign", [Sign.PLUS, Sign.MINUS])
def test_stretch_scales_length_and_shear(thick_point: TorusPoint, sign: Sign) -> None:
    """Along a stretch line both the length and the matching shear scale by e^t."""
    a = Slope(1, 2)
    before = shear_coords(thick_point, a, sign)
    for t in (-0.4, 0.3, 1.1):
        after = shear_coords(stretch_point(thick_point, a, sign, t), a, sign)
        assert after.length == pytest.approx(math.exp(t) * before.length, rel=1e-10)
        assert after.shear == pytest.approx(math.exp(t) * before.shear, rel=1e-9, abs=1e-9)


def test_stretch_is_a_flow(thick_point: TorusPoint) -> None:
    """Stretching for s then t equals stretching for s + t."""
    two_steps = stretch_point(stretch_point(thick_point, ZERO, Sign.MINUS, 0.4), ZERO, Sign.MINUS, 0.7)
    one_step = stretch_point(thick_point, ZERO, Sign.MINUS, 1.1)
    for s in SLOPES:
        assert length_of(two_steps, s) == pytest.approx(length_of(one_step, s), rel=1e-9)
    assert stretch_point(thick_point, ZERO, Sign.PLUS, 0.0) is thick_point


def test_long_stretch_of_deep_curve(thick_point: TorusPoint) -> None:
    """Stretching 5/2 to a length near 100 keeps the point valid and on its stretch line."""
    a = Slope(5, 2)
    before = fn_coords(thick_point, a)
    after = fn_coords(stretch_point(thick_point, a, Sign.PLUS, 0.95), a)
    assert after.length == pytest.approx(before.length * math.exp(0.95), rel=1e-9)
    expected = stretch_twist(before.length, before.twist, Sign.PLUS, 0.95)
    assert after.twist == pytest.approx(expected, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("t", [8.0, 1000.0])
def test_stretch_out_of_range(thick_point: TorusPoint, t: float) -> None:
    """Stretch times that push a trace past the digit ceiling raise a range error."""
    with pytest.raises(TraceRangeError) as exc_info:
        stretch_point(thick_point, INFINITY, Sign.PLUS, t)
    assert exc_info.value.digits > 300


def test_stretch_commutes_with_rotation(symmetric_point: TorusPoint) -> None:
    """The order-three symmetry of (3, 3, 3) carries stretch rays to stretch rays."""
    rotated = relabel(symmetric_point, ROTATION)
    for s in SLOPES:
        assert length_of(rotated, s) == pytest.approx(length_of(symmetric_point, s), rel=1e-12)
    for a in (INFINITY, ZERO, ONE):
        image = Slope.from_vector(*apply(ROTATION, a.vector))
        for sign in Sign:
            moved = relabel(stretch_point(symmetric_point, a, sign, -0.8), ROTATION)
            direct = stretch_point(symmetric_point, image, sign, -0.8)
            for s in SLOPES:
                assert length_of(moved, s) == pytest.approx(length_of(direct, s), rel=1e-9)


# --------------------------------------------------------------------------- #
# Out-envelopes                                                               #
# --------------------------------------------------------------------------- #


def test_out_contains_positions(thick_point: TorusPoint) -> None:
    """Rays are boundary, a broken path lands inside, and shorter or twisted targets lie outside."""
    a = INFINITY
    corner = stretch_point(thick_point, a, Sign.PLUS, 0.5)
    inside = stretch_point(corner, a, Sign.MINUS, 0.5)
    c = fn_coords(thick_point, a)
    far = from_fn(FnCoords(a, c.length * math.e, c.twist + 40.0))

    assert out_contains(thick_point, a, stretch_point(thick_point, a, Sign.PLUS, 0.8)) is SectorPosition.BOUNDARY_PLUS
    assert out_contains(thick_point, a, stretch_point(thick_point, a, Sign.MINUS, 0.8)) is SectorPosition.BOUNDARY_MINUS
    assert out_contains(thick_point, a, inside) is SectorPosition.INTERIOR
    assert out_contains(thick_point, a, far) is SectorPosition.OUTSIDE
    assert out_contains(thick_point, a, thick_point) is SectorPosition.OUTSIDE
    assert out_contains(thick_point, a, stretch_point(thick_point, a, Sign.PLUS, -0.3)) is SectorPosition.OUTSIDE


# --------------------------------------------------------------------------- #
# Envelopes                                                                   #
# --------------------------------------------------------------------------- #


def test_envelope_of_identical_points(thick_point: TorusPoint) -> None:
    """X = Y gives a degenerate quadrilateral of zero size."""
    quad = envelope(thick_point, thick_point)
    assert quad.degenerate
    assert quad.distance == 0.0


def test_envelope_on_stretch_ray(thick_point: TorusPoint) -> None:
    """A target on a stretch ray gives the degenerate segment of that ray."""
    Y = stretch_point(thick_point, INFINITY, Sign.PLUS, 0.8)
    quad = envelope(thick_point, Y)
    assert quad.alpha == INFINITY
    assert quad.degenerate
    assert quad.distance == pytest.approx(0.8, abs=1e-6)
    assert quad.plus_durations[0] == pytest.approx(0.8, abs=1e-6)
    assert quad.minus_durations[1] == pytest.approx(0.8, abs=1e-6)


def test_envelope_quadrilateral(thick_point: TorusPoint) -> None:
    """A broken stretch path is the + boundary of its envelope; both boundaries are geodesics."""
    a = INFINITY
    corner = stretch_point(thick_point, a, Sign.PLUS, 0.5)
    Y = stretch_point(corner, a, Sign.MINUS, 0.5)
    quad = envelope(thick_point, Y)

    assert quad.alpha == a
    assert not quad.degenerate
    assert quad.plus_durations == pytest.approx((0.5, 0.5), abs=1e-6)
    assert sum(quad.minus_durations) == pytest.approx(1.0, abs=1e-9)
    assert length_of(quad.corner_plus, a) == pytest.approx(length_of(corner, a), rel=1e-6)
    assert [e.sign for e in quad.edges()] == [Sign.PLUS, Sign.MINUS, Sign.MINUS, Sign.PLUS]

    data = quad.to_dict()
    assert data["witness"] == "1/0"
    assert len(data["edges"]) == 4
    assert data["distance"] == pytest.approx(1.0, abs=1e-6)


def _broken_path(X: TorusPoint, a: Slope, t_plus: float, t_minus: float) -> TorusPoint:
    return stretch_point(stretch_point(X, a, Sign.PLUS, t_plus), a, Sign.MINUS, t_minus)


@pytest.mark.parametrize("alpha", [INFINITY, Slope(2, 3), Slope(-1, 2)])
def test_envelope_boundary_is_additive(thick_point: TorusPoint, alpha: Slope) -> None:
    """Every boundary point Z of the envelope satisfies d(X, Z) + d(Z, Y) = d(X, Y)."""
    Y = _broken_path(thick_point, alpha, 0.4, 0.3)
    quad = envelope(thick_point, Y)
    assert quad.alpha == alpha
    whole = thurston_dist(thick_point, Y).value
    assert whole == pytest.approx(0.7, abs=1e-6)
    points = quad.sample(1)
    assert len(points) == 4
    for Z in points:
        total = thurston_dist(thick_point, Z).value + thurston_dist(Z, Y).value
        assert total == pytest.approx(whole, abs=1e-6)


def test_points_off_the_envelope_are_not_additive(thick_point: TorusPoint) -> None:
    """Points outside the envelope lie on no geodesic from X to Y."""
    a = INFINITY
    corner = stretch_point(thick_point, a, Sign.PLUS, 0.5)
    Y = stretch_point(corner, a, Sign.MINUS, 0.5)
    whole = thurston_dist(thick_point, Y).value
    c = fn_coords(corner, a)
    over_twisted = from_fn(FnCoords(a, c.length, c.twist + 1.0))
    assert out_contains(thick_point, a, over_twisted) is SectorPosition.OUTSIDE
    other_ray = stretch_point(thick_point, ZERO, Sign.PLUS, 0.5)
    for Z in (over_twisted, other_ray, stretch_point(thick_point, a, Sign.PLUS, 1.5)):
        total = thurston_dist(thick_point, Z).value + thurston_dist(Z, Y).value
        assert total > whole + 1e-3


@pytest.mark.parametrize("alpha", [INFINITY, ZERO])
@pytest.mark.parametrize("delta", [1e-2, 1e-3])
def test_envelope_moves_continuously_with_target(thick_point: TorusPoint, alpha: Slope, delta: float) -> None:
    """Nudging Y in length or in twist moves the corners and the durations by O(δ)."""
    Y = _broken_path(thick_point, alpha, 0.5, 0.5)
    base = envelope(thick_point, Y)
    c = fn_coords(Y, alpha)
    for nudged in (stretch_point(Y, alpha, Sign.PLUS, delta), from_fn(FnCoords(alpha, c.length, c.twist + delta))):
        quad = envelope(thick_point, nudged)
        assert quad.alpha == alpha
        for before, after in ((base.corner_plus, quad.corner_plus), (base.corner_minus, quad.corner_minus)):
            b, a = fn_coords(before, alpha), fn_coords(after, alpha)
            assert abs(a.length - b.length) <= 20 * delta
            assert abs(a.twist - b.twist) <= 20 * delta
        pairs = zip(base.plus_durations + base.minus_durations, quad.plus_durations + quad.minus_durations, strict=True)
        assert max(abs(x - y) for x, y in pairs) <= 20 * delta


def test_envelope_refuses_non_isolated_witness(thick_point: TorusPoint) -> None:
    """An unreachable isolation threshold only lets stretch rays through, and strict mode not even those."""
    picky = SearchBudget(gap_tol=1e9)
    on_ray = stretch_point(thick_point, INFINITY, Sign.MINUS, 0.6)
    quad = envelope(thick_point, on_ray, picky)
    assert quad.degenerate
    assert quad.minus_durations == pytest.approx((0.6, 0.0), abs=1e-9)
    with pytest.raises(NotSimpleCurve):
        envelope(thick_point, on_ray, picky, strict=True)
    inside = stretch_point(stretch_point(thick_point, INFINITY, Sign.PLUS, 0.5), INFINITY, Sign.MINUS, 0.5)
    with pytest.raises(NotSimpleCurve) as exc_info:
        envelope(thick_point, inside, picky)
    assert exc_info.value.witness == INFINITY
