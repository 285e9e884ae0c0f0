"""Thurston norm ``‖v‖ = sup_α dℓ_α(v)/ℓ_α`` on the tangent plane and its unit sphere.

Tangent vectors come out of the Fenchel–Nielsen parametrisation by feeding
dual numbers through it: a dual stretch time gives the stretch direction, a
dual twist gives the earthquake direction.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Any

import mpmath
import numpy as np
from attrs import frozen

from .constants import FLAT_SEGMENT_FLOOR
from .dual import Dual, acosh, derivative, exp, primal
from .exceptions import FlatSegmentUnderflow, PreconditionError, ZeroTangent
from .farey import Slope, Vector, canonical_neighbor, dehn_twist
from .hooks import SearchHook
from .precision import digits, extended
from .search import SearchBudget, best_first_search
from .stretch_envelope import Sign, stretch_twist, transversality_gap_at
from .torus_model import (
    TangentVector,
    TorusPoint,
    length_of,
    short_marking,
    tangent_frame,
    tangent_from_fn,
    trace_at,
)

__all__ = [
    "FlatSegment",
    "NormSphere",
    "NormValue",
    "SphereSample",
    "SphereSegment",
    "earthquake_tangent",
    "flat_segment",
    "length_from_sphere",
    "stretch_tangent",
    "thurston_norm",
    "unit_sphere",
]

logger = logging.getLogger(__name__)

# length above which the transversality gap is taken in its exponential form
_LONG_CURVE = 40.0


@frozen
class NormValue:
    """Best lower bound for a Thurston norm, with the curve attaining it."""

    value: float
    witness: Slope
    search_nodes: int = 0
    saturated: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "witness": str(self.witness),
            "search_nodes": self.search_nodes,
            "saturated": self.saturated,
        }


def thurston_norm(
    X: TorusPoint,
    v: TangentVector,
    budget: SearchBudget | None = None,
    hooks: Sequence[SearchHook] = (),
) -> NormValue:
    """Maximise ``dℓ_α(v)/ℓ_α(X)`` over slopes.

    Raises
    ------
    ZeroTangent
        ``v`` is the zero vector.
    PreconditionError
        ``v`` is not based at ``X``.
    """
    if v.base != X:
        raise PreconditionError(f"tangent vector is based at {v.base}, not at {X}")
    if v.is_zero():
        raise ZeroTangent("the Thurston norm of the zero vector is not searched")
    duals = tuple(Dual(t, d) for t, d in zip(X.triple, v.delta, strict=True))

    def dual_trace(w: Vector) -> Dual:
        with extended(*X.triple):
            return trace_at(duals, w)

    def flip(a: Dual, b: Dual, c: Dual) -> Dual:
        with extended(a.value, b.value, c.value):
            return a * b - c

    def objective(_: Slope, t: Dual) -> float:
        with extended(t.value):
            length = 2 * acosh(t / 2)
            return float(derivative(length) / primal(length))

    outcome = best_first_search(
        dual_trace,
        flip,
        objective,
        lambda t: digits(t.value),
        seeds=short_marking(X),
        budget=budget,
        hooks=hooks,
    )
    return NormValue(outcome.value, outcome.witness, outcome.nodes, outcome.saturated)


# --------------------------------------------------------------------------- #
# Distinguished tangent vectors                                               #
# --------------------------------------------------------------------------- #


def stretch_tangent(X: TorusPoint, a: Slope, sign: Sign) -> TangentVector:
    """Velocity at ``t = 0`` of the ``a^sign`` stretch line through ``X``."""

    def coords(length: Any, twist: Any) -> tuple[Any, Any]:
        t = Dual(mpmath.mpf(0), mpmath.mpf(1))
        return length * exp(t), stretch_twist(length, twist, sign, t)

    return tangent_from_fn(X, a, coords)


def earthquake_tangent(X: TorusPoint, a: Slope) -> TangentVector:
    """``∂/∂τ`` at constant length in Fenchel–Nielsen coordinates about ``a``."""
    return tangent_from_fn(X, a, lambda length, twist: (length, Dual(twist, mpmath.mpf(1))))


# --------------------------------------------------------------------------- #
# Flat segments                                                               #
# --------------------------------------------------------------------------- #


@frozen
class FlatSegment:
    """The face of the unit sphere on which ``alpha`` is maximally stretched.

    ``length`` is ``‖v⁺ − v⁻‖``; ``log_length`` keeps it usable after it
    drops below double precision.
    """

    alpha: Slope
    v_plus: TangentVector
    v_minus: TangentVector
    length: float
    log_length: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": str(self.alpha),
            "v_plus": self.v_plus.to_dict(),
            "v_minus": self.v_minus.to_dict(),
            "length": self.length,
            "log_length": self.log_length,
        }


def _log_transversality_gap(length: float) -> float:
    if length > _LONG_CURVE:
        # 4·log coth(ℓ/2) + 4ℓ/sinh ℓ ≈ 8(1 + ℓ)e^{−ℓ}
        return math.log(8.0) + math.log1p(length) - length
    return math.log(transversality_gap_at(length))


def flat_segment(
    X: TorusPoint,
    a: Slope,
    budget: SearchBudget | None = None,
    *,
    normalize: bool = True,
) -> FlatSegment:
    """Endpoints and length of the flat segment of ``a`` on the unit sphere at ``X``.

    The endpoints differ only in twist, by the transversality gap times the
    earthquake vector, so ``|F| = gap · ‖EQ_a‖``.

    Raises
    ------
    FlatSegmentUnderflow
        ``|F|`` is below the representable floor.
    """
    length = length_of(X, a)
    quake = thurston_norm(X, earthquake_tangent(X, a), budget)
    log_size = _log_transversality_gap(length) + math.log(quake.value)
    if log_size < math.log(FLAT_SEGMENT_FLOOR):
        raise FlatSegmentUnderflow(f"|F(X, {a})| ≈ e^{log_size:.1f} is below {FLAT_SEGMENT_FLOOR:g}")
    v_plus, v_minus = stretch_tangent(X, a, Sign.PLUS), stretch_tangent(X, a, Sign.MINUS)
    if normalize:
        v_plus = v_plus * (1 / thurston_norm(X, v_plus, budget).value)
        v_minus = v_minus * (1 / thurston_norm(X, v_minus, budget).value)
    return FlatSegment(a, v_plus, v_minus, math.exp(log_size), log_size)


# --------------------------------------------------------------------------- #
# Unit sphere                                                                 #
# --------------------------------------------------------------------------- #


@frozen
class SphereSample:
    """Direction ``angle`` in the tangent chart, its unit-sphere radius and maximiser."""

    angle: float
    radius: float
    witness: Slope

    @property
    def point(self) -> tuple[float, float]:
        return (self.radius * math.cos(self.angle), self.radius * math.sin(self.angle))


@frozen
class SphereSegment:
    """A run of consecutive samples sharing the maximiser ``alpha``."""

    alpha: Slope
    start: int
    end: int
    start_angle: float
    end_angle: float

    def to_dict(self) -> dict[str, Any]:
        return {"alpha": str(self.alpha), "start_angle": self.start_angle, "end_angle": self.end_angle}


@frozen
class NormSphere:
    """Sampled unit sphere of the Thurston norm at ``base``, in the chart of ``frame``."""

    base: TorusPoint
    frame: tuple[TangentVector, TangentVector]
    samples: tuple[SphereSample, ...]
    flat_segments: tuple[SphereSegment, ...]

    def points(self) -> list[tuple[float, float]]:
        return [s.point for s in self.samples]

    def project(self, v: TangentVector) -> tuple[float, float]:
        """Chart coordinates of a tangent vector at ``base``."""
        delta = np.array([float(d) for d in v.delta])
        e1, e2 = (np.array([float(d) for d in e.delta]) for e in self.frame)
        return (float(delta @ e1), float(delta @ e2))

    def lift(self, point: tuple[float, float]) -> TangentVector:
        e1, e2 = self.frame
        return e1 * point[0] + e2 * point[1]

    def is_convex(self, tol: float = 1e-7) -> bool:
        """No reflex vertex: every turn of the closed polyline is counter-clockwise within ``tol``."""
        pts = np.array(self.points())
        scale = float(np.max(np.linalg.norm(pts, axis=1))) ** 2
        for k in range(len(pts)):
            a, b, c = pts[k - 1], pts[k], pts[(k + 1) % len(pts)]
            turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if turn < -tol * scale:
                return False
        return True

    def winding_number(self) -> int:
        """Winding number of the polyline around the origin."""
        angles = [math.atan2(y, x) for x, y in self.points()]
        total = 0.0
        for k in range(len(angles)):
            step = angles[(k + 1) % len(angles)] - angles[k]
            total += (step + math.pi) % (2 * math.pi) - math.pi
        return round(total / (2 * math.pi))

    def segment(self, alpha: Slope) -> SphereSegment | None:
        return next((s for s in self.flat_segments if s.alpha == alpha), None)

    def segment_arc_length(self, alpha: Slope, budget: SearchBudget | None = None) -> float:
        """Thurston length of the chord spanned by the samples of ``alpha``'s flat segment.

        Zero when ``alpha`` has no detected segment.
        """
        seg = self.segment(alpha)
        if seg is None:
            return 0.0
        first, last = self.samples[seg.start].point, self.samples[seg.end].point
        chord = self.lift((last[0] - first[0], last[1] - first[1]))
        return thurston_norm(self.base, chord, budget).value

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "samples": [
                {"angle": s.angle, "radius": s.radius, "witness": str(s.witness)} for s in self.samples
            ],
            "flat_segments": [seg.to_dict() for seg in self.flat_segments],
        }


def _group(samples: Sequence[SphereSample]) -> list[SphereSegment]:
    """Maximal cyclic runs of two or more samples with the same witness."""
    n = len(samples)
    if all(s.witness == samples[0].witness for s in samples):
        return []
    # start at a witness change so that no run wraps past index 0 unnoticed
    offset = next(k for k in range(n) if samples[k].witness != samples[k - 1].witness)
    runs: list[SphereSegment] = []
    k = 0
    while k < n:
        j = k
        while j + 1 < n and samples[(offset + j + 1) % n].witness == samples[(offset + k) % n].witness:
            j += 1
        if j > k:
            first, last = (offset + k) % n, (offset + j) % n
            runs.append(
                SphereSegment(samples[first].witness, first, last, samples[first].angle, samples[last].angle)
            )
        k = j + 1
    return sorted(runs, key=lambda r: r.start)


def unit_sphere(X: TorusPoint, n: int, budget: SearchBudget | None = None) -> NormSphere:
    """Sample the unit sphere at ``X`` in ``n`` evenly spaced chart directions."""
    if n < 16:
        raise PreconditionError(f"a sphere needs at least 16 samples, got {n}")
    e1, e2 = tangent_frame(X)
    samples = []
    for k in range(n):
        angle = 2 * math.pi * k / n
        norm = thurston_norm(X, e1 * math.cos(angle) + e2 * math.sin(angle), budget)
        samples.append(SphereSample(angle, 1 / norm.value, norm.witness))
    segments = _group(samples)
    logger.debug("unit sphere at %s: %d samples, %d flat segments", X, n, len(segments))
    return NormSphere(X, (e1, e2), tuple(samples), tuple(segments))


# --------------------------------------------------------------------------- #
# Length reconstruction                                                       #
# --------------------------------------------------------------------------- #


def length_from_sphere(
    X: TorusPoint,
    a: Slope,
    n_max: int,
    sign: int = 1,
    budget: SearchBudget | None = None,
) -> float:
    """Recover ``ℓ_a(X)`` from the flat segments of the twisted curves ``β_n = D_a^{±n}β``.

    ``|log|F(X, β_n)||`` grows like ``ℓ_a·n + c·log n + d``; the fit runs over
    the upper half of ``1..n_max`` and returns the slope in ``n``.
    """
    if length_of(X, a) < 3:
        raise PreconditionError(f"ℓ_{a} must be at least 3 for the reconstruction")
    if n_max < 4:
        raise PreconditionError("n_max must be at least 4")
    beta = canonical_neighbor(a)
    ns = np.arange(max(1, n_max // 2), n_max + 1)
    sizes = np.array(
        [-flat_segment(X, dehn_twist(beta, a, sign * int(n)), budget, normalize=False).log_length for n in ns]
    )
    design = np.column_stack([ns, np.log(ns), np.ones(len(ns))])
    coeffs, *_ = np.linalg.lstsq(design, sizes, rcond=None)
    logger.debug("length fit for %s: coefficients %s", a, coeffs)
    return float(coeffs[0])
