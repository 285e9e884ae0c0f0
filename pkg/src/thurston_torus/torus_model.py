"""Numerical model of the Teichmüller space of the once-punctured torus.

A point is a Markov triple: the traces of the curves 1/0, 0/1 and 1/1, which
satisfy ``x² + y² + z² = xyz``. The trace of any other slope follows from the
three-term relation ``tr(u + w) + tr(u − w) = tr(u)·tr(w)`` along the
Stern–Brocot descent to that slope. All kernels below are written against the
functions of :mod:`thurston_torus.dual`, so they accept dual numbers and yield
exact directional derivatives.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from typing import Any

import mpmath
import numpy as np
import numpy.typing as npt
from attrs import field, frozen
from mpmath import mp

from .constants import (
    CHEBYSHEV_LOOP_LIMIT,
    MARKOV_REL_TOL,
    PARABOLIC_CLAMP,
    PRECISION_DIGITS_CEILING,
    PRECISION_GUARD_DIGITS,
    PROJECTION_MAX_STEPS,
    REDUCTION_REL_TOL,
    SYSTOLE_TIE_REL_TOL,
    TANGENCY_REL_TOL,
    TRACE_DIGITS_CEILING,
)
from .dual import Dual, acosh, cosh, derivative, sinh, tanh
from .exceptions import DegenerateLength, InvalidTangent, MarkovViolation, PreconditionError, TraceRangeError
from .farey import (
    Marking,
    Matrix,
    Slope,
    Vector,
    apply,
    frame,
    inverse,
    stern_brocot_path,
    twist_matrix,
)
from .precision import digits, extended, to_mpf, working_dps

__all__ = [
    "FnCoords",
    "TangentVector",
    "TorusPoint",
    "base_triple_from_fn",
    "dehn_twist_point",
    "dlength",
    "flip",
    "fn_coords",
    "from_fn",
    "holonomy",
    "length_from_trace",
    "length_of",
    "markov_residual",
    "relabel",
    "short_marking",
    "systole_triple",
    "tangent_frame",
    "tangent_from_fn",
    "tangent_step",
    "trace_at",
    "trace_of",
]

logger = logging.getLogger(__name__)

Triple = tuple[Any, Any, Any]
Matrix2 = npt.NDArray[np.float64]

_BASE_VECTORS: tuple[Vector, Vector, Vector] = ((1, 0), (0, 1), (1, 1))


# --------------------------------------------------------------------------- #
# Markov variety                                                              #
# --------------------------------------------------------------------------- #


def markov_residual(triple: Sequence[Any]) -> float:
    """Relative residual ``|x² + y² + z² − xyz| / |xyz|``."""
    x, y, z = triple
    with extended(x, y, z):
        x, y, z = (to_mpf(t) for t in (x, y, z))
        product = x * y * z
        if product == 0:
            return math.inf
        return float(abs(x * x + y * y + z * z - product) / abs(product))


def _gradient(x: Any, y: Any, z: Any) -> Triple:
    return (2 * x - y * z, 2 * y - x * z, 2 * z - x * y)


def _project(x: Any, y: Any, z: Any) -> Triple:
    """Newton steps along the gradient onto ``x² + y² + z² = xyz``."""
    with extended(x, y, z):
        x, y, z = (to_mpf(t) for t in (x, y, z))
        floor = mpmath.mpf(10) ** (-(mp.dps - 5))
        for _ in range(PROJECTION_MAX_STEPS):
            value = x * x + y * y + z * z - x * y * z
            if abs(value) <= floor * abs(x * y * z):
                break
            gx, gy, gz = _gradient(x, y, z)
            step = value / (gx * gx + gy * gy + gz * gz)
            x, y, z = x - step * gx, y - step * gy, z - step * gz
        return x, y, z


@frozen
class TorusPoint:
    """A marked hyperbolic structure, stored as the traces of 1/0, 0/1 and 1/1."""

    x: Any = field(converter=to_mpf)
    y: Any = field(converter=to_mpf)
    z: Any = field(converter=to_mpf)

    def __attrs_post_init__(self) -> None:
        residual = markov_residual(self.triple)
        if min(self.x, self.y, self.z) <= 2:
            raise MarkovViolation(residual, f"traces {self} are not all greater than 2")
        if residual > MARKOV_REL_TOL:
            raise MarkovViolation(residual)

    @classmethod
    def symmetric(cls) -> TorusPoint:
        """The hexagonal torus ``(3, 3, 3)``, the minimum of the Markov variety."""
        return cls(3, 3, 3)

    @classmethod
    def from_triple(cls, triple: Sequence[Any]) -> TorusPoint:
        x, y, z = triple
        return cls(x, y, z)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TorusPoint:
        """Parse ``{"x", "y", "z"}``; the triple is projected onto the Markov variety."""
        raw = (data["x"], data["y"], data["z"])
        return cls.from_triple(_project(*(to_mpf(v) for v in raw)))

    @property
    def triple(self) -> Triple:
        return (self.x, self.y, self.z)

    def to_dict(self) -> dict[str, float]:
        return {"x": float(self.x), "y": float(self.y), "z": float(self.z)}

    def __str__(self) -> str:
        return "(" + ", ".join(mpmath.nstr(t, 12) for t in self.triple) + ")"


def flip(triple: Sequence[Any], index: int) -> Triple:
    """Replace the trace at ``index`` by (product of the other two) − itself.

    This is the move to the adjacent Farey triangle across the opposite edge.
    """
    residual = markov_residual(triple)
    if residual > MARKOV_REL_TOL:
        raise MarkovViolation(residual)
    out = list(triple)
    a, b = (out[j] for j in range(3) if j != index)
    out[index] = a * b - out[index]
    return (out[0], out[1], out[2])


# --------------------------------------------------------------------------- #
# Trace walk                                                                  #
# --------------------------------------------------------------------------- #


def _run(t_step: Any, t_prev: Any, t_cur: Any, count: int) -> tuple[Any, Any]:
    """Advance ``T_{j+1} = t_step·T_j − T_{j−1}`` by ``count`` steps; return ``(T_{k−1}, T_k)``."""
    if count <= CHEBYSHEV_LOOP_LIMIT:
        for _ in range(count):
            t_prev, t_cur = t_cur, t_step * t_cur - t_prev
        return t_prev, t_cur
    # T_j = (T_0 sinh((j+1)h) − T_{−1} sinh(jh)) / sinh h with t_step = 2 cosh h
    h = acosh(t_step / 2)
    s = sinh(h)

    def term(j: int) -> Any:
        return (t_cur * sinh((j + 1) * h) - t_prev * sinh(j * h)) / s

    return term(count - 1), term(count)


def trace_at(triple: Sequence[Any], v: Vector) -> Any:
    """Trace of the slope of ``v`` for the Markov triple attached to 1/0, 0/1, 1/1.

    Generic over the number type: ``mpf`` triples give ``mpf`` traces, dual
    triples give dual traces. The caller owns the working precision.
    """
    x, y, z = triple
    slope = Slope.from_vector(*v)
    if slope.q == 0:
        return x
    if slope.p == 0:
        return y
    half, runs = stern_brocot_path(slope.vector)
    if half > 0:
        t_lo, t_hi, t_mid = y, x, z
    else:
        t_lo, t_hi, t_mid = x, y, x * y - z
    for direction, count in runs:
        if direction > 0:
            t_lo, t_mid = _run(t_hi, t_lo, t_mid, count)
        else:
            t_hi, t_mid = _run(t_lo, t_hi, t_mid, count)
    return t_mid


def trace_of(X: TorusPoint, a: Slope) -> Any:
    """Trace of ``a`` at ``X`` as an ``mpf``."""
    with extended(*X.triple):
        return trace_at(X.triple, a.vector)


def length_from_trace(t: Any) -> float:
    """Translation length ``2·arccosh(t/2)`` of a hyperbolic trace, as a float."""
    size = digits(t)
    if size > TRACE_DIGITS_CEILING:
        raise TraceRangeError(size)
    if t > 2.5:
        return 2 * math.acosh(float(t) / 2)
    with extended(t):
        clamped = max(to_mpf(t), 2 + mpmath.mpf(PARABOLIC_CLAMP))
        return float(2 * mpmath.acosh(clamped / 2))


def length_of(X: TorusPoint, a: Slope) -> float:
    """Hyperbolic length of the geodesic in the class of ``a``."""
    return length_from_trace(trace_of(X, a))


# --------------------------------------------------------------------------- #
# Mapping classes                                                             #
# --------------------------------------------------------------------------- #


def _traces_at_columns(triple: Sequence[Any], g: Matrix) -> Triple:
    """Traces of ``g·(1,0)``, ``g·(0,1)`` and ``g·(1,1)``."""
    a, b, c = (trace_at(triple, apply(g, e)) for e in _BASE_VECTORS)
    return (a, b, c)


def _stable(compute: Callable[[], Triple], *inputs: Any, extra: int = 0) -> Triple:
    """Evaluate ``compute`` at doubling precision until two passes agree.

    Large outputs are later walked back down to small traces, so they must
    hold the guard digits on top of their own magnitude. Cancellation inside
    ``compute`` shows in neither its inputs nor its outputs.
    """
    dps = working_dps(*inputs, extra=extra)
    with mp.workdps(dps):
        out = compute()
    while True:
        dps = max(2 * dps, working_dps(*inputs, extra=extra + digits(*out)))
        if dps > PRECISION_DIGITS_CEILING:
            raise TraceRangeError(digits(*out), f"traces did not settle within {PRECISION_DIGITS_CEILING} digits")
        with mp.workdps(dps):
            refined = compute()
            tol = mpmath.mpf(10) ** -(PRECISION_GUARD_DIGITS + digits(*refined))
            settled = all(abs(r - o) <= tol * max(abs(r), 1) for r, o in zip(refined, out, strict=True))
        out = refined
        if settled:
            return out
        logger.debug("traces unsettled below %d digits, doubling", dps)


def _in_range(triple: Triple) -> Triple:
    size = digits(*triple)
    if size > TRACE_DIGITS_CEILING:
        raise TraceRangeError(size)
    return triple


def relabel(X: TorusPoint, g: Matrix) -> TorusPoint:
    """Push ``X`` forward by the mapping class acting on homology as ``g``.

    The image satisfies ``length_of(relabel(X, g), g·a) = length_of(X, a)``.
    """
    g_inv = inverse(g)
    return TorusPoint.from_triple(_in_range(_stable(lambda: _traces_at_columns(X.triple, g_inv), *X.triple)))


def dehn_twist_point(X: TorusPoint, a: Slope, n: int = 1) -> TorusPoint:
    """The point whose Fenchel–Nielsen twist about ``a`` exceeds that of ``X`` by ``n·ℓ_a``."""
    return relabel(X, twist_matrix(a, -n))


# --------------------------------------------------------------------------- #
# Systoles                                                                    #
# --------------------------------------------------------------------------- #


def _reduce(X: TorusPoint) -> list[tuple[Any, Slope]]:
    """Markov reduction: flip the largest trace while that strictly decreases it."""
    vectors: list[Vector] = list(_BASE_VECTORS)
    traces = list(X.triple)
    flips = 0
    with extended(*X.triple):
        while True:
            top = max(range(3), key=lambda j: traces[j])
            i, j = (k for k in range(3) if k != top)
            u, w = vectors[i], vectors[j]
            plus = (u[0] + w[0], u[1] + w[1])
            minus = (u[0] - w[0], u[1] - w[1])
            top_vector = vectors[top]
            same = top_vector in (plus, (-plus[0], -plus[1]))
            candidate = traces[i] * traces[j] - traces[top]
            if candidate >= traces[top] * (1 - REDUCTION_REL_TOL):
                break
            vectors[top] = minus if same else plus
            traces[top] = candidate
            flips += 1
    if flips:
        logger.debug("Markov reduction took %d flips", flips)
    return sorted(
        ((t, Slope.from_vector(*v)) for t, v in zip(traces, vectors, strict=True)),
        key=lambda item: (item[0], item[1].key),
    )


def _tied(a: Any, b: Any) -> bool:
    return bool(abs(a - b) <= SYSTOLE_TIE_REL_TOL * max(abs(a), abs(b)))


def systole_triple(X: TorusPoint) -> tuple[Triple, tuple[Slope, ...]]:
    """Reduced Markov triple of ``X`` and the slopes of minimal trace (ties included).

    The reduced triple is ordered by increasing trace.
    """
    reduced = _reduce(X)
    shortest = reduced[0][0]
    systoles = tuple(sorted((s for t, s in reduced if _tied(t, shortest)), key=lambda s: s.key))
    return (reduced[0][0], reduced[1][0], reduced[2][0]), systoles


def short_marking(X: TorusPoint) -> tuple[Marking, ...]:
    """All short markings of ``X``, sorted by their slopes.

    Three when the reduced triangle is equilateral, one when the two shortest
    curves are determined, two when a unique systole has two equally short
    neighbours.
    """
    (t1, s1), (t2, s2), (t3, s3) = _reduce(X)
    if _tied(t1, t3):
        markings = [Marking(s1, s2), Marking(s1, s3), Marking(s2, s3)]
    elif _tied(t1, t2) or not _tied(t2, t3):
        markings = [Marking(s1, s2)]
    else:
        markings = [Marking(s1, s2), Marking(s1, s3)]
    return tuple(sorted(markings, key=lambda m: tuple(s.key for s in m.slopes)))


# --------------------------------------------------------------------------- #
# Fenchel–Nielsen coordinates                                                 #
# --------------------------------------------------------------------------- #


@frozen
class FnCoords:
    """Length and twist of a point relative to the curve ``alpha``.

    The twist vanishes where ``tr(αβ) = tr(αβ⁻¹)`` for the canonical Farey
    neighbour ``β`` of ``alpha`` and grows by ``length`` per positive Dehn twist.
    """

    alpha: Slope
    length: float
    twist: float

    def __attrs_post_init__(self) -> None:
        if not self.length > 0:
            raise DegenerateLength(f"length {self.length} about {self.alpha} is not positive")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FnCoords:
        return cls(Slope.parse(str(data["alpha"])), float(data["length"]), float(data["twist"]))

    def to_dict(self) -> dict[str, Any]:
        return {"alpha": str(self.alpha), "length": self.length, "twist": self.twist}


def _fn_triple(length: Any, twist: Any) -> Triple:
    """Traces of α, β and α + β in the frame of α, for ``ℓ_α = length`` and ``τ_α = twist``."""
    half = length / 2
    c = 2 / tanh(half)
    return (2 * cosh(half), c * cosh(twist / 2), c * cosh((twist + length) / 2))


def base_triple_from_fn(alpha: Slope, length: Any, twist: Any) -> Triple:
    """Base Markov triple of the point with the given coordinates about ``alpha``.

    Generic over the number type so that dual ``length`` or ``twist`` produce
    tangent vectors. The caller owns the working precision.
    """
    return _traces_at_columns(_fn_triple(length, twist), inverse(frame(alpha)))


def fn_coords(X: TorusPoint, a: Slope) -> FnCoords:
    """Fenchel–Nielsen length and twist of ``X`` about ``a``."""
    g = frame(a)
    x, y, z = _stable(lambda: _traces_at_columns(X.triple, g), *X.triple)
    with extended(x, y, z, *X.triple):
        twist = 2 * mpmath.asinh((2 * z - x * y) / (2 * x))
    return FnCoords(a, length_from_trace(x), float(twist))


def _fn_digits(length: float, twist: float) -> int:
    """Decimal digits of the frame traces ``2cosh(ℓ/2)`` and ``2coth(ℓ/2)cosh(τ/2)``.

    Raises
    ------
    TraceRangeError
        When either is beyond the supported range.
    """
    size = max(length, abs(twist)) / (2 * math.log(10))
    if not size <= TRACE_DIGITS_CEILING:
        raise TraceRangeError(int(size) + 1 if math.isfinite(size) else TRACE_DIGITS_CEILING + 1)
    # cosh((τ + ℓ)/2) carries about (|τ| + ℓ)/(2 ln 10) digits
    return int((abs(twist) + length) / (2 * math.log(10))) + 1


def from_fn(c: FnCoords) -> TorusPoint:
    """The point with Fenchel–Nielsen coordinates ``c``."""
    extra = _fn_digits(c.length, c.twist)
    length, twist = to_mpf(c.length), to_mpf(c.twist)
    return TorusPoint.from_triple(_in_range(_stable(lambda: base_triple_from_fn(c.alpha, length, twist), extra=extra)))


# --------------------------------------------------------------------------- #
# Tangent vectors                                                             #
# --------------------------------------------------------------------------- #


@frozen
class TangentVector:
    """A derivative ``(dx, dy, dz)`` of the base Markov triple at ``base``."""

    base: TorusPoint
    dx: Any = field(converter=to_mpf)
    dy: Any = field(converter=to_mpf)
    dz: Any = field(converter=to_mpf)

    def __attrs_post_init__(self) -> None:
        with extended(*self.base.triple):
            gradient = _gradient(*self.base.triple)
            x, y, z = self.base.triple
            lhs = 2 * (x * self.dx + y * self.dy + z * self.dz)
            rhs = self.dx * y * z + x * self.dy * z + x * y * self.dz
            scale = mpmath.sqrt(sum(g * g for g in gradient)) * mpmath.sqrt(sum(d * d for d in self.delta))
            allowed = TANGENCY_REL_TOL * max(abs(lhs), abs(rhs), scale)
            if abs(lhs - rhs) > allowed:
                raise InvalidTangent(f"vector {self.to_dict()['delta']} is not tangent at {self.base}")

    @classmethod
    def from_duals(cls, triple: Sequence[Any]) -> TangentVector:
        """Read the base point and the derivative off a dual triple."""
        values = [t.value if isinstance(t, Dual) else t for t in triple]
        return cls(TorusPoint.from_triple(values), *(derivative(t) for t in triple))

    @property
    def delta(self) -> Triple:
        return (self.dx, self.dy, self.dz)

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.delta)

    def _check_base(self, other: TangentVector) -> None:
        if other.base != self.base:
            raise PreconditionError("tangent vectors at different points cannot be combined")

    def __add__(self, other: TangentVector) -> TangentVector:
        self._check_base(other)
        return TangentVector(self.base, self.dx + other.dx, self.dy + other.dy, self.dz + other.dz)

    def __sub__(self, other: TangentVector) -> TangentVector:
        self._check_base(other)
        return TangentVector(self.base, self.dx - other.dx, self.dy - other.dy, self.dz - other.dz)

    def __mul__(self, scalar: Any) -> TangentVector:
        return TangentVector(self.base, self.dx * scalar, self.dy * scalar, self.dz * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> TangentVector:
        return self * -1

    def to_dict(self) -> dict[str, Any]:
        return {"base": self.base.to_dict(), "delta": [float(d) for d in self.delta]}


def dlength(X: TorusPoint, a: Slope, v: TangentVector) -> float:
    """Directional derivative of ``ℓ_a`` at ``X`` along ``v``."""
    if v.base != X:
        raise PreconditionError(f"tangent vector is based at {v.base}, not at {X}")
    with extended(*X.triple):
        duals = tuple(Dual(t, d) for t, d in zip(X.triple, v.delta, strict=True))
        trace = trace_at(duals, a.vector)
        return float(derivative(2 * acosh(trace / 2)))


def tangent_from_fn(X: TorusPoint, alpha: Slope, coords: Callable[[Any, Any], tuple[Any, Any]]) -> TangentVector:
    """Derivative of the base triple along a dual curve of coordinates about ``alpha``.

    ``coords`` maps the ``mpf`` length and twist of ``X`` about ``alpha`` to
    dual ones. It is re-run at every working precision tried.
    """
    c = fn_coords(X, alpha)
    extra = _fn_digits(c.length, c.twist)

    def compute() -> Triple:
        length, twist = coords(to_mpf(c.length), to_mpf(c.twist))
        dx, dy, dz = (derivative(t) for t in base_triple_from_fn(alpha, length, twist))
        return (dx, dy, dz)

    return TangentVector(X, *_stable(compute, *X.triple, extra=extra))


def tangent_frame(X: TorusPoint) -> tuple[TangentVector, TangentVector]:
    """An orthonormal frame of the tangent plane at ``X`` in ambient trace coordinates.

    ``(e1, e2, n)`` is positively oriented for the unit normal ``n`` along the
    gradient of ``x² + y² + z² − xyz``.
    """
    normal = np.array([float(g) for g in _gradient(*X.triple)])
    normal /= np.linalg.norm(normal)
    seed = np.eye(3)[int(np.argmin(np.abs(normal)))]
    e1 = np.cross(normal, seed)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    return (
        TangentVector(X, *(float(c) for c in e1)),
        TangentVector(X, *(float(c) for c in e2)),
    )


def tangent_step(X: TorusPoint, v: TangentVector, h: float) -> TorusPoint:
    """Move from ``X`` by ``h·v`` and project back onto the Markov variety."""
    with extended(*X.triple):
        step = to_mpf(h)
        moved = (t + step * d for t, d in zip(X.triple, v.delta, strict=True))
        return TorusPoint.from_triple(_project(*moved))


# --------------------------------------------------------------------------- #
# Holonomy                                                                    #
# --------------------------------------------------------------------------- #


def _word(v: Vector, a_mat: Matrix2, b_mat: Matrix2) -> Matrix2:
    """Christoffel word of the slope of ``v``, with 1/0 ↦ ``a_mat`` and 0/1 ↦ ``b_mat``."""
    slope = Slope.from_vector(*v)
    if slope.q == 0:
        return a_mat
    if slope.p == 0:
        return b_mat
    half, runs = stern_brocot_path(slope.vector)
    if half > 0:
        w_lo, w_hi = b_mat, a_mat
    else:
        w_lo, w_hi = np.linalg.inv(a_mat), b_mat
    w_mid = w_lo @ w_hi
    for direction, count in runs:
        if direction > 0:
            w_lo = w_mid @ np.linalg.matrix_power(w_hi, count - 1)
            w_mid = w_lo @ w_hi
        else:
            w_hi = np.linalg.matrix_power(w_lo, count - 1) @ w_mid
            w_mid = w_lo @ w_hi
    return w_mid


def holonomy(X: TorusPoint, a: Slope, frame_slope: Slope) -> Matrix2:
    """SL(2,R) matrix of ``a`` in the representation where ``frame_slope`` is diagonal.

    ``frame_slope`` maps to ``diag(e^{ℓ/2}, e^{−ℓ/2})`` and its canonical
    neighbour to a positive matrix; words are positive in the frame.
    """
    coords = fn_coords(X, frame_slope)
    half = coords.length / 2
    a_mat = np.diag([math.exp(half), math.exp(-half)])
    coth, csch = 1 / math.tanh(half), 1 / math.sinh(half)
    b_mat = np.array(
        [
            [coth * math.exp(coords.twist / 2), csch],
            [csch, coth * math.exp(-coords.twist / 2)],
        ]
    )
    return _word(apply(inverse(frame(frame_slope)), a.vector), a_mat, b_mat)
