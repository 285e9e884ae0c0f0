"""Desk-scale checks of the coarse geometry of Thurston geodesics.

Every routine here walks a concrete geodesic (an envelope boundary path) and
measures lengths of candidate curves along it: which curves get short, when,
and how that matches the combinatorial pivots of the endpoint markings.
"""

from __future__ import annotations

import logging
import math
from typing import Any

import numpy as np
from attrs import asdict, field, frozen, validators
from scipy.optimize import bisect
from scipy.stats import spearmanr

from .cache import DistanceCache
from .constants import EPS0_DEFAULT, EPS1_DEFAULT, EPS_MARGULIS_DEFAULT, PATH_DT_DEFAULT
from .exceptions import PreconditionError
from .farey import Marking, PivotSequence, Slope, marking_geodesic, pivots
from .hyptrig import hv_decomposition
from .search import SearchBudget
from .stretch_envelope import EnvelopeEdge, envelope
from .torus_model import TorusPoint, length_of, short_marking, systole_triple

__all__ = [
    "ExperimentConfig",
    "GeodesicPath",
    "HVSample",
    "HVSeries",
    "PivotRow",
    "ShortCurveRecord",
    "ShortCurveReport",
    "build_geodesic",
    "hv_dynamics",
    "pivot_vs_short",
    "report",
    "report_rows",
    "short_curve_scan",
    "spearman",
]

logger = logging.getLogger(__name__)

# edges shorter than this are corners collapsing onto an endpoint
_MIN_EDGE = 1e-7
_INTERVAL_XTOL = 1e-9


@frozen
class ExperimentConfig:
    """Thresholds and budgets shared by the experiments."""

    eps0: float = field(default=EPS0_DEFAULT, validator=validators.gt(0))
    eps1: float = field(default=EPS1_DEFAULT, validator=validators.gt(0))
    eps_margulis: float = field(default=EPS_MARGULIS_DEFAULT, validator=validators.gt(0))
    dt: float = field(default=PATH_DT_DEFAULT, validator=validators.gt(0))
    budget: SearchBudget = field(factory=SearchBudget)
    additivity_samples: int = field(default=20, validator=validators.ge(0))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


# --------------------------------------------------------------------------- #
# Geodesics                                                                   #
# --------------------------------------------------------------------------- #


@frozen
class GeodesicPath:
    """A concatenation of stretch segments from ``start`` to ``end``, sampled every ``dt``."""

    start: TorusPoint
    end: TorusPoint
    segments: tuple[EnvelopeEdge, ...]
    samples: tuple[tuple[float, TorusPoint], ...] = field(eq=False, repr=False)

    @property
    def total_duration(self) -> float:
        return sum(s.duration for s in self.segments)

    @property
    def stretch_curve(self) -> Slope:
        return self.segments[0].alpha

    def segment_index(self, t: float) -> int:
        """Index of the segment containing time ``t`` (clamped to the path)."""
        offset = 0.0
        for index, seg in enumerate(self.segments):
            if t <= offset + seg.duration:
                return index
            offset += seg.duration
        return len(self.segments) - 1

    def point_at(self, t: float) -> TorusPoint:
        t = min(max(t, 0.0), self.total_duration)
        index = self.segment_index(t)
        offset = sum(s.duration for s in self.segments[:index])
        return self.segments[index].point_at(t - offset)

    def additivity_defects(self, times: list[float], cache: DistanceCache | None = None) -> list[float]:
        """``d(X, Z) + d(Z, Y) − d(X, Y)`` for the points ``Z`` at ``times``."""
        cache = cache or DistanceCache()
        whole = cache.distance(self.start, self.end).value
        defects = []
        for t in times:
            z = self.point_at(t)
            defects.append(cache.distance(self.start, z).value + cache.distance(z, self.end).value - whole)
        return defects

    def to_dict(self) -> dict[str, Any]:
        return {
            "start": self.start.to_dict(),
            "end": self.end.to_dict(),
            "segments": [seg.to_dict() for seg in self.segments],
            "total_duration": self.total_duration,
        }


def _sample_times(total: float, dt: float) -> list[float]:
    steps = max(1, math.ceil(total / dt - 1e-9))
    return [total * k / steps for k in range(steps + 1)]


def build_geodesic(
    X: TorusPoint,
    Y: TorusPoint,
    config: ExperimentConfig | None = None,
    corner: str = "plus",
) -> GeodesicPath:
    """The envelope boundary path from ``X`` to ``Y`` through the chosen corner."""
    if corner not in ("plus", "minus"):
        raise ValueError(f"corner must be 'plus' or 'minus', not {corner!r}")
    config = config or ExperimentConfig()
    quad = envelope(X, Y, config.budget)
    edges = quad.edges()
    chosen = edges[:2] if corner == "plus" else edges[2:]
    kept = tuple(e for e in chosen if e.duration > _MIN_EDGE) or (chosen[0],)
    offsets = np.cumsum([0.0] + [e.duration for e in kept])
    samples = []
    for t in _sample_times(float(offsets[-1]), config.dt):
        index = min(int(np.searchsorted(offsets, t, side="right")) - 1, len(kept) - 1)
        samples.append((t, kept[index].point_at(t - float(offsets[index]))))
    logger.debug("geodesic through the %s corner: %d segments, %d samples", corner, len(kept), len(samples))
    return GeodesicPath(X, Y, kept, tuple(samples))


# --------------------------------------------------------------------------- #
# Short curves                                                                #
# --------------------------------------------------------------------------- #


@frozen
class ShortCurveRecord:
    """Minimum of ``ℓ_α`` along a path and the interval where it is below ``eps0``."""

    slope: Slope
    min_length: float
    t_min: float
    interval: tuple[float, float] | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "slope": str(self.slope),
            "min_length": self.min_length,
            "t_min": self.t_min,
            "interval": list(self.interval) if self.interval else None,
        }


@frozen
class ShortCurveReport:
    eps0: float
    records: tuple[ShortCurveRecord, ...]

    def record(self, slope: Slope) -> ShortCurveRecord | None:
        return next((r for r in self.records if r.slope == slope), None)

    def active(self) -> list[ShortCurveRecord]:
        """Records with an active interval, in the order the intervals start."""
        return sorted((r for r in self.records if r.interval), key=lambda r: r.interval[0] if r.interval else 0)

    def to_dict(self) -> dict[str, Any]:
        return {"eps0": self.eps0, "records": [r.to_dict() for r in self.records]}


def _crossing(path: GeodesicPath, a: Slope, eps0: float, t0: float, t1: float) -> float:
    return float(bisect(lambda t: length_of(path.point_at(t), a) - eps0, t0, t1, xtol=_INTERVAL_XTOL))


def _active_interval(
    path: GeodesicPath, a: Slope, times: list[float], lengths: list[float], eps0: float
) -> tuple[float, float] | None:
    k = int(np.argmin(lengths))
    if lengths[k] >= eps0:
        return None
    lo = k
    while lo > 0 and lengths[lo - 1] < eps0:
        lo -= 1
    hi = k
    while hi < len(lengths) - 1 and lengths[hi + 1] < eps0:
        hi += 1
    start = times[0] if lo == 0 else _crossing(path, a, eps0, times[lo - 1], times[lo])
    end = times[-1] if hi == len(lengths) - 1 else _crossing(path, a, eps0, times[hi], times[hi + 1])
    return (start, end)


def _candidates(path: GeodesicPath) -> list[Slope]:
    slopes: set[Slope] = set()
    for m1 in short_marking(path.start):
        for m2 in short_marking(path.end):
            slopes.update(pivots(m1, m2).slopes)
    for _, z in path.samples:
        for marking in short_marking(z):
            slopes.update(marking.slopes)
    return sorted(slopes, key=lambda s: s.key)


def short_curve_scan(path: GeodesicPath, eps0: float = EPS0_DEFAULT) -> ShortCurveReport:
    """Length profile of every curve that could be short along ``path``.

    Candidates are the pivots between the endpoint short markings together
    with every slope of a short marking at a sample.
    """
    times = [t for t, _ in path.samples]
    records = []
    for slope in _candidates(path):
        lengths = [length_of(z, slope) for _, z in path.samples]
        k = int(np.argmin(lengths))
        records.append(
            ShortCurveRecord(slope, lengths[k], times[k], _active_interval(path, slope, times, lengths, eps0))
        )
    return ShortCurveReport(eps0, tuple(records))


@frozen
class PivotRow:
    """One pivot with its coefficient, its minimal length and both orderings."""

    slope: Slope
    coefficient: int
    min_length: float
    log_ratio: float
    pivot_rank: int
    interval_rank: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "slope": str(self.slope),
            "coefficient": self.coefficient,
            "min_length": self.min_length,
            "log_ratio": self.log_ratio,
            "pivot_rank": self.pivot_rank,
            "interval_rank": self.interval_rank,
        }


def _closest_markings(X: TorusPoint, Y: TorusPoint) -> tuple[Marking, Marking]:
    pairs = [(m1, m2) for m1 in short_marking(X) for m2 in short_marking(Y)]
    return min(pairs, key=lambda pair: len(marking_geodesic(*pair)))


def _pivot_rows(sequence: PivotSequence, scan: ShortCurveReport) -> list[PivotRow]:
    found = [(slope, n, scan.record(slope)) for slope, n in sequence]
    timed = sorted(range(len(found)), key=lambda i: found[i][2].t_min if found[i][2] else math.inf)
    interval_rank = {index: rank for rank, index in enumerate(timed)}
    rows = []
    for index, (slope, n, record) in enumerate(found):
        length = record.min_length if record else math.nan
        rows.append(
            PivotRow(
                slope=slope,
                coefficient=n,
                min_length=length,
                log_ratio=math.log(1 / length) / length,
                pivot_rank=index,
                interval_rank=interval_rank[index],
            )
        )
    return rows


def pivot_vs_short(
    X: TorusPoint,
    Y: TorusPoint,
    config: ExperimentConfig | None = None,
    path: GeodesicPath | None = None,
) -> list[PivotRow]:
    """Join the pivots of the endpoint markings with the short-curve scan of the geodesic."""
    config = config or ExperimentConfig()
    for point in (X, Y):
        systole = length_of(point, systole_triple(point)[1][0])
        if systole < config.eps0:
            raise PreconditionError(f"endpoint {point} is not thick (systole {systole:.4g})")
    sequence = pivots(*_closest_markings(X, Y))
    scan = short_curve_scan(path or build_geodesic(X, Y, config), config.eps0)
    return _pivot_rows(sequence, scan)


def spearman(xs: list[float], ys: list[float]) -> float:
    """Spearman rank correlation; 1.0 for fewer than two points."""
    if len(xs) < 2:
        return 1.0
    rho, _ = spearmanr(xs, ys)
    return 1.0 if math.isnan(rho) else float(rho)


# --------------------------------------------------------------------------- #
# Horizontal and vertical dynamics                                            #
# --------------------------------------------------------------------------- #


@frozen
class HVSample:
    t: float
    h: float
    v: float
    length: float
    segment: int


@frozen
class HVSeries:
    """``(h_t, v_t, ℓ_α(t))`` of ``alpha`` relative to the stretch curve ``omega``."""

    alpha: Slope
    omega: Slope
    samples: tuple[HVSample, ...]
    active_interval: tuple[float, float] | None

    @property
    def t_min(self) -> float:
        return min(self.samples, key=lambda s: s.length).t

    @property
    def start_fraction(self) -> float | None:
        """``(t_α − a)/(b − a)``: where in the active interval ``[a, b]`` the minimum falls."""
        if self.active_interval is None:
            return None
        a, b = self.active_interval
        return (self.t_min - a) / (b - a) if b > a else 0.0

    @property
    def start_bias(self) -> float | None:
        """``(t_α − a)/(b − t_α)``, the odds form of :attr:`start_fraction`.

        The minimum lies in the first third of the interval exactly when this
        is at most 1/2.
        """
        if self.active_interval is None:
            return None
        a, b = self.active_interval
        return (self.t_min - a) / (b - self.t_min) if b > self.t_min else math.inf

    def h_growth_holds(self, slack: float = 1e-9) -> bool:
        """``h_t ≥ e^{t−s}(h_s − v_s)`` for every pair ``s < t`` on a common stretch segment."""
        for i, early in enumerate(self.samples):
            for late in self.samples[i + 1 :]:
                if late.segment != early.segment:
                    continue
                bound = math.exp(late.t - early.t) * (early.h - early.v)
                if late.h < bound - slack * max(1.0, abs(bound)):
                    return False
        return True

    def log_v_concave(self, tol: float = 1e-9) -> bool:
        """Second differences of ``log v_t`` are non-positive (the samples are evenly spaced)."""
        logs = [math.log(s.v) for s in self.samples if s.v > 0]
        return all(logs[k - 1] - 2 * logs[k] + logs[k + 1] <= tol for k in range(1, len(logs) - 1))

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": str(self.alpha),
            "omega": str(self.omega),
            "samples": [[s.t, s.h, s.v, s.length] for s in self.samples],
            "active_interval": list(self.active_interval) if self.active_interval else None,
            "start_fraction": self.start_fraction,
        }


def hv_dynamics(path: GeodesicPath, a: Slope, eps0: float = EPS0_DEFAULT) -> HVSeries:
    """Decompose ``a`` along ``path`` relative to the path's stretch curve."""
    omega = path.stretch_curve
    samples = []
    for t, z in path.samples:
        hv = hv_decomposition(z, omega, a)
        samples.append(HVSample(t, hv.h, hv.v, length_of(z, a), path.segment_index(t)))
    times = [s.t for s in samples]
    lengths = [s.length for s in samples]
    return HVSeries(a, omega, tuple(samples), _active_interval(path, a, times, lengths, eps0))


# --------------------------------------------------------------------------- #
# Reports                                                                     #
# --------------------------------------------------------------------------- #


def report(
    X: TorusPoint,
    Y: TorusPoint,
    config: ExperimentConfig | None = None,
    rng: np.random.Generator | None = None,
    cache: DistanceCache | None = None,
) -> dict[str, Any]:
    """Everything the experiments measure on the geodesic from ``X`` to ``Y``, JSON-ready."""
    config = config or ExperimentConfig()
    rng = rng or np.random.default_rng(0)
    cache = cache or DistanceCache()
    path = build_geodesic(X, Y, config)
    scan = short_curve_scan(path, config.eps0)
    try:
        rows = pivot_vs_short(X, Y, config, path)
    except PreconditionError as exc:
        logger.info("pivot table skipped: %s", exc)
        rows = []
    times = sorted(float(t) for t in rng.uniform(0, path.total_duration, size=config.additivity_samples))
    defects = path.additivity_defects(times, cache)
    return {
        "geodesic": path.to_dict(),
        "short_curves": scan.to_dict(),
        "pivots": [row.to_dict() for row in rows],
        "additivity": [{"time": t, "defect": d} for t, d in zip(times, defects, strict=True)],
        "config": config.to_dict(),
    }


def report_rows(data: dict[str, Any]) -> list[dict[str, Any]]:
    """Flatten the short-curve part of a report into CSV rows."""
    coefficients = {row["slope"]: row["coefficient"] for row in data["pivots"]}
    rows = []
    for record in data["short_curves"]["records"]:
        interval = record["interval"] or [None, None]
        rows.append(
            {
                "slope": record["slope"],
                "min_length": record["min_length"],
                "t_min": record["t_min"],
                "interval_start": interval[0],
                "interval_end": interval[1],
                "pivot_coefficient": coefficients.get(record["slope"], 0),
            }
        )
    return rows
