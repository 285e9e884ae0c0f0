"""Thurston distance ``d(X, Y) = sup_α log(ℓ_α(Y)/ℓ_α(X))`` and its maximally stretched curve."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Any

from attrs import frozen

from .exceptions import PreconditionError
from .farey import Slope, Vector, apply, frame, inverse
from .hooks import SearchHook
from .precision import digits, extended
from .search import SearchBudget, best_first_search
from .torus_model import TorusPoint, length_from_trace, length_of, short_marking, systole_triple, trace_at

__all__ = ["DistResult", "MaxStretch", "max_stretch_curve", "ratio", "symmetric_dist", "thurston_dist"]

logger = logging.getLogger(__name__)

TracePair = tuple[Any, Any]


@frozen
class DistResult:
    """Outcome of a distance search.

    ``value`` is always the exact log-ratio of ``witness``, hence a certified
    lower bound for the distance. ``gap`` is the margin of the witness over
    every evaluated slope outside its collar.
    """

    value: float
    witness: Slope
    certified_lower: bool = True
    search_nodes: int = 0
    saturated: bool = False
    gap: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "witness": str(self.witness),
            "certified_lower": self.certified_lower,
            "search_nodes": self.search_nodes,
            "saturated": self.saturated,
            "gap": self.gap if math.isfinite(self.gap) else None,
        }


@frozen
class MaxStretch:
    """Witness of a distance search with the isolation verdict."""

    witness: Slope
    isolated: bool
    gap: float
    result: DistResult


def ratio(X: TorusPoint, Y: TorusPoint, a: Slope) -> float:
    """``log ℓ_a(Y) − log ℓ_a(X)``."""
    return math.log(length_of(Y, a)) - math.log(length_of(X, a))


def _in_collar(witness: Slope, s: Slope) -> bool:
    """True for slopes closer to ``witness`` than its Farey neighbours ``β ± α``."""
    p, q = Slope.from_vector(*apply(inverse(frame(witness)), s.vector)).vector
    return abs(p) > q


def _gap(evaluated: dict[Slope, float], witness: Slope, value: float) -> float:
    rivals = [v for s, v in evaluated.items() if not _in_collar(witness, s)]
    return value - max(rivals) if rivals else math.inf


def thurston_dist(
    X: TorusPoint,
    Y: TorusPoint,
    budget: SearchBudget | None = None,
    hooks: Sequence[SearchHook] = (),
) -> DistResult:
    """Best lower bound for ``d(X, Y)`` found by the slope search."""
    budget = budget or SearchBudget()
    if X == Y:
        return DistResult(value=0.0, witness=systole_triple(X)[1][0])

    def trace_pair(v: Vector) -> TracePair:
        with extended(*X.triple, *Y.triple):
            return (trace_at(X.triple, v), trace_at(Y.triple, v))

    def flip(a: TracePair, b: TracePair, c: TracePair) -> TracePair:
        with extended(*a, *b, *c):
            return (a[0] * b[0] - c[0], a[1] * b[1] - c[1])

    def objective(_: Slope, t: TracePair) -> float:
        return math.log(length_from_trace(t[1])) - math.log(length_from_trace(t[0]))

    outcome = best_first_search(
        trace_pair,
        flip,
        objective,
        lambda t: digits(*t),
        seeds=short_marking(X) + short_marking(Y),
        budget=budget,
        hooks=hooks,
    )
    value = ratio(X, Y, outcome.witness)
    return DistResult(
        value=value,
        witness=outcome.witness,
        search_nodes=outcome.nodes,
        saturated=outcome.saturated,
        gap=_gap(outcome.evaluated, outcome.witness, value),
    )


def symmetric_dist(X: TorusPoint, Y: TorusPoint, budget: SearchBudget | None = None) -> float:
    """``max(d(X, Y), d(Y, X))``, the symmetrised distance."""
    return max(thurston_dist(X, Y, budget).value, thurston_dist(Y, X, budget).value)


def max_stretch_curve(X: TorusPoint, Y: TorusPoint, budget: SearchBudget | None = None) -> MaxStretch:
    """The maximally stretched curve from ``X`` to ``Y``, if the search finds it isolated."""
    if X == Y:
        raise PreconditionError("the maximally stretched curve needs two distinct points")
    budget = budget or SearchBudget()
    result = thurston_dist(X, Y, budget)
    isolated = result.gap >= budget.gap_tol
    if not isolated:
        logger.debug("witness %s is not isolated (gap %.3e)", result.witness, result.gap)
    return MaxStretch(witness=result.witness, isolated=isolated, gap=result.gap, result=result)
