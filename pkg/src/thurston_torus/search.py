"""Best-first branch and bound over the Stern–Brocot tree of slopes.

Both the Thurston distance and the Thurston norm are suprema over simple
closed curves of a function of their traces. The engine below walks Farey
triangles: each node ``(lo, hi)`` carries the traces of its two vertices and
of the mediant ``lo + hi``, and each child trace costs one flip. The engine is
generic in the trace type ``T``; the caller supplies the flip arithmetic and
the objective.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from collections.abc import Callable, Sequence
from typing import Generic, TypeVar

from attrs import evolve, field, frozen, validators

from .constants import (
    SEARCH_BEAM_DEFAULT,
    SEARCH_GAP_TOL_DEFAULT,
    SEARCH_IMPROVE_TOL,
    SEARCH_MAX_NODES_DEFAULT,
    SEARCH_PATIENCE_DEFAULT,
    SEARCH_TIE_TOL,
    TRACE_DIGITS_CEILING,
)
from .farey import Marking, Slope, Vector, cross
from .hooks import SearchHook

__all__ = ["SearchBudget", "SearchOutcome", "best_first_search"]

logger = logging.getLogger(__name__)

T = TypeVar("T")


@frozen
class SearchBudget:
    """Limits and tolerances of a slope search.

    Override single fields with :func:`attrs.evolve` or :meth:`with_nodes`.
    """

    max_nodes: int = field(default=SEARCH_MAX_NODES_DEFAULT, validator=validators.gt(0))
    patience: int = field(default=SEARCH_PATIENCE_DEFAULT, validator=validators.gt(0))
    beam: int = field(default=SEARCH_BEAM_DEFAULT, validator=validators.gt(0))
    improve_tol: float = field(default=SEARCH_IMPROVE_TOL, validator=validators.ge(0))
    tie_tol: float = field(default=SEARCH_TIE_TOL, validator=validators.ge(0))
    gap_tol: float = field(default=SEARCH_GAP_TOL_DEFAULT, validator=validators.ge(0))

    def with_nodes(self, max_nodes: int) -> SearchBudget:
        return evolve(self, max_nodes=max_nodes)


@frozen
class SearchOutcome:
    """Best slope found, with every objective value the search evaluated."""

    value: float
    witness: Slope
    nodes: int
    saturated: bool
    layers: int
    evaluated: dict[Slope, float] = field(eq=False, repr=False)


@frozen
class _Node(Generic[T]):
    lo: Vector
    hi: Vector
    t_lo: T
    t_hi: T
    t_mid: T

    @property
    def mediant(self) -> Vector:
        return (self.lo[0] + self.hi[0], self.lo[1] + self.hi[1])

    def children(self, flip: Callable[[T, T, T], T]) -> tuple[_Node[T], _Node[T]]:
        mid = self.mediant
        left = _Node(self.lo, mid, self.t_lo, self.t_mid, flip(self.t_lo, self.t_mid, self.t_hi))
        right = _Node(mid, self.hi, self.t_mid, self.t_hi, flip(self.t_mid, self.t_hi, self.t_lo))
        return left, right


def _seed_nodes(
    trace_at: Callable[[Vector], T],
    flip: Callable[[T, T, T], T],
    seeds: Sequence[Marking],
) -> list[_Node[T]]:
    x, y, z = trace_at((1, 0)), trace_at((0, 1)), trace_at((1, 1))
    nodes = [
        _Node((0, 1), (1, 0), y, x, z),
        _Node((-1, 0), (0, 1), x, y, flip(x, y, z)),
    ]
    for marking in seeds:
        u, w = marking.a.vector, marking.b.vector
        if cross(u, w) > 0:
            u, w = w, u
        t_u, t_w = trace_at(u), trace_at(w)
        t_sum = trace_at((u[0] + w[0], u[1] + w[1]))
        nodes.append(_Node(u, w, t_u, t_w, t_sum))
        nodes.append(_Node(w, (-u[0], -u[1]), t_w, t_u, flip(t_u, t_w, t_sum)))
    return nodes


class _Incumbent:
    """Running maximum with deterministic tie-breaking on the slope key."""

    def __init__(self, tie_tol: float) -> None:
        self.tie_tol = tie_tol
        self.value = float("-inf")
        self.witness: Slope | None = None

    def offer(self, value: float, slope: Slope) -> bool:
        if self.witness is None:
            self.value, self.witness = value, slope
            return True
        tol = self.tie_tol * max(1.0, abs(self.value))
        if value > self.value + tol or (abs(value - self.value) <= tol and slope.key < self.witness.key):
            self.value, self.witness = value, slope
            return True
        return False


def best_first_search(
    trace_at: Callable[[Vector], T],
    flip: Callable[[T, T, T], T],
    objective: Callable[[Slope, T], float],
    magnitude: Callable[[T], int],
    *,
    seeds: Sequence[Marking] = (),
    budget: SearchBudget | None = None,
    hooks: Sequence[SearchHook] = (),
) -> SearchOutcome:
    """Maximise ``objective`` over all slopes.

    Parameters
    ----------
    trace_at
        Trace of an arbitrary vector; only called for the seeds.
    flip
        ``flip(a, b, c) = a·b − c``, the trace of the far vertex of the
        triangle adjacent across the edge with traces ``a`` and ``b``.
    objective
        Value of a slope given its trace.
    magnitude
        Decimal digits of a trace; nodes above the ceiling are not expanded.
    seeds
        Markings whose two adjacent triangles join the frontier first.
    """
    budget = budget or SearchBudget()
    incumbent = _Incumbent(budget.tie_tol)
    evaluated: dict[Slope, float] = {}
    visited: set[frozenset[Slope]] = set()
    heap: list[tuple[float, tuple[int, int, int], int, _Node[T]]] = []
    counter = itertools.count()

    def evaluate(vector: Vector, trace: T) -> float:
        slope = Slope.from_vector(*vector)
        value = objective(slope, trace)
        evaluated[slope] = value
        if incumbent.offer(value, slope):
            for hook in hooks:
                hook.on_improvement(value=value, witness=slope, nodes=nodes)
        return value

    def push(node: _Node[T]) -> None:
        # a triangle is expanded once, whichever side reaches it first
        triangle = frozenset(Slope.from_vector(*v) for v in (node.lo, node.hi, node.mediant))
        if triangle in visited or magnitude(node.t_mid) > TRACE_DIGITS_CEILING:
            return
        visited.add(triangle)
        slope = Slope.from_vector(*node.mediant)
        value = evaluated[slope] if slope in evaluated else evaluate(node.mediant, node.t_mid)
        heapq.heappush(heap, (-value, slope.key, next(counter), node))

    nodes = 0
    evaluate((1, 0), trace_at((1, 0)))
    evaluate((0, 1), trace_at((0, 1)))
    seed_slopes = {s for marking in seeds for s in (marking.a, marking.b)} - set(evaluated)
    for slope in sorted(seed_slopes, key=lambda s: s.key):
        trace = trace_at(slope.vector)
        if magnitude(trace) <= TRACE_DIGITS_CEILING:
            evaluate(slope.vector, trace)
    for node in _seed_nodes(trace_at, flip, seeds):
        push(node)

    layers = quiet = 0
    saturated = False
    while heap and quiet < budget.patience:
        if nodes >= budget.max_nodes:
            saturated = True
            break
        before = incumbent.value
        for _ in range(min(budget.beam, budget.max_nodes - nodes)):
            if not heap:
                break
            node = heapq.heappop(heap)[3]
            nodes += 1
            for child in node.children(flip):
                push(child)
        layers += 1
        # quiet: no improvement, and nothing on the frontier within improve_tol of the incumbent
        improved = incumbent.value - before > budget.improve_tol
        close = bool(heap) and -heap[0][0] > incumbent.value - budget.improve_tol
        quiet = 0 if improved or close else quiet + 1
        assert incumbent.witness is not None
        for hook in hooks:
            hook.on_layer(layer=layers, nodes=nodes, value=incumbent.value, witness=incumbent.witness)

    assert incumbent.witness is not None
    logger.debug(
        "search finished after %d layers and %d nodes (saturated=%s): %s = %.12g",
        layers,
        nodes,
        saturated,
        incumbent.witness,
        incumbent.value,
    )
    return SearchOutcome(
        value=incumbent.value,
        witness=incumbent.witness,
        nodes=nodes,
        saturated=saturated,
        layers=layers,
        evaluated=evaluated,
    )
