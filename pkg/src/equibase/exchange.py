"""Exchange digraph between two disjoint bases and rebalancing exchanges.

The digraph has the two bases as vertex classes and an edge (x, y) when
removing x from its own basis and adding y keeps that basis a basis.
A shortest directed cycle through a pivot vertex, confined to a chosen
target set plus the pivot, yields a set whose symmetric difference with
both bases again gives two bases; applying it moves one target element
from the richer basis to the poorer one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from .bitset import bits, mask_of, popcount
from .errors import InvariantViolationError, PreconditionError
from .matroids import Matroid


@dataclass(frozen=True)
class ExchangeDigraph:
    """Directed bipartite exchange structure of two disjoint bases."""

    left: int
    right: int
    out: Dict[int, int]  # vertex -> bitmask of out-neighbours

    def has_edge(self, x: int, y: int) -> bool:
        return bool((self.out.get(x, 0) >> y) & 1)

    def edges(self) -> Iterator[Tuple[int, int]]:
        for x in sorted(self.out):
            for y in bits(self.out[x]):
                yield (x, y)

    def edge_count(self) -> int:
        return sum(popcount(mask) for mask in self.out.values())


@dataclass(frozen=True)
class ExchangeSet:
    """An exchangeable vertex set, with the pivot element when known."""

    elements: int
    pivot: Optional[int] = None


def build_exchange_digraph(matroid: Matroid, b1: int, b2: int) -> ExchangeDigraph:
    """Exchange digraph of two disjoint bases.

    In-edges of y in the second basis come exactly from the fundamental
    circuit of y against the first basis (minus y itself), and
    symmetrically; so the whole digraph costs 2r circuit queries.
    """
    if b1 & b2:
        raise PreconditionError("the two bases must be disjoint")
    if not matroid.is_basis(b1) or not matroid.is_basis(b2):
        raise PreconditionError("both sets must be bases")
    out = {v: 0 for v in bits(b1 | b2)}
    query1 = matroid.fundamental_circuits_for(b1)
    for y in bits(b2):
        ybit = 1 << y
        for f in bits(query1(y) & b1):
            out[f] |= ybit
    query2 = matroid.fundamental_circuits_for(b2)
    for x in bits(b1):
        xbit = 1 << x
        for f in bits(query2(x) & b2):
            out[f] |= xbit
    return ExchangeDigraph(b1, b2, out)


def shortest_cycle_through(
    graph: ExchangeDigraph,
    start: int,
    allowed: int,
    max_vertices: Optional[int] = None,
) -> Optional[List[int]]:
    """Minimum-vertex directed cycle through start inside `allowed`.

    BFS from start over out-edges; the first layer containing an
    in-neighbour of start closes the cycle.  Ties inside that layer go
    to the smallest vertex sequence along BFS parent pointers.  Returns
    the cycle as a vertex list beginning at start, or None; cycles with
    at least max_vertices vertices are not reported.
    """
    if not (allowed >> start) & 1:
        raise PreconditionError("start vertex must be allowed")
    out = graph.out
    startbit = 1 << start
    inner = allowed & ~startbit
    parent: Dict[int, int] = {}
    frontier: List[int] = []
    for v in bits(out.get(start, 0) & inner):
        parent[v] = start
        frontier.append(v)
    depth = 1
    while frontier:
        if max_vertices is not None and depth + 1 >= max_vertices:
            return None
        closers = [v for v in frontier if (out.get(v, 0) >> start) & 1]
        if closers:
            best: Optional[List[int]] = None
            for v in closers:
                path = [v]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                path.reverse()
                if best is None or path < best:
                    best = path
            return best
        nxt: List[int] = []
        for u in frontier:
            for v in bits(out.get(u, 0) & inner):
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        frontier = nxt
        depth += 1
    return None


def verify_exchangeable(matroid: Matroid, b1: int, b2: int, x: int) -> bool:
    """Direct check: x inside the union and both symmetric differences bases."""
    if x & ~(b1 | b2):
        return False
    return matroid.is_basis(b1 ^ x) and matroid.is_basis(b2 ^ x)


def apply_exchange(b1: int, b2: int, exchange) -> Tuple[int, int]:
    """Symmetric-difference both bases with the exchange set."""
    x = exchange.elements if isinstance(exchange, ExchangeSet) else exchange
    if x & ~(b1 | b2):
        raise PreconditionError("exchange set must lie inside the two bases")
    return b1 ^ x, b2 ^ x


def find_rebalancing_exchange(
    matroid: Matroid,
    low: int,
    high: int,
    target: int,
    digraph: Optional[ExchangeDigraph] = None,
) -> ExchangeSet:
    """Exchange set moving one target element from `high` into `low`.

    Requires disjoint bases with strictly fewer target elements in low.
    The result X satisfies pivot in X, X minus the pivot inside the
    target set, and both low^X and high^X are bases with the target
    count of low raised by exactly one.  Existence is guaranteed, so a
    fruitless search signals corrupted inputs or a bug.
    """
    graph = digraph if digraph is not None else build_exchange_digraph(matroid, low, high)
    if graph.left != low or graph.right != high:
        raise PreconditionError("digraph was built for different bases")
    tgt = target & (low | high)
    if popcount(low & tgt) >= popcount(high & tgt):
        raise PreconditionError(
            "low basis must contain strictly fewer target elements"
        )
    found = search_rebalancing_exchange(matroid, graph, tgt, low & ~tgt)
    if found is None:
        raise InvariantViolationError(
            "no rebalancing exchange found although one must exist"
        )
    return found


def search_rebalancing_exchange(
    matroid: Matroid,
    graph: ExchangeDigraph,
    target: int,
    pivot_mask: int,
) -> Optional[ExchangeSet]:
    """Deterministic search over the given pivot candidates.

    Pivots are scanned in ascending id order.  A symmetric two-swap with
    a target element of the right-hand basis is taken first; otherwise
    the globally shortest pivot cycle wins, ties broken by the smaller
    pivot.  Returns None when no pivot admits a cycle (possible only
    when the pivot candidates were restricted by the caller).
    """
    low, high = graph.left, graph.right
    pivot_mask &= low & ~target
    for t in bits(pivot_mask):
        for y in bits(graph.out.get(t, 0) & high & target):
            if (graph.out.get(y, 0) >> t) & 1:
                return _verified(matroid, low, high, (1 << t) | (1 << y), t)
    best: Optional[List[int]] = None
    best_pivot = -1
    for t in bits(pivot_mask):
        cap = len(best) if best is not None else None
        cycle = shortest_cycle_through(graph, t, target | (1 << t), max_vertices=cap)
        if cycle is not None and (best is None or len(cycle) < len(best)):
            best = cycle
            best_pivot = t
    if best is None:
        return None
    return _verified(matroid, low, high, mask_of(best), best_pivot)


def _verified(matroid: Matroid, low: int, high: int, x: int, pivot: int) -> ExchangeSet:
    if not (matroid.is_basis(low ^ x) and matroid.is_basis(high ^ x)):
        raise InvariantViolationError(
            "minimum cycle produced a non-exchangeable vertex set"
        )
    return ExchangeSet(elements=x, pivot=pivot)
