"""Matroid kinds behind a single independence-oracle interface.

Concrete kinds: graphic (multigraph edge sets), uniform, partition, and
binary linear (GF(2) columns).  All higher-level algorithms consume only
the oracle surface defined on the base class, so they work for any kind.

Subsets of the ground set are int bitmasks, see bitset.py.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .bitset import bits, ids_of, popcount
from .errors import InvariantViolationError, MalformedInputError, PreconditionError


class Matroid:
    """Abstract matroid on ground set {0, .., m-1}."""

    kind = "abstract"

    def __init__(self, m: int):
        if m < 0:
            raise MalformedInputError("element count must be nonnegative")
        self.m = m
        self.full_mask = (1 << m) - 1
        self._full_rank: Optional[int] = None

    # -- independence oracle ------------------------------------------------

    def is_independent(self, subset: int) -> bool:
        """True iff the subset is independent."""
        self._check_subset(subset)
        return self._independent(subset)

    def _independent(self, subset: int) -> bool:
        raise NotImplementedError

    def circuit_in(self, indep: int, e: int) -> Optional[int]:
        """Unique circuit inside indep+e, or None if indep+e is independent.

        Requires indep independent and e outside it.  The generic
        realization costs |indep|+1 oracle queries: f belongs to the
        circuit exactly when removing f from indep+e restores
        independence.  Kinds override this with direct constructions.
        """
        bit = self._check_element(e)
        if indep & bit:
            raise PreconditionError("element already in the independent set")
        grown = indep | bit
        if self._independent(grown):
            return None
        circ = bit
        for f in bits(indep):
            if self._independent(grown ^ (1 << f)):
                circ |= 1 << f
        return circ

    def fundamental_circuits_for(self, basis: int) -> Callable[[int], int]:
        """Query function e -> fundamental circuit of e w.r.t. basis.

        Kinds may precompute per-basis structure here; the default just
        forwards to circuit_in.
        """

        def query(e: int) -> int:
            circ = self.circuit_in(basis, e)
            if circ is None:
                raise InvariantViolationError(
                    "basis plus an element produced no circuit"
                )
            return circ

        return query

    # -- derived operations --------------------------------------------------

    def rank_of(self, subset: int) -> int:
        """Size of a maximal independent subset, built greedily."""
        self._check_subset(subset)
        indep = 0
        size = 0
        for e in bits(subset):
            if self.circuit_in(indep, e) is None:
                indep |= 1 << e
                size += 1
        return size

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self.rank_of(self.full_mask)
        return self._full_rank

    def is_basis(self, subset: int) -> bool:
        self._check_subset(subset)
        return popcount(subset) == self.full_rank and self._independent(subset)

    # -- helpers ---------------------------------------------------------------

    def _check_subset(self, subset: int) -> None:
        if subset < 0 or subset & ~self.full_mask:
            raise MalformedInputError(
                f"element id out of range for ground set of size {self.m}"
            )

    def _check_element(self, e: int) -> int:
        if not 0 <= e < self.m:
            raise MalformedInputError(
                f"element id {e} out of range for ground set of size {self.m}"
            )
        return 1 << e

    def to_doc(self) -> dict:
        raise NotImplementedError


class GraphicMatroid(Matroid):
    """Edges of a multigraph; a set is independent iff it is a forest.

    Loops and parallel edges are allowed: a loop is never independent,
    parallel edges are distinct elements.
    """

    kind = "graphic"

    def __init__(self, num_vertices: int, edges: Sequence[Tuple[int, int]]):
        super().__init__(len(edges))
        if num_vertices < 0:
            raise MalformedInputError("vertex count must be nonnegative")
        self.num_vertices = num_vertices
        checked = []
        for u, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise MalformedInputError(f"edge ({u}, {v}) has a vertex out of range")
            checked.append((u, v))
        self.edges = tuple(checked)

    def _independent(self, subset: int) -> bool:
        parent: dict = {}

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in bits(subset):
            u, v = self.edges[e]
            if u == v:
                return False
            parent.setdefault(u, u)
            parent.setdefault(v, v)
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def rank_of(self, subset: int) -> int:
        self._check_subset(subset)
        parent: dict = {}

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        rank = 0
        for e in bits(subset):
            u, v = self.edges[e]
            if u == v:
                continue
            parent.setdefault(u, u)
            parent.setdefault(v, v)
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank

    def circuit_in(self, indep: int, e: int) -> Optional[int]:
        bit = self._check_element(e)
        if indep & bit:
            raise PreconditionError("element already in the independent set")
        u, v = self.edges[e]
        if u == v:
            return bit
        adj: dict = {}
        for f in bits(indep):
            a, b = self.edges[f]
            adj.setdefault(a, []).append((b, f))
            adj.setdefault(b, []).append((a, f))
        if u not in adj or v not in adj:
            return None
        # BFS for the forest path u -> v; its edges plus e form the circuit.
        prev = {u: (-1, -1)}
        queue = [u]
        while queue:
            nxt = []
            for a in queue:
                for b, f in adj[a]:
                    if b not in prev:
                        prev[b] = (a, f)
                        nxt.append(b)
            queue = nxt
            if v in prev:
                break
        if v not in prev:
            return None
        circ = bit
        a = v
        while a != u:
            a, f = prev[a]
            circ |= 1 << f
        return circ

    def fundamental_circuits_for(self, basis: int) -> Callable[[int], int]:
        # One BFS over the spanning forest, then each query walks two
        # root paths instead of re-scanning the forest.
        parent_vertex = [-1] * self.num_vertices
        parent_edge = [-1] * self.num_vertices
        depth = [-1] * self.num_vertices
        adj: List[List[Tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for f in bits(basis):
            a, b = self.edges[f]
            adj[a].append((b, f))
            adj[b].append((a, f))
        for root in range(self.num_vertices):
            if depth[root] >= 0 or not adj[root]:
                continue
            depth[root] = 0
            queue = [root]
            while queue:
                nxt = []
                for a in queue:
                    for b, f in adj[a]:
                        if depth[b] < 0:
                            depth[b] = depth[a] + 1
                            parent_vertex[b] = a
                            parent_edge[b] = f
                            nxt.append(b)
                queue = nxt

        def query(e: int) -> int:
            u, v = self.edges[e]
            circ = 1 << e
            if u == v:
                return circ
            if depth[u] < 0 or depth[v] < 0:
                raise InvariantViolationError("query endpoints not spanned by basis")
            while depth[u] > depth[v]:
                circ |= 1 << parent_edge[u]
                u = parent_vertex[u]
            while depth[v] > depth[u]:
                circ |= 1 << parent_edge[v]
                v = parent_vertex[v]
            while u != v:
                if parent_vertex[u] < 0 or parent_vertex[v] < 0:
                    raise InvariantViolationError(
                        "query endpoints not spanned by basis"
                    )
                circ |= (1 << parent_edge[u]) | (1 << parent_edge[v])
                u = parent_vertex[u]
                v = parent_vertex[v]
            return circ

        return query

    def to_doc(self) -> dict:
        return {
            "type": "graphic",
            "num_vertices": self.num_vertices,
            "edges": [[u, v] for u, v in self.edges],
        }


class UniformMatroid(Matroid):
    """All subsets of size at most r are independent."""

    kind = "uniform"

    def __init__(self, m: int, r: int):
        super().__init__(m)
        if not 0 <= r <= m:
            raise MalformedInputError("uniform rank must lie in [0, m]")
        self._r = r
        self._full_rank = r

    def _independent(self, subset: int) -> bool:
        return popcount(subset) <= self._r

    def rank_of(self, subset: int) -> int:
        self._check_subset(subset)
        return min(popcount(subset), self._r)

    def circuit_in(self, indep: int, e: int) -> Optional[int]:
        bit = self._check_element(e)
        if indep & bit:
            raise PreconditionError("element already in the independent set")
        if popcount(indep) < self._r:
            return None
        return indep | bit

    def to_doc(self) -> dict:
        return {"type": "uniform", "num_elements": self.m, "rank": self._r}


class PartitionMatroid(Matroid):
    """Blocks with capacities; independent sets respect every capacity."""

    kind = "partition"

    def __init__(self, blocks: Sequence[Iterable[int]], capacities: Sequence[int]):
        block_lists = [sorted(b) for b in blocks]
        if len(block_lists) != len(capacities):
            raise MalformedInputError("need one capacity per block")
        m = sum(len(b) for b in block_lists)
        super().__init__(m)
        self.block_masks: List[int] = []
        self.capacities: List[int] = []
        seen = 0
        for block, cap in zip(block_lists, capacities):
            if cap < 0:
                raise MalformedInputError("capacities must be nonnegative")
            mask = 0
            for e in block:
                if not 0 <= e < m:
                    raise MalformedInputError(f"block element {e} out of range")
                mask |= 1 << e
            if popcount(mask) != len(block) or mask & seen:
                raise MalformedInputError("blocks must be disjoint, without repeats")
            seen |= mask
            self.block_masks.append(mask)
            self.capacities.append(cap)
        if seen != self.full_mask:
            raise MalformedInputError("blocks must cover every element exactly once")
        self._block_of = [0] * m
        for i, mask in enumerate(self.block_masks):
            for e in bits(mask):
                self._block_of[e] = i
        self._full_rank = sum(
            min(cap, popcount(mask))
            for cap, mask in zip(self.capacities, self.block_masks)
        )

    def _independent(self, subset: int) -> bool:
        for cap, mask in zip(self.capacities, self.block_masks):
            if popcount(subset & mask) > cap:
                return False
        return True

    def rank_of(self, subset: int) -> int:
        self._check_subset(subset)
        return sum(
            min(cap, popcount(subset & mask))
            for cap, mask in zip(self.capacities, self.block_masks)
        )

    def circuit_in(self, indep: int, e: int) -> Optional[int]:
        bit = self._check_element(e)
        if indep & bit:
            raise PreconditionError("element already in the independent set")
        b = self._block_of[e]
        inside = indep & self.block_masks[b]
        if popcount(inside) < self.capacities[b]:
            return None
        return inside | bit

    def to_doc(self) -> dict:
        return {
            "type": "partition",
            "blocks": [ids_of(mask) for mask in self.block_masks],
            "capacities": list(self.capacities),
        }


class LinearGf2Matroid(Matroid):
    """Columns of a 0/1 matrix; independence is linear independence over GF(2).

    Each column is an int whose bit j is coordinate j; elimination works
    directly on these ints.
    """

    kind = "linear_gf2"

    def __init__(self, columns: Sequence[int], dim: int):
        super().__init__(len(columns))
        if dim < 0:
            raise MalformedInputError("ambient dimension must be nonnegative")
        self.dim = dim
        bound = 1 << dim
        for col in columns:
            if not 0 <= col < bound:
                raise MalformedInputError("column does not fit the ambient dimension")
        self.columns = tuple(columns)

    def _independent(self, subset: int) -> bool:
        # Rows kept sorted by descending leading bit; forward elimination.
        rows: List[int] = []
        for e in bits(subset):
            vec = self.columns[e]
            for row in rows:
                if vec & (1 << (row.bit_length() - 1)):
                    vec ^= row
            if vec == 0:
                return False
            rows.append(vec)
            rows.sort(reverse=True)
        return True

    def circuit_in(self, indep: int, e: int) -> Optional[int]:
        bit = self._check_element(e)
        if indep & bit:
            raise PreconditionError("element already in the independent set")
        solve = self._solver_for(indep)
        combo = solve(self.columns[e])
        if combo is None:
            return None
        return combo | bit

    def fundamental_circuits_for(self, basis: int) -> Callable[[int], int]:
        solve = self._solver_for(basis)

        def query(e: int) -> int:
            combo = solve(self.columns[e])
            if combo is None:
                raise InvariantViolationError("column not spanned by basis")
            return combo | (1 << e)

        return query

    def _solver_for(self, indep: int) -> Callable[[int], Optional[int]]:
        # Rows annotated with the element combination that produced them,
        # so reducing a vector to zero also yields a dependency support.
        rows: List[Tuple[int, int, int]] = []  # (pivot bit, vector, combo)
        for e in bits(indep):
            vec = self.columns[e]
            combo = 1 << e
            for pb, pv, pc in rows:
                if vec & pb:
                    vec ^= pv
                    combo ^= pc
            if vec == 0:
                raise PreconditionError("set is dependent, cannot solve against it")
            rows.append((1 << (vec.bit_length() - 1), vec, combo))
            rows.sort(reverse=True)

        def solve(vec: int) -> Optional[int]:
            combo = 0
            for pb, pv, pc in rows:
                if vec & pb:
                    vec ^= pv
                    combo ^= pc
            return combo if vec == 0 else None

        return solve

    def to_doc(self) -> dict:
        width = max(self.dim, 1)
        return {
            "type": "linear_gf2",
            "num_elements": self.m,
            "columns": [format(col, f"0{width}b") for col in self.columns],
        }


class CountingMatroid(Matroid):
    """Wrapper that meters oracle usage of another matroid.

    Each independence query counts 1.  A circuit query counts what the
    generic characterization would spend, |indep|+1 independence
    queries, so kind-specific shortcuts report comparable numbers.
    """

    def __init__(self, inner: Matroid):
        super().__init__(inner.m)
        self.inner = inner
        self.kind = inner.kind
        self.oracle_calls = 0

    def _independent(self, subset: int) -> bool:
        self.oracle_calls += 1
        return self.inner._independent(subset)

    def circuit_in(self, indep: int, e: int) -> Optional[int]:
        self.oracle_calls += popcount(indep) + 1
        return self.inner.circuit_in(indep, e)

    def fundamental_circuits_for(self, basis: int) -> Callable[[int], int]:
        inner_query = self.inner.fundamental_circuits_for(basis)
        cost = popcount(basis) + 1

        def query(e: int) -> int:
            self.oracle_calls += cost
            return inner_query(e)

        return query

    def to_doc(self) -> dict:
        return self.inner.to_doc()


# -- standalone operations -------------------------------------------------


def fundamental_circuit(matroid: Matroid, basis: int, e: int) -> int:
    """Fundamental circuit of e with respect to a basis."""
    if not matroid.is_basis(basis):
        raise PreconditionError("fundamental circuits are defined against a basis")
    bit = matroid._check_element(e)
    if basis & bit:
        raise PreconditionError("element already belongs to the basis")
    circ = matroid.circuit_in(basis, e)
    if circ is None:
        raise InvariantViolationError("adding an element to a basis must close a circuit")
    return circ


def mutually_exchangeable(matroid: Matroid, b1: int, b2: int, x: int, y: int) -> bool:
    """True iff swapping x and y keeps both sets bases."""
    xbit = matroid._check_element(x)
    ybit = matroid._check_element(y)
    if not (b1 & xbit) or not (b2 & ybit):
        raise PreconditionError("x must lie in the first basis and y in the second")
    if not matroid.is_basis(b1) or not matroid.is_basis(b2):
        raise PreconditionError("both sets must be bases")
    return matroid.is_basis((b1 & ~xbit) | ybit) and matroid.is_basis((b2 & ~ybit) | xbit)


def random_independent_set(matroid: Matroid, rng: random.Random) -> int:
    """Greedy independent set over a random element order."""
    order = list(range(matroid.m))
    rng.shuffle(order)
    indep = 0
    for e in order:
        if rng.random() < 0.5 and matroid.circuit_in(indep, e) is None:
            indep |= 1 << e
    return indep


def spot_check_axioms(matroid: Matroid, rng: random.Random, trials: int = 1000) -> bool:
    """Randomized downward-closure and augmentation checks."""
    m = matroid.m
    if m == 0:
        return matroid.is_independent(0)
    for _ in range(trials):
        indep = random_independent_set(matroid, rng)
        sub = indep & rng.getrandbits(m)
        if not matroid.is_independent(sub):
            return False
    for _ in range(trials):
        small = random_independent_set(matroid, rng)
        large = random_independent_set(matroid, rng)
        if popcount(small) > popcount(large):
            small, large = large, small
        if popcount(small) == popcount(large):
            if small == 0:
                continue
            small &= small - 1  # drop lowest element
        grew = any(
            matroid.circuit_in(small, a) is None for a in bits(large & ~small)
        )
        if not grew:
            return False
    return True


# -- documents ---------------------------------------------------------------


def matroid_from_doc(doc: dict) -> Matroid:
    """Build a matroid from its JSON document form."""
    if not isinstance(doc, dict) or "type" not in doc:
        raise MalformedInputError("matroid document must be an object with a 'type'")
    kind = doc["type"]
    try:
        if kind == "graphic":
            edges = [(int(u), int(v)) for u, v in doc["edges"]]
            return GraphicMatroid(int(doc["num_vertices"]), edges)
        if kind == "uniform":
            return UniformMatroid(int(doc["num_elements"]), int(doc["rank"]))
        if kind == "partition":
            blocks = [[int(e) for e in block] for block in doc["blocks"]]
            caps = [int(c) for c in doc["capacities"]]
            return PartitionMatroid(blocks, caps)
        if kind == "linear_gf2":
            cols = doc["columns"]
            if not cols and int(doc["num_elements"]) != 0:
                raise MalformedInputError("missing columns")
            dim = len(cols[0]) if cols else 0
            parsed = []
            for s in cols:
                if len(s) != dim or set(s) - {"0", "1"}:
                    raise MalformedInputError("columns must be equal-length bit strings")
                parsed.append(int(s, 2) if s else 0)
            if len(parsed) != int(doc["num_elements"]):
                raise MalformedInputError("num_elements disagrees with columns")
            return LinearGf2Matroid(parsed, dim)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad matroid document: {exc}") from exc
    raise MalformedInputError(f"unknown matroid type {kind!r}")


def k4_matroid() -> GraphicMatroid:
    """Graphic matroid of the complete graph on four vertices.

    Edge ids follow the fixed order (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
    """
    return GraphicMatroid(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
