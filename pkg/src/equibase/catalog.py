"""Instance generators for the verification suites.

The small-instance catalog drives the correctness checks: every connected
multigraph on up to five vertices splitting into two spanning trees,
the uniform family, and seeded random binary-linear and partition
matroids that decompose into bases by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import List, Sequence, Tuple

from .errors import InfeasibleError
from .matroids import GraphicMatroid, LinearGf2Matroid, Matroid, PartitionMatroid, UniformMatroid
from .partition import partition_into_k_bases


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    matroid: Matroid
    k: int


@lru_cache(maxsize=None)
def two_tree_multigraphs(max_vertices: int = 5) -> Tuple[CatalogEntry, ...]:
    """Every connected labelled multigraph on <= max_vertices vertices
    that is the union of two edge-disjoint spanning trees.

    Loop edges can never sit in a spanning tree, so candidate edges are
    the unordered vertex pairs with multiplicity.
    """
    entries: List[CatalogEntry] = []
    for nv in range(2, max_vertices + 1):
        pairs = list(combinations(range(nv), 2))
        m = 2 * (nv - 1)
        for multi in combinations_with_replacement(pairs, m):
            matroid = GraphicMatroid(nv, list(multi))
            try:
                partition_into_k_bases(matroid, 2)
            except InfeasibleError:
                continue
            entries.append(CatalogEntry(f"graphic#{nv}v#{len(entries)}", matroid, 2))
    return tuple(entries)


def uniform_entries(max_rank: int = 6) -> List[CatalogEntry]:
    return [
        CatalogEntry(f"uniform({2 * r},{r})", UniformMatroid(2 * r, r), 2)
        for r in range(1, max_rank + 1)
    ]


def _random_invertible_gf2(rank: int, rng: random.Random) -> List[int]:
    while True:
        cols = [rng.randrange(1, 1 << rank) for _ in range(rank)]
        if LinearGf2Matroid(cols, rank).full_rank == rank:
            return cols


def random_gf2_entries(
    count: int, rng: random.Random, ks: Sequence[int] = (2, 3)
) -> List[CatalogEntry]:
    """Random binary matroids built as k shuffled bases, so m = k * r <= 12."""
    entries = []
    for i in range(count):
        k = ks[i % len(ks)]
        rank = rng.randrange(2, 12 // k + 1)
        cols: List[int] = []
        for _ in range(k):
            cols.extend(_random_invertible_gf2(rank, rng))
        rng.shuffle(cols)
        entries.append(
            CatalogEntry(f"gf2#{i}(m={k * rank},k={k})", LinearGf2Matroid(cols, rank), k)
        )
    return entries


def random_partition_entries(
    count: int, rng: random.Random, ks: Sequence[int] = (2, 3)
) -> List[CatalogEntry]:
    """Random partition matroids whose block sizes are k * capacity."""
    entries = []
    for i in range(count):
        k = ks[i % len(ks)]
        blocks: List[List[int]] = []
        capacities: List[int] = []
        used = 0
        while True:
            cap = rng.randrange(1, 3)
            if used + k * cap > 12:
                break
            blocks.append(list(range(used, used + k * cap)))
            capacities.append(cap)
            used += k * cap
            if len(blocks) >= 4 or rng.random() < 0.3:
                break
        if not blocks:
            blocks, capacities, used = [list(range(k))], [1], k
        entries.append(
            CatalogEntry(
                f"partition#{i}(m={used},k={k})",
                PartitionMatroid(blocks, capacities),
                k,
            )
        )
    return entries


def full_catalog(
    seed: int = 0,
    max_vertices: int = 5,
    gf2_count: int = 50,
    partition_count: int = 50,
) -> List[CatalogEntry]:
    rng = random.Random(seed)
    entries = list(two_tree_multigraphs(max_vertices))
    entries.extend(uniform_entries())
    entries.extend(random_gf2_entries(gf2_count, rng))
    entries.extend(random_partition_entries(partition_count, rng))
    return entries


def sample_targets(matroid: Matroid, count: int, rng: random.Random) -> List[int]:
    """All subsets when the ground set is small, else distinct samples."""
    if (1 << matroid.m) <= count:
        return list(range(1 << matroid.m))
    seen = set()
    while len(seen) < count:
        seen.add(rng.getrandbits(matroid.m))
    return sorted(seen)


def random_two_tree_graphic(
    num_vertices: int, rng: random.Random
) -> GraphicMatroid:
    """Union of two random edge-disjoint spanning trees (m = 2n - 2)."""
    first = [(rng.randrange(v), v) for v in range(1, num_vertices)]
    taken = {tuple(sorted(e)) for e in first}
    while True:
        order = list(range(num_vertices))
        rng.shuffle(order)
        second: List[Tuple[int, int]] = []
        ok = True
        for pos in range(1, num_vertices):
            v = order[pos]
            choices = [
                order[u]
                for u in range(pos)
                if tuple(sorted((order[u], v))) not in taken
            ]
            if not choices:
                ok = False
                break
            second.append((rng.choice(choices), v))
        if ok:
            return GraphicMatroid(num_vertices, first + second)
