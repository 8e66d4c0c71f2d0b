"""Exhaustive ground truth for small instances.

Everything here is deliberately naive: enumerate, try all, compare.
The test and verification suites check the fast algorithms against
these oracles, so none of this may share code paths with them beyond
the independence oracle itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import List, Optional, Tuple

from .bitset import bits, ids_of, lowest_bit, mask_of, popcount
from .errors import BudgetExceededError, InfeasibleError, PreconditionError
from .exchange import ExchangeSet, verify_exchangeable
from .fairdiv import FairDivisionInstance, ef1_check
from .matching import maximum_bipartite_matching
from .matroids import Matroid


@dataclass(frozen=True)
class EnumerationBudget:
    """Safety caps; exceeding one raises rather than silently truncating."""

    max_elements: int = 12
    max_partitions: int = 200_000


DEFAULT_BUDGET = EnumerationBudget()


def _budget(budget: Optional[EnumerationBudget]) -> EnumerationBudget:
    return budget if budget is not None else DEFAULT_BUDGET


def enumerate_bases(
    matroid: Matroid, budget: Optional[EnumerationBudget] = None
) -> List[int]:
    """All bases, ordered by ascending element tuples."""
    cap = _budget(budget)
    if matroid.m > cap.max_elements:
        raise BudgetExceededError(
            f"{matroid.m} elements exceed the enumeration cap {cap.max_elements}"
        )
    r = matroid.full_rank
    return [
        mask_of(combo)
        for combo in combinations(range(matroid.m), r)
        if matroid.is_independent(mask_of(combo))
    ]


def enumerate_basis_partitions(
    matroid: Matroid, k: int, budget: Optional[EnumerationBudget] = None
) -> List[Tuple[int, ...]]:
    """All unordered partitions of the ground set into k bases.

    Each partition is emitted once, parts ordered by smallest element.
    Infeasible shapes yield an empty list; only size caps raise.
    """
    cap = _budget(budget)
    if matroid.m > cap.max_elements:
        raise BudgetExceededError(
            f"{matroid.m} elements exceed the enumeration cap {cap.max_elements}"
        )
    if k < 1:
        raise PreconditionError("need at least one part")
    r = matroid.full_rank
    if matroid.m != k * r:
        return []
    if r == 0:
        return [tuple([0] * k)]
    results: List[Tuple[int, ...]] = []

    def descend(remaining: int, acc: List[int]) -> None:
        if remaining == 0:
            if len(results) >= cap.max_partitions:
                raise BudgetExceededError("too many partitions to enumerate")
            results.append(tuple(acc))
            return
        anchor = lowest_bit(remaining)
        rest = ids_of(remaining & ~(1 << anchor))
        for combo in combinations(rest, r - 1):
            cand = mask_of(combo) | (1 << anchor)
            if matroid.is_independent(cand):
                acc.append(cand)
                descend(remaining & ~cand, acc)
                acc.pop()

    descend(matroid.full_mask, [])
    return results


def brute_equitable(
    matroid: Matroid,
    k: int,
    target: int,
    budget: Optional[EnumerationBudget] = None,
) -> bool:
    """Does any k-basis partition split target within floor/ceil bounds?"""
    size = popcount(target & matroid.full_mask)
    floor, ceil = size // k, -(-size // k)
    for parts in enumerate_basis_partitions(matroid, k, budget):
        if all(floor <= popcount(p & target) <= ceil for p in parts):
            return True
    return False


def exhaustive_rebalancing_exchange(
    matroid: Matroid,
    low: int,
    high: int,
    target: int,
    budget: Optional[EnumerationBudget] = None,
) -> Optional[ExchangeSet]:
    """Smallest exchangeable pivot set by direct search.

    Tries every pivot in low outside the target and every subset of the
    target, smallest sets first, ties by pivot then lexicographic.
    """
    cap = _budget(budget)
    tgt = target & (low | high)
    if popcount(tgt) > cap.max_elements:
        raise BudgetExceededError("target set too large for exhaustive search")
    pivots = ids_of(low & ~tgt)
    pool = ids_of(tgt)
    for size in range(len(pool) + 1):
        for t in pivots:
            tbit = 1 << t
            for combo in combinations(pool, size):
                x = mask_of(combo) | tbit
                if verify_exchangeable(matroid, low, high, x):
                    return ExchangeSet(elements=x, pivot=t)
    return None


def brute_mms(
    inst: FairDivisionInstance,
    agent: int,
    budget: Optional[EnumerationBudget] = None,
) -> Fraction:
    """Exact maximin share by maximizing over all basis partitions."""
    partitions = enumerate_basis_partitions(inst.matroid, inst.n, budget)
    if not partitions:
        raise InfeasibleError("no feasible allocation exists")
    return max(
        min(inst.value(agent, part) for part in parts) for parts in partitions
    )


def brute_ef1_exists(
    inst: FairDivisionInstance, budget: Optional[EnumerationBudget] = None
) -> bool:
    """Does some feasible allocation pass the EF1 check?"""
    identical = all(v == inst.valuations[0] for v in inst.valuations)
    for parts in enumerate_basis_partitions(inst.matroid, inst.n, budget):
        if identical:
            if ef1_check(inst, list(parts), validate=False):
                return True
            continue
        for perm in permutations(parts):
            if ef1_check(inst, list(perm), validate=False):
                return True
    return False


def exchange_subgraph(
    matroid: Matroid, indep: int, other: int
) -> Tuple[List[int], List[int], List[int]]:
    """Single-swap subgraph between indep \\ other and other \\ indep.

    Returns (left ids, right ids, adjacency masks over right indices)
    where left vertex x connects to y iff indep - x + y is independent.
    """
    left = ids_of(indep & ~other)
    right = ids_of(other & ~indep)
    adjacency = []
    for x in left:
        row = 0
        for pos, y in enumerate(right):
            if matroid.is_independent((indep & ~(1 << x)) | (1 << y)):
                row |= 1 << pos
        adjacency.append(row)
    return left, right, adjacency


def matching_exchange_check(matroid: Matroid, b1: int, b2: int) -> bool:
    """Perfect matching of single swaps between two bases' differences."""
    if not matroid.is_basis(b1) or not matroid.is_basis(b2):
        raise PreconditionError("both sets must be bases")
    left, right, adjacency = exchange_subgraph(matroid, b1, b2)
    if len(left) != len(right):
        return False
    match_left, _ = maximum_bipartite_matching(adjacency, len(right))
    return all(b >= 0 for b in match_left)
