"""Matroid-constrained fair division of indivisible goods.

Bundles must be bases, so a feasible allocation is a basis partition
with one part per agent.  Covered here: an EF1 construction for
identical valuations taking at most three distinct values, exact
maximin-share values and allocations for valuations taking at most two
values, and cut-and-choose for two agents.  All arithmetic on values is
exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .bitset import bits, ids_of, mask_of, popcount
from .errors import (
    InfeasibleError,
    InvariantViolationError,
    MalformedInputError,
    PreconditionError,
)
from .exchange import apply_exchange, find_rebalancing_exchange
from .matching import maximum_bipartite_matching
from .matroids import Matroid, matroid_from_doc
from .partition import (
    PartitionStats,
    equitable_partition,
    partition_into_k_bases,
    rebalance_partition,
    two_set_equitable_partition,
)

Valuation = Tuple[Fraction, ...]


def bundle_value(values: Sequence[Fraction], bundle: int) -> Fraction:
    total = Fraction(0)
    for e in bits(bundle):
        total += values[e]
    return total


@dataclass(frozen=True)
class FairDivisionInstance:
    matroid: Matroid
    valuations: Tuple[Valuation, ...]

    def __post_init__(self):
        if not self.valuations:
            raise MalformedInputError("need at least one agent")
        for v in self.valuations:
            if len(v) != self.matroid.m:
                raise MalformedInputError("valuation length must match element count")

    @property
    def n(self) -> int:
        return len(self.valuations)

    def value(self, agent: int, bundle: int) -> Fraction:
        return bundle_value(self.valuations[agent], bundle)


def parse_values(raw: Sequence[str]) -> Valuation:
    try:
        return tuple(Fraction(str(s)) for s in raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"bad rational value: {exc}") from exc


def instance_from_doc(doc: dict) -> FairDivisionInstance:
    """Parse {"matroid": {...}, "agents": [{"values": ["0", "3/2", ...]}, ...]}."""
    if not isinstance(doc, dict):
        raise MalformedInputError("instance document must be an object")
    try:
        matroid = matroid_from_doc(doc["matroid"])
        agents = doc["agents"]
        valuations = tuple(parse_values(agent["values"]) for agent in agents)
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"bad instance document: {exc}") from exc
    return FairDivisionInstance(matroid, valuations)


def instance_to_doc(inst: FairDivisionInstance) -> dict:
    return {
        "matroid": inst.matroid.to_doc(),
        "agents": [{"values": [str(x) for x in v]} for v in inst.valuations],
    }


def normalize_valuation(values: Sequence[Fraction]):
    """Shift the minimum to zero; scale two-valued inputs onto {0, 1}.

    Returns (normalized, shift, scale) with normalized = (v - shift) * scale.
    """
    vals = tuple(Fraction(x) for x in values)
    if not vals:
        return (), Fraction(0), Fraction(1)
    shift = min(vals)
    shifted = tuple(x - shift for x in vals)
    distinct = set(vals)
    top = max(shifted)
    if len(distinct) <= 2 and top > 0:
        scale = Fraction(1) / top
    else:
        scale = Fraction(1)
    return tuple(x * scale for x in shifted), shift, scale


def validate_allocation(inst: FairDivisionInstance, bundles: Sequence[int]) -> None:
    if len(bundles) != inst.n:
        raise InfeasibleError("allocation must give every agent one bundle")
    union = 0
    total = 0
    for b in bundles:
        if not inst.matroid.is_basis(b):
            raise InfeasibleError(f"bundle {ids_of(b)} is not a basis")
        union |= b
        total += popcount(b)
    if union != inst.matroid.full_mask or total != inst.matroid.m:
        raise InfeasibleError("bundles must partition all goods")


def ef1_violation(
    inst: FairDivisionInstance, bundles: Sequence[int], validate: bool = True
) -> Optional[Tuple[int, int]]:
    """Lexicographically smallest (envier, envied) pair beyond EF1, if any."""
    if validate:
        validate_allocation(inst, bundles)
    for i in range(inst.n):
        own = inst.value(i, bundles[i])
        for j in range(inst.n):
            if i == j or bundles[j] == 0:
                continue
            other = inst.value(i, bundles[j])
            best_drop = max(inst.valuations[i][g] for g in bits(bundles[j]))
            if own < other - best_drop:
                return i, j
    return None


def ef1_check(
    inst: FairDivisionInstance, bundles: Sequence[int], validate: bool = True
) -> bool:
    return ef1_violation(inst, bundles, validate=validate) is None


def _require_identical(inst: FairDivisionInstance) -> Valuation:
    first = inst.valuations[0]
    if any(v != first for v in inst.valuations[1:]):
        raise PreconditionError("identical valuations required")
    return first


def ef1_allocate_trivalued(
    inst: FairDivisionInstance, stats: Optional[PartitionStats] = None
) -> List[int]:
    """Feasible EF1 allocation for identical valuations with <= 3 values.

    After shifting the smallest value to zero, the two-set balancing of
    the high- and low-value classes is already EF1 unless some bundle
    trails another by exactly two low goods at equal high counts; while
    such a pair exists, an exchange over the zero-value goods of the two
    bundles either equalizes them or trades a high good for two low
    ones, and at most n such repairs are needed.
    """
    values = _require_identical(inst)
    distinct = sorted(set(values))
    if len(distinct) > 3:
        raise PreconditionError("at most three distinct values allowed")
    if distinct and distinct[0] < 0:
        raise PreconditionError("negative values not supported here")
    matroid = inst.matroid
    n = inst.n
    if matroid.m != n * matroid.full_rank:
        raise InfeasibleError("each agent must receive a full basis")

    shift = distinct[0] if distinct else Fraction(0)
    shifted = tuple(x - shift for x in values)
    levels = sorted({x for x in shifted if x > 0})
    if not levels:
        return partition_into_k_bases(matroid, n, stats)
    if len(levels) == 1:
        ones = mask_of(e for e, x in enumerate(shifted) if x > 0)
        return equitable_partition(matroid, n, ones, stats=stats)

    low_value, high_value = levels
    high_set = mask_of(e for e, x in enumerate(shifted) if x == high_value)
    low_set = mask_of(e for e, x in enumerate(shifted) if x == low_value)
    zero_set = matroid.full_mask & ~(high_set | low_set)
    bundles = two_set_equitable_partition(matroid, n, high_set, low_set, stats=stats)

    shifted_inst = FairDivisionInstance(matroid, tuple([shifted] * n))
    for _ in range(n + 1):
        pair = ef1_violation(shifted_inst, bundles, validate=False)
        if pair is None:
            break
        i, j = pair
        hi_i, lo_i = popcount(bundles[i] & high_set), popcount(bundles[i] & low_set)
        hi_j, lo_j = popcount(bundles[j] & high_set), popcount(bundles[j] & low_set)
        if hi_i != hi_j or lo_j != lo_i + 2:
            raise InvariantViolationError("unexpected envy profile after balancing")
        spare = (bundles[i] | bundles[j]) & zero_set
        found = find_rebalancing_exchange(matroid, bundles[j], bundles[i], spare)
        bundles[j], bundles[i] = apply_exchange(bundles[j], bundles[i], found)
        if stats is not None:
            stats.exchanges += 1
            stats.repairs += 1
    else:
        raise InvariantViolationError("EF1 repair loop exceeded its bound")
    if not ef1_check(inst, bundles):
        raise InvariantViolationError("allocation failed the EF1 check")
    return bundles


def mms_value_binary(values: Sequence[Fraction], n: int, matroid: Matroid) -> int:
    """Maximin share of a 0/1 valuation when n disjoint bases exist."""
    vals = tuple(Fraction(x) for x in values)
    if set(vals) - {Fraction(0), Fraction(1)}:
        raise PreconditionError("binary values required")
    if n < 1 or len(vals) != matroid.m or matroid.m != n * matroid.full_rank:
        raise PreconditionError("need m = n * rank")
    total = sum(int(x) for x in vals)
    return total // n


def mms_threshold(values: Sequence[Fraction], n: int, matroid: Matroid) -> Fraction:
    """Exact maximin share of a bi-valued agent, by the floor formula.

    Shifting and scaling onto {0, 1} preserve maximin shares, so the
    share is the binary floor value mapped back to the original scale.
    """
    vals = tuple(Fraction(x) for x in values)
    if len(set(vals)) > 2:
        raise PreconditionError("at most two distinct values per agent")
    if n < 1 or len(vals) != matroid.m or matroid.m != n * matroid.full_rank:
        raise PreconditionError("need m = n * rank")
    normalized, shift, scale = normalize_valuation(vals)
    ones = sum(1 for x in normalized if x == 1)
    return Fraction(ones // n) / scale + shift * matroid.full_rank


def mms_allocate_bivalued(
    inst: FairDivisionInstance, stats: Optional[PartitionStats] = None
) -> List[int]:
    """Feasible allocation giving every bi-valued agent their maximin share.

    Normalizes each agent to a 0/1 valuation (shifting tolerates
    negative values), then rounds of: the lowest remaining agent splits
    the remaining goods into bases balanced on her preferred goods;
    agents are matched to bundles they accept; if the matching is not
    perfect, the bundles reachable by alternating paths from an
    unmatched bundle are handed to their matched agents, and nobody left
    behind accepts any bundle that just left.
    """
    matroid = inst.matroid
    n = inst.n
    r = matroid.full_rank
    if matroid.m != n * r:
        raise InfeasibleError("each agent must receive a full basis")
    ones: List[int] = []
    thresholds: List[int] = []
    for v in inst.valuations:
        distinct = sorted(set(v))
        if len(distinct) > 2:
            raise PreconditionError("at most two distinct values per agent")
        if len(distinct) == 2:
            wanted = mask_of(e for e, x in enumerate(v) if x == distinct[1])
        else:
            wanted = 0
        ones.append(wanted)
        thresholds.append(popcount(wanted) // n)

    parts = partition_into_k_bases(matroid, n, stats)
    remaining = list(range(n))
    result: List[int] = [0] * n
    while remaining:
        n2 = len(remaining)
        if len(parts) != n2:
            raise InvariantViolationError("bundle and agent counts diverged")
        union = 0
        for p in parts:
            union |= p
        for i in remaining:
            if popcount(ones[i] & union) // n2 < thresholds[i]:
                raise InvariantViolationError(
                    "remaining goods cannot cover a remaining agent's share"
                )
        divider = remaining[0]
        parts = rebalance_partition(matroid, parts, ones[divider] & union, stats)
        adjacency = [
            mask_of(
                b
                for b in range(n2)
                if popcount(ones[i] & parts[b]) >= thresholds[i]
            )
            for i in remaining
        ]
        if adjacency[0] != (1 << n2) - 1:
            raise InvariantViolationError("divider must accept every bundle she cut")
        match_left, match_right = maximum_bipartite_matching(adjacency, n2)
        if all(b >= 0 for b in match_left):
            for pos, agent in enumerate(remaining):
                result[agent] = parts[match_left[pos]]
            remaining = []
            parts = []
            break
        unmatched = next(b for b in range(n2) if match_right[b] < 0)
        reachable = 1 << unmatched
        while True:
            grown = reachable
            for pos in range(n2):
                if adjacency[pos] & reachable:
                    b = match_left[pos]
                    if b < 0:
                        raise InvariantViolationError(
                            "maximum matching left an augmenting path"
                        )
                    grown |= 1 << b
            if grown == reachable:
                break
            reachable = grown
        handed = reachable & ~(1 << unmatched)
        if handed == 0:
            raise InvariantViolationError("alternating set assigned nobody")
        gone_positions = set()
        for b in bits(handed):
            pos = match_right[b]
            result[remaining[pos]] = parts[b]
            gone_positions.add(pos)
        for pos in range(n2):
            if pos not in gone_positions and adjacency[pos] & reachable:
                raise InvariantViolationError(
                    "a remaining agent still accepts a handed-out bundle"
                )
        remaining = [a for pos, a in enumerate(remaining) if pos not in gone_positions]
        parts = [p for b, p in enumerate(parts) if not (handed >> b) & 1]

    validate_allocation(inst, result)
    for i in range(n):
        if popcount(ones[i] & result[i]) < thresholds[i]:
            raise InvariantViolationError("an agent fell below the maximin share")
    return result


def cut_and_choose_ef1_two_agents(
    inst: FairDivisionInstance, stats: Optional[PartitionStats] = None
) -> List[int]:
    """EF1 for two agents: split by the first valuation, second picks."""
    if inst.n != 2:
        raise PreconditionError("exactly two agents required")
    proxy = FairDivisionInstance(
        inst.matroid, (inst.valuations[0], inst.valuations[0])
    )
    first, second = ef1_allocate_trivalued(proxy, stats)
    if inst.value(1, second) >= inst.value(1, first):
        bundles = [first, second]
    else:
        bundles = [second, first]
    if not ef1_check(inst, bundles):
        raise InvariantViolationError("cut and choose failed the EF1 check")
    return bundles
