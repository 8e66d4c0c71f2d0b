"""Deterministic bipartite matching on adjacency bitmasks."""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .bitset import bits


def maximum_bipartite_matching(
    adjacency: Sequence[int], right_count: int
) -> Tuple[List[int], List[int]]:
    """Kuhn's augmenting-path matching.

    adjacency[i] is the bitmask of right-side vertices left vertex i may
    match.  Returns (match_left, match_right) with -1 for unmatched.
    Left vertices are processed in index order and neighbours in
    ascending order, so the result is deterministic.
    """
    match_left = [-1] * len(adjacency)
    match_right = [-1] * right_count

    def try_augment(i: int, banned: int) -> Tuple[bool, int]:
        for j in bits(adjacency[i] & ~banned):
            banned |= 1 << j
            owner = match_right[j]
            if owner < 0:
                match_right[j] = i
                match_left[i] = j
                return True, banned
            ok, banned = try_augment(owner, banned)
            if ok:
                match_right[j] = i
                match_left[i] = j
                return True, banned
        return False, banned

    for i in range(len(adjacency)):
        try_augment(i, 0)
    return match_left, match_right


def count_perfect_matchings(adjacency: Sequence[int], limit: int = 2) -> int:
    """Number of perfect matchings, counting at most `limit`.

    Backtracking over left vertices; adequate for the small instances
    the verification suite probes.
    """
    n = len(adjacency)

    def walk(i: int, used: int) -> int:
        if i == n:
            return 1
        total = 0
        for j in bits(adjacency[i] & ~used):
            total += walk(i + 1, used | (1 << j))
            if total >= limit:
                return total
        return total

    return walk(0, 0)
