"""Element sets as int bitmasks.

Every subset of the ground set {0, .., m-1} is represented by a Python
int whose bit e is set iff element e is in the set.  Set algebra is then
plain integer arithmetic (| & ^ ~), which stays fast even for a few
thousand elements.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List


def mask_of(ids: Iterable[int]) -> int:
    """Bitmask for a collection of element ids."""
    mask = 0
    for e in ids:
        mask |= 1 << e
    return mask


def ids_of(mask: int) -> List[int]:
    """Sorted list of element ids in a bitmask."""
    return list(bits(mask))


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest_bit(mask: int) -> int:
    """Position of the lowest set bit; mask must be nonzero."""
    return (mask & -mask).bit_length() - 1
