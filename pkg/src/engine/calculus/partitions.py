"""
Integer partitions and compositions for the orbit-profile grammar.
"""

from itertools import combinations
from typing import List, Tuple

from sympy.utilities.iterables import partitions as sympy_partitions

from ..errors import InadmissibleInputError, ResourceLimitError

# A partition is a non-increasing tuple of positive parts.
Partition = Tuple[int, ...]

MAX_PARTITION_TOTAL = 100
MAX_COMPOSITION_TOTAL = 20


def _check_total(n: int, limit: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InadmissibleInputError(f"total must be a positive integer, got {n!r}")
    if n > limit:
        raise ResourceLimitError(f"total {n} exceeds the enumeration guard {limit}")


def unordered_partitions(n: int) -> List[Partition]:
    """
    All partitions of n as non-increasing tuples, largest first:
    4 -> (4), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1).
    """
    _check_total(n, MAX_PARTITION_TOTAL)
    result = []
    for counts in sympy_partitions(n):
        parts = []
        for part, multiplicity in sorted(counts.items(), reverse=True):
            parts.extend([part] * multiplicity)
        result.append(tuple(parts))
    return sorted(result, reverse=True)


def compositions(n: int) -> List[Tuple[int, ...]]:
    """All 2^(n-1) ordered tuples of positive integers summing to n."""
    _check_total(n, MAX_COMPOSITION_TOTAL)
    result = []
    for cut_count in range(n):
        for cuts in combinations(range(1, n), cut_count):
            bounds = (0,) + cuts + (n,)
            result.append(tuple(bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)))
    return result
