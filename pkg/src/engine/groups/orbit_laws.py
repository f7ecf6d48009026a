from collections import Counter
from typing import Sequence

from ..errors import InadmissibleInputError
from ..models.profile import OrbitProfile


def product_orbit_law(profiles: Sequence[OrbitProfile]) -> OrbitProfile:
    """
    Orbit profile of a direct product acting on a product of sets: one
    orbit of length l_1 * ... * l_r for every choice of one orbit per factor.
    """
    if not profiles:
        raise InadmissibleInputError("product_orbit_law needs at least one profile")
    counts = Counter(profiles[0].as_dict())
    for profile in profiles[1:]:
        folded: Counter = Counter()
        for length, multiplicity in counts.items():
            for other_length, other_multiplicity in profile.items:
                folded[length * other_length] += multiplicity * other_multiplicity
        counts = folded
    return OrbitProfile.from_counts(counts)


def power_orbit_law(profile: OrbitProfile, copies: int) -> OrbitProfile:
    if copies < 1:
        raise InadmissibleInputError(f"copies must be positive, got {copies}")
    return product_orbit_law([profile] * copies)


def subdirect_orbit_law(base: OrbitProfile, index: int) -> OrbitProfile:
    """Every orbit length multiplied by the subdirect index; multiplicities kept."""
    if index < 1:
        raise InadmissibleInputError(f"index must be positive, got {index}")
    return base.scaled(index)
