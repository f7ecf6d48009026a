"""
Permutation groups held as explicit element sets.

Every group the oracle needs has at most a few hundred thousand elements,
so closure, membership, intersections and coset spaces are computed
directly on materialized elements.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..errors import InadmissibleInputError, NotASubgroupError, ResourceLimitError
from ..models.profile import OrbitProfile
from .permutation import Permutation

logger = logging.getLogger(__name__)

DEFAULT_CAP = 200000


@dataclass(frozen=True)
class PermGroup:
    """A finite permutation group: degree, generators and the full element set."""
    degree: int
    generators: Tuple[Permutation, ...]
    elements: FrozenSet[Permutation] = field(default_factory=frozenset, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, perm: Permutation) -> bool:
        return perm in self.elements

    def __iter__(self) -> Iterator[Permutation]:
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.elements <= other.elements

    def conjugate(self, x: Permutation) -> "PermGroup":
        return PermGroup(
            self.degree,
            tuple(g.conjugate(x) for g in self.generators),
            frozenset(g.conjugate(x) for g in self.elements),
        )

    def intersection(self, other: "PermGroup") -> "PermGroup":
        return subgroup_from_elements(self.elements & other.elements, self.degree)

    def derived_subgroup(self, cap: int = DEFAULT_CAP) -> "PermGroup":
        """Subgroup generated by all commutators."""
        commutators = {a.commutator(b) for a in self.elements for b in self.elements}
        return closure(sorted(commutators), cap=cap, degree=self.degree)

    def orbit(self, point: int) -> List[int]:
        seen = {point}
        queue = deque([point])
        while queue:
            current = queue.popleft()
            for gen in self.generators:
                image = gen(current)
                if image not in seen:
                    seen.add(image)
                    queue.append(image)
        return sorted(seen)

    @property
    def is_transitive(self) -> bool:
        return self.degree == 0 or len(self.orbit(0)) == self.degree


def closure(generators: Sequence[Permutation], cap: int = DEFAULT_CAP, degree: Optional[int] = None) -> PermGroup:
    """
    The group generated by `generators`, materialized by breadth-first
    right multiplication from the identity.

    Raises:
        InadmissibleInputError: mixed degrees, or no generators and no degree.
        ResourceLimitError: more than `cap` elements.
    """
    generators = tuple(generators)
    degrees = {g.degree for g in generators}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) != 1:
        raise InadmissibleInputError(f"generators must share one degree, got degrees {sorted(degrees)}")
    degree = degrees.pop()
    identity = Permutation.identity(degree)
    elements = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for gen in generators:
            product = current * gen
            if product not in elements:
                elements.add(product)
                if len(elements) > cap:
                    raise ResourceLimitError(f"group closure exceeded the cap of {cap} elements")
                queue.append(product)
    logger.debug(f"closure of {len(generators)} generators on {degree} points: order {len(elements)}")
    return PermGroup(degree, generators, frozenset(elements))


def subgroup_from_elements(elements: Iterable[Permutation], degree: int) -> PermGroup:
    """Wrap an element set already known to be closed; its elements serve as generators."""
    elements = frozenset(elements)
    if not elements:
        elements = frozenset({Permutation.identity(degree)})
    generators = tuple(sorted(e for e in elements if not e.is_identity))
    return PermGroup(degree, generators, elements)


def direct_product(groups: Sequence[PermGroup], cap: int = DEFAULT_CAP) -> PermGroup:
    """G_1 x ... x G_r acting on the disjoint union of the factors' points."""
    total = 1
    for group in groups:
        total *= group.order
    if total > cap:
        raise ResourceLimitError(f"direct product of order {total} exceeds the cap of {cap} elements")
    degrees = [group.degree for group in groups]
    elements = [Permutation(())]
    for group in groups:
        elements = [left.direct_sum(right) for left in elements for right in group.elements]
    generators = []
    for index, group in enumerate(groups):
        for gen in group.generators:
            parts = [Permutation.identity(d) for d in degrees]
            parts[index] = gen
            combined = parts[0]
            for part in parts[1:]:
                combined = combined.direct_sum(part)
            generators.append(combined)
    return PermGroup(sum(degrees), tuple(generators), frozenset(elements))


def diagonal(group: PermGroup, copies: int = 2) -> PermGroup:
    """{(g, ..., g)} inside the direct power of `group`."""

    def spread(g: Permutation) -> Permutation:
        result = g
        for _ in range(copies - 1):
            result = result.direct_sum(g)
        return result

    return PermGroup(
        group.degree * copies,
        tuple(spread(g) for g in group.generators),
        frozenset(spread(g) for g in group.elements),
    )


class CosetSpace:
    """
    Right cosets Hg of H in G, each named by its smallest element under the
    permutation order; G acts on them by right multiplication.
    """

    def __init__(self, group: PermGroup, subgroup: PermGroup):
        if not subgroup.is_subgroup_of(group):
            raise NotASubgroupError("the coset subgroup is not contained in the group")
        self.group = group
        self.subgroup = subgroup
        self._subgroup_elements = tuple(subgroup.elements)
        self.cosets: List[Permutation] = []
        self.index: Dict[Permutation, int] = {}
        self._enumerate()
        expected = group.order // subgroup.order
        if len(self.cosets) != expected:
            raise InadmissibleInputError(
                f"found {len(self.cosets)} cosets, expected |G|/|H| = {expected}"
            )

    def canonical(self, g: Permutation) -> Permutation:
        return min(h * g for h in self._subgroup_elements)

    def _enumerate(self) -> None:
        start = self.canonical(self.group.identity)
        self.index[start] = 0
        self.cosets.append(start)
        queue = deque([start])
        while queue:
            rep = queue.popleft()
            for gen in self.group.generators:
                image = self.canonical(rep * gen)
                if image not in self.index:
                    self.index[image] = len(self.cosets)
                    self.cosets.append(image)
                    queue.append(image)

    def act(self, coset: int, g: Permutation) -> int:
        return self.index[self.canonical(self.cosets[coset] * g)]

    def __len__(self) -> int:
        return len(self.cosets)


def subgroup_orbits_on_cosets(group: PermGroup, subgroup: PermGroup, acting: PermGroup) -> OrbitProfile:
    """
    Orbit lengths of `acting` on the right cosets of `subgroup` in `group`.

    Raises:
        NotASubgroupError: if either subgroup is not contained in the group.
    """
    if not acting.is_subgroup_of(group):
        raise NotASubgroupError("the acting group is not contained in the group")
    space = CosetSpace(group, subgroup)
    seen = [False] * len(space)
    lengths = []
    for start in range(len(space)):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        size = 0
        while queue:
            current = queue.popleft()
            size += 1
            for gen in acting.generators:
                image = space.act(current, gen)
                if not seen[image]:
                    seen[image] = True
                    queue.append(image)
        lengths.append(size)
    profile = OrbitProfile.from_lengths(lengths)
    logger.debug(f"orbits on {len(space)} cosets: {profile}")
    return profile


def covering_condition(group: PermGroup, subgroup: PermGroup, acting: PermGroup, cap: int = DEFAULT_CAP) -> bool:
    """
    Whether (S n P^x)[P^x, P^x] = P^x for every x in G, with P = subgroup and S = acting.
    """
    seen = set()
    for x in group.elements:
        conjugate = subgroup.conjugate(x)
        if conjugate.elements in seen:
            continue
        seen.add(conjugate.elements)
        derived = conjugate.derived_subgroup(cap)
        meet = acting.elements & conjugate.elements
        generated = closure(sorted(meet | set(derived.generators)), cap=cap, degree=group.degree)
        if generated.elements != conjugate.elements:
            logger.debug(f"covering fails for the conjugate by {x}")
            return False
    return True
