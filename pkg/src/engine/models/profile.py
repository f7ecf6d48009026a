from dataclasses import dataclass, field
from collections import Counter
from typing import Dict, Iterable, List, Mapping, Tuple

from ..calculus.arith import p_part
from ..calculus.partitions import Partition


@dataclass(frozen=True)
class OrbitProfile:
    """
    Multiset of orbit lengths, stored canonically as sorted
    (length, multiplicity) pairs so that equal multisets compare and hash equal.
    """
    items: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "OrbitProfile":
        for length, multiplicity in counts.items():
            if length < 1 or multiplicity < 0:
                raise ValueError(f"invalid orbit entry {length}:{multiplicity}")
        return cls(tuple(sorted((int(l), int(m)) for l, m in counts.items() if m > 0)))

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "OrbitProfile":
        return cls.from_counts(Counter(lengths))

    @property
    def degree(self) -> int:
        return sum(length * multiplicity for length, multiplicity in self.items)

    @property
    def orbit_count(self) -> int:
        return sum(multiplicity for _, multiplicity in self.items)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.items)

    def scaled(self, factor: int) -> "OrbitProfile":
        """Every length multiplied by `factor`, multiplicities unchanged."""
        return OrbitProfile(tuple((length * factor, m) for length, m in self.items))

    def merged(self, other: "OrbitProfile") -> "OrbitProfile":
        counts = Counter(self.as_dict())
        counts.update(other.as_dict())
        return OrbitProfile.from_counts(counts)

    def two_part_sum(self) -> int:
        """Sum over orbits of the 2-part of the orbit length."""
        return sum(p_part(length, 2) * m for length, m in self.items)

    def __str__(self):
        return "{" + ", ".join(f"{length}:{m}" for length, m in self.items) + "}"


@dataclass(frozen=True)
class TowerLevel:
    """
    One level i of a factored tower profile: `blocks` independent blocks,
    each choosing one partition X of the level total; a block with choice X
    contributes one orbit of length unit * x for every part x of X.
    """
    level: int
    blocks: int
    unit: int
    choices: Tuple[Partition, ...]

    @property
    def block_total(self) -> int:
        return sum(self.choices[0]) if self.choices else 0

    @property
    def degree(self) -> int:
        return self.blocks * self.unit * self.block_total

    def block_profile(self, choice: Partition) -> OrbitProfile:
        return OrbitProfile.from_lengths(self.unit * part for part in choice)


@dataclass(frozen=True)
class TowerProfile:
    """
    Factored profile of a tower row: the labelled combinations of per-block
    choices are never expanded, since E_sol sums add over blocks.
    """
    levels: Tuple[TowerLevel, ...] = field(default_factory=tuple)

    @property
    def degree(self) -> int:
        return sum(level.degree for level in self.levels)

    def uniform(self, choices: List[Partition]) -> OrbitProfile:
        """Expanded profile in which every block of level i takes choices[i]."""
        counts: Counter = Counter()
        for level, choice in zip(self.levels, choices):
            for length, m in level.block_profile(choice).items:
                counts[length] += m * level.blocks
        return OrbitProfile.from_counts(counts)
