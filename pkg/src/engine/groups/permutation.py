import re
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

from sympy.combinatorics import Permutation as SympyPermutation

from ..errors import InadmissibleInputError

_CYCLE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True, order=True)
class Permutation:
    """
    A permutation of {0, ..., degree - 1} in image notation: images[i] is
    the image of point i.

    Products apply the left factor first, (p * q)(i) = q(p(i)), which is the
    convention sympy uses as well. The dataclass ordering on `images` is the
    total order used for canonical coset representatives.
    """
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InadmissibleInputError(f"{list(self.images)} is not a permutation of 0..{len(self.images) - 1}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        """Parse cycle notation such as "(0 1 2)(3 4)"; "()" is the identity."""
        cycles = []
        for body in _CYCLE.findall(text):
            points = [int(token) for token in body.replace(",", " ").split()]
            if len(points) > 1:
                cycles.append(points)
        if _CYCLE.sub("", text).strip():
            raise InadmissibleInputError(f"cannot parse cycle notation {text!r}")
        if any(point >= degree or point < 0 for cycle in cycles for point in cycle):
            raise InadmissibleInputError(f"cycle notation {text!r} moves points outside 0..{degree - 1}")
        if not cycles:
            return cls.identity(degree)
        return cls(tuple(SympyPermutation(cycles, size=degree).array_form))

    @classmethod
    def parse(cls, value: Union[str, Sequence[int]], degree: int) -> "Permutation":
        """Cycle notation string or one-line image list."""
        if isinstance(value, str):
            return cls.from_cycles(value, degree)
        perm = cls(tuple(int(v) for v in value))
        if perm.degree != degree:
            raise InadmissibleInputError(f"image list {list(value)} has degree {perm.degree}, expected {degree}")
        return perm

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise InadmissibleInputError(f"cannot multiply permutations of degree {self.degree} and {other.degree}")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        result = [0] * self.degree
        for point, image in enumerate(self.images):
            result[image] = point
        return Permutation(tuple(result))

    def conjugate(self, x: "Permutation") -> "Permutation":
        """x^-1 * self * x."""
        return x.inverse() * self * x

    def commutator(self, other: "Permutation") -> "Permutation":
        return self.inverse() * other.inverse() * self * other

    def direct_sum(self, other: "Permutation") -> "Permutation":
        """self on the first points, other shifted onto the following ones."""
        shift = self.degree
        return Permutation(self.images + tuple(shift + image for image in other.images))

    @property
    def is_identity(self) -> bool:
        return all(point == image for point, image in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        result = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self.images[point]
            result.append(tuple(cycle))
        return result

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, cycle)) + ")" for cycle in cycles)


def direct_sum_all(parts: Iterable[Permutation]) -> Permutation:
    parts = list(parts)
    result = parts[0]
    for part in parts[1:]:
        result = result.direct_sum(part)
    return result
