"""
Profile Engine for the verification engine

This module turns the transcribed orbit-length table into concrete orbit
profiles: for a degree m = 2^x 3^y 5^z (y, z <= 1) it finds the rows whose
degree expression can be solved, fills in every free parameter and
enumerates the admissible orbit-length multisets.
"""

import json
import logging
from itertools import product
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from sympy import isprime, perfect_power, primerange

from ..calculus.arith import binomial, parse_degree
from ..calculus.partitions import unordered_partitions
from ..errors import EngineError, InadmissibleInputError
from ..models.profile import OrbitProfile, TowerLevel, TowerProfile
from ..models.row import Congruence, RowInstance, RowRecord

logger = logging.getLogger(__name__)

DEFAULT_TABLE_PATH = Path(__file__).resolve().parent.parent / "data" / "orbit_table.json"

# Degrees stay below 2^35 * 15, so only exponents up to 31 can occur.
MERSENNE_EXPONENT_LIMIT = 31

SEVEN_THREE = "seven_three"
SINGER = "singer"

Profile = Union[OrbitProfile, TowerProfile]
Skeleton = Dict[str, Any]


def mersenne_primes(limit: int = MERSENNE_EXPONENT_LIMIT) -> List[Tuple[int, int]]:
    """(u, 2^u - 1) for every prime u <= limit with 2^u - 1 prime."""
    return [(int(u), 2 ** int(u) - 1) for u in primerange(2, limit + 1) if isprime(2 ** int(u) - 1)]


def is_odd_prime_power(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    if isprime(q):
        return True
    power = perfect_power(q)
    return bool(power) and isprime(power[0])


def load_orbit_table(path: Optional[Path] = None) -> List[RowRecord]:
    """Load and validate the transcribed table."""
    path = Path(path) if path else DEFAULT_TABLE_PATH
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    rows = [RowRecord.model_validate(record) for record in raw["rows"]]
    return sorted(rows, key=lambda row: row.row_id)


class ProfileEngine:
    """
    Generates orbit profiles from the transcribed table.

    Implements the three row notations:
    - PARTITION_PAIR rows: one or two partition families scaled by a
    - LIST rows: explicit multiplicity x length sums driven by a, b, e2, p, q
    - MERSENNE_TOWER rows: factored per-level block choices (never expanded)
    """

    def __init__(self, table_path: Optional[Path] = None):
        """
        Initialize the profile engine.

        Args:
            table_path: Alternative location of the orbit table (defaults to the bundled copy)
        """
        self.rows = load_orbit_table(table_path)
        self._by_id = {row.row_id: row for row in self.rows}
        self._mersenne = mersenne_primes()
        logger.info(f"ProfileEngine initialized with {len(self.rows)} table rows")

    def row(self, row_id: int) -> RowRecord:
        if row_id not in self._by_id:
            raise InadmissibleInputError(f"unknown table row {row_id}; valid rows are 1..{len(self.rows)}")
        return self._by_id[row_id]

    # ------------------------------------------------------------------
    # Applicability
    # ------------------------------------------------------------------

    def rows_for_degree(self, m: int) -> List[Tuple[RowRecord, List[Skeleton]]]:
        """Rows whose degree expression has a solution a >= 1 at degree m, with their skeletons."""
        parse_degree(m)
        applicable = []
        for record in self.rows:
            skeletons = self.skeletons(record, m)
            if skeletons:
                applicable.append((record, skeletons))
        logger.debug(f"degree {m}: rows {[record.row_id for record, _ in applicable]}")
        return applicable

    def skeletons(self, record: RowRecord, m: int) -> List[Skeleton]:
        """Every assignment of the non-partition parameters solving the row's degree equation."""
        x, y, z = parse_degree(m)
        builder = getattr(self, f"_skeletons_{record.template}")
        return builder(record, m, x)

    def _skeletons_partition_pair(self, record: RowRecord, m: int, x: int) -> List[Skeleton]:
        result = []
        for variant in record.variants:
            coeff = variant["degree_coeff"]
            if m % coeff == 0:
                skeleton = {"a": m // coeff}
                if variant.get("b") is not None:
                    skeleton["b"] = variant["b"]
                result.append(skeleton)
        return result

    def _skeletons_scaled_pair(self, record: RowRecord, m: int, x: int) -> List[Skeleton]:
        return [
            {"a": m // variant["degree_coeff"], "b": variant["b"]}
            for variant in record.variants
            if m % variant["degree_coeff"] == 0
        ]

    def _skeletons_a8_tower(self, record: RowRecord, m: int, x: int) -> List[Skeleton]:
        coeff = record.variants[0]["degree_coeff"]
        kernel = record.variants[0].get("kernel")
        result = []
        e2 = 0
        while coeff * 8 ** e2 <= m:
            base = coeff * 8 ** e2
            if m % base == 0:
                skeleton = {"a": m // base, "e2": e2}
                if kernel is not None:
                    skeleton["kernel"] = kernel
                result.append(skeleton)
            e2 += 1
        return result

    def _skeletons_a16_tower(self, record: RowRecord, m: int, x: int) -> List[Skeleton]:
        result = []
        for variant in record.variants:
            b = variant["b"]
            e2 = 0
            while 15 * 16 ** (e2 + 1) // 2 ** b <= m:
                base = 15 * 16 ** (e2 + 1) // 2 ** b
                if m % base == 0:
                    result.append({"a": m // base, "b": b, "e2": e2})
                e2 += 1
        return result

    def _skeletons_mersenne_tower(self, record: RowRecord, m: int, x: int) -> List[Skeleton]:
        result = []
        for variant in record.variants:
            big_x, b = variant["X"], variant["b"]
            for u, p in self._mersenne:
                if not record.congruence.holds(p):
                    continue
                e2 = 1
                while 2 ** b * big_x * 15 * (p + 1) ** e2 <= m:
                    base = 2 ** b * big_x * 15 * (p + 1) ** e2
                    if m % base == 0:
                        result.append({"X": big_x, "a": m // base, "b": b, "e2": e2, "p": p})
                    e2 += 1
        return result

    def _skeletons_l2_triple(self, record: RowRecord, m: int, x: int) -> List[Skeleton]:
        result = []
        for u, p in self._mersenne:
            if not record.congruence.holds(p):
                continue
            e2 = 0
            while 15 * (p + 1) ** (e2 + 2) <= m:
                base = 15 * (p + 1) ** (e2 + 2)
                if m % base == 0:
                    result.append({"a": m // base, "e2": e2, "p": p})
                e2 += 1
        return result

    def _skeletons_l2_line(self, record: RowRecord, m: int, x: int) -> List[Skeleton]:
        result = []
        for y0, z0 in ((1, 0), (0, 1), (1, 1)):
            d = 3 ** y0 * 5 ** z0
            if m % d:
                continue
            for u, p in self._mersenne:
                if (p - 1) % d:
                    continue
                e2 = 1
                while d * (p + 1) ** e2 <= m:
                    base = d * (p + 1) ** e2
                    if m % base == 0:
                        result.append({"a": m // base, "e2": e2, "p": p, "y0": y0, "z0": z0})
                    e2 += 1
        return result

    def _skeletons_l2_prime_power(self, record: RowRecord, m: int, x: int) -> List[Skeleton]:
        if m % 15:
            return []
        result = []
        for variant in record.variants:
            y_prime, z_prime = variant["y_prime"], variant["z_prime"]
            r = 3 ** (1 - y_prime) * 5 ** (1 - z_prime)
            for x_prime in range(1, x + 1):
                q = 2 ** x_prime * 3 ** y_prime * 5 ** z_prime - 1
                if not is_odd_prime_power(q) or ((q - 1) // 2) % r:
                    continue
                base = 2 ** x_prime * 15
                if m % base == 0:
                    result.append({
                        "a": m // base, "q": q, "r": r,
                        "x_prime": x_prime, "y_prime": y_prime, "z_prime": z_prime,
                    })
        return result

    # ------------------------------------------------------------------
    # Enumeration
    # ------------------------------------------------------------------

    def enumerate_profiles(self, record: RowRecord, m: int) -> Iterator[Tuple[RowInstance, Profile]]:
        """
        Yield every profile the row admits at degree m exactly once
        (up to multiset equality), paired with the first instance producing it.
        """
        seen = set()
        for skeleton in self.skeletons(record, m):
            for assignment, profile in self._expand(record, skeleton):
                if profile.degree != m:
                    raise EngineError(
                        f"row {record.row_id} produced degree {profile.degree} instead of {m} for {assignment}"
                    )
                if profile in seen:
                    continue
                seen.add(profile)
                yield RowInstance(record.row_id, assignment), profile
        logger.debug(f"row {record.row_id} at {m}: {len(seen)} distinct profiles")

    def _expand(self, record: RowRecord, skeleton: Skeleton) -> Iterator[Tuple[Skeleton, Profile]]:
        template = record.template
        if template == "partition_pair":
            yield from self._expand_partition_pair(record, skeleton)
        elif template == "mersenne_tower":
            yield dict(skeleton), self.tower_profile(skeleton)
        else:
            counts = self.list_counts(record, skeleton)
            yield dict(skeleton), OrbitProfile.from_counts(counts)

    def _expand_partition_pair(self, record: RowRecord, skeleton: Skeleton) -> Iterator[Tuple[Skeleton, Profile]]:
        variant = next(v for v in record.variants if v.get("b") == skeleton.get("b"))
        families = variant["families"]
        names = ["X", "Y"][: len(families)]
        choices = [unordered_partitions(total) for _, total in families]
        a = skeleton["a"]
        for combination in product(*choices):
            lengths = []
            for (coeff, _), parts in zip(families, combination):
                lengths.extend(coeff * a * part for part in parts)
            assignment = dict(skeleton)
            for name, parts in zip(names, combination):
                assignment[name] = list(parts)
            yield assignment, OrbitProfile.from_lengths(lengths)

    def tower_profile(self, skeleton: Skeleton) -> TowerProfile:
        """Factored profile of a tower row for the given skeleton."""
        e2, p, a, b = skeleton["e2"], skeleton["p"], skeleton["a"], skeleton["b"]
        choices = tuple(unordered_partitions(skeleton["X"]))
        levels = tuple(
            TowerLevel(level=i, blocks=binomial(e2, i), unit=2 ** b * 15 * p ** i * a, choices=choices)
            for i in range(e2 + 1)
        )
        return TowerProfile(levels)

    def list_counts(self, record: RowRecord, skeleton: Skeleton, kernel: Optional[str] = None) -> Dict[int, int]:
        """
        length -> multiplicity for a LIST row.

        `kernel` picks the soluble subgroup of an A8 row: "seven_three" is
        7:3 in every coordinate (the tabulated lengths), "singer" is C15 in
        every coordinate. Defaults to the skeleton's choice.
        """
        counts: Dict[int, int] = {}

        def add(length: int, multiplicity: int) -> None:
            counts[length] = counts.get(length, 0) + multiplicity

        a = skeleton["a"]
        template = record.template
        if template == "scaled_pair":
            variant = next(v for v in record.variants if v["b"] == skeleton["b"])
            for length in variant["lengths"]:
                add(length * a, 1)
        elif template == "a8_tower":
            e2 = skeleton["e2"]
            kernel = kernel or skeleton.get("kernel", SEVEN_THREE)
            if kernel == SINGER:
                # C15 splits each A7 coordinate 3 + 5 and is regular on the last one.
                for i in range(e2 + 1):
                    add(15 * 5 ** i * 3 ** (e2 - i), a * binomial(e2, i))
            elif kernel == SEVEN_THREE:
                for s, l in record.variants[0]["pairs"]:
                    for i in range(e2 + 1):
                        add(7 ** i * l, a * s * binomial(e2, i))
            else:
                raise InadmissibleInputError(f"unknown A8 kernel {kernel!r}; expected {SEVEN_THREE} or {SINGER}")
        elif template == "a16_tower":
            e2, b = skeleton["e2"], skeleton["b"]
            for i in range(e2 + 1):
                add(15 ** (i + 1), a * (16 // 2 ** b) * binomial(e2, i))
        elif template == "l2_triple":
            e2, q = skeleton["e2"], skeleton["p"]
            for i in range(e2 + 1):
                c = binomial(e2, i)
                add(15 * q ** i, a * c)
                add(15 * q ** (i + 1), 2 * a * c)
                add(15 * q ** (i + 2), a * c)
        elif template == "l2_line":
            e2, q = skeleton["e2"], skeleton["p"]
            d = 3 ** skeleton["y0"] * 5 ** skeleton["z0"]
            for i in range(e2 + 1):
                add(d * q ** i, a * binomial(e2, i))
        elif template == "l2_prime_power":
            q, r = skeleton["q"], skeleton["r"]
            add(a * q * r, 1)
            add(a * r, 1)
        else:
            raise EngineError(f"row {record.row_id} has unknown template {template!r}")
        return counts

    # ------------------------------------------------------------------
    # Mersenne parameter search
    # ------------------------------------------------------------------

    def mersenne_candidates(self, m: int, congruence: Congruence = Congruence.NONE) -> List[Tuple[int, int, int]]:
        """
        Mersenne primes p = 2^u - 1 with 2^u < 2^k = m_2 satisfying the
        congruence, each with its largest admissible e2.
        """
        k, _, _ = parse_degree(m)
        return [
            (u, p, max(1, k // u - 1))
            for u, p in self._mersenne
            if 2 ** u < 2 ** k and congruence.holds(p)
        ]
