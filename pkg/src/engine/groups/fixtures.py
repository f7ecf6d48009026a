"""
Fixture catalog for the brute-force group oracle.

Groups are described in `data/group_fixtures.json` by explicit generators
(cycle or image notation), as direct products, diagonals and subdirect
subgroups of named factors, or as Mobius maps on a projective line.
Fixtures name a (group, subgroup, acting) triple and the orbit profile
the acting group must have on the subgroup's cosets.
"""

import json
import logging
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..errors import EngineError, InadmissibleInputError
from ..models.fixture import (
    FixtureCatalog, FixtureOutcome, FixtureRecord, OrbitLaw, ProductSuite, profile_from_json, profile_to_json
)
from .orbit_laws import product_orbit_law, subdirect_orbit_law
from .perm_group import DEFAULT_CAP, PermGroup, closure, diagonal, direct_product, subgroup_orbits_on_cosets
from .permutation import Permutation, direct_sum_all

logger = logging.getLogger(__name__)

DEFAULT_CATALOG_PATH = Path(__file__).resolve().parent.parent / "data" / "group_fixtures.json"

SUITES = ("a5", "a6", "a5sq", "a8", "l2", "a5xa5", "a6xa6")

GroupTriple = Tuple[PermGroup, PermGroup, PermGroup]


def load_fixture_catalog(path: Optional[Path] = None) -> FixtureCatalog:
    path = Path(path) if path else DEFAULT_CATALOG_PATH
    with open(path, "r", encoding="utf-8") as handle:
        return FixtureCatalog.model_validate(json.load(handle))


def projective_line_map(q: int, spec: Dict[str, Any]) -> Permutation:
    """
    A Mobius map of the projective line over GF(q), points 0..q-1 plus
    infinity as point q: "translate" z -> z + 1, "scale" z -> base^exponent z,
    "invert" z -> -1/z.
    """
    infinity = q
    kind = spec.get("type")
    images = []
    for z in range(q + 1):
        if kind == "translate":
            images.append(infinity if z == infinity else (z + 1) % q)
        elif kind == "scale":
            factor = pow(spec["base"], spec["exponent"], q)
            images.append(infinity if z == infinity else (factor * z) % q)
        elif kind == "invert":
            if z == infinity:
                images.append(0)
            elif z == 0:
                images.append(infinity)
            else:
                images.append((-pow(z, -1, q)) % q)
        else:
            raise InadmissibleInputError(f"unknown projective-line map {kind!r}")
    return Permutation(tuple(images))


class FixtureBuilder:
    """
    Materializes catalog groups on demand and caches them by name.
    """

    def __init__(self, catalog: Optional[FixtureCatalog] = None, cap: int = DEFAULT_CAP):
        """
        Initialize the fixture builder.

        Args:
            catalog: Parsed fixture catalog (the bundled one if omitted)
            cap: Element cap for every closure
        """
        self.catalog = catalog or load_fixture_catalog()
        self.cap = cap
        self._groups: Dict[str, PermGroup] = {}
        self._derived_groups: Dict[str, Dict[str, Any]] = {}
        self.records: List[FixtureRecord] = list(self.catalog.fixtures)
        for suite, product in self.catalog.product_suites.items():
            self.records.extend(self._product_records(suite, product))
        self._fixtures = {record.name: record for record in self.records}

    @property
    def fixture_names(self) -> List[str]:
        return [record.name for record in self.records]

    def _product_records(self, suite: str, product: ProductSuite) -> List[FixtureRecord]:
        """One fixture per unordered pair of base fixtures, acting on the product of their coset spaces."""
        base = [record for record in self.catalog.fixtures if record.suite == product.base_suite]
        prefix = f"{product.base_suite}_"
        records = []
        for left, right in combinations_with_replacement(base, 2):
            subgroup = f"{left.subgroup} x {right.subgroup}"
            self._derived_groups.setdefault(subgroup, {"kind": "product", "factors": [left.subgroup, right.subgroup]})
            law = OrbitLaw(factors=[left.expected, right.expected])
            records.append(FixtureRecord(
                name=f"{suite}_{left.name[len(prefix):]}-{right.name[len(prefix):]}",
                suite=suite,
                group=product.group,
                subgroup=subgroup,
                acting=product.acting,
                expected=profile_to_json(product_orbit_law(law.profiles())),
                law=law,
                description=f"{product.acting} on the cosets of {subgroup}",
            ))
        logger.debug(f"product suite {suite}: {len(records)} fixtures from suite {product.base_suite}")
        return records

    def record(self, name: str) -> FixtureRecord:
        if name not in self._fixtures:
            raise InadmissibleInputError(f"unknown fixture {name!r}")
        return self._fixtures[name]

    def group(self, name: str) -> PermGroup:
        if name in self._groups:
            return self._groups[name]
        recipe = self.catalog.groups.get(name) or self._derived_groups.get(name)
        if recipe is None:
            raise InadmissibleInputError(f"unknown catalog group {name!r}")
        group = self._construct(recipe)
        expected = recipe.get("order")
        if expected is not None and group.order != expected:
            raise EngineError(f"catalog group {name} has order {group.order}, expected {expected}")
        logger.debug(f"built {name}: degree {group.degree}, order {group.order}")
        self._groups[name] = group
        return group

    def _construct(self, spec: Dict[str, Any]) -> PermGroup:
        kind = spec.get("kind")
        if kind == "generators":
            degree = spec["degree"]
            gens = [Permutation.parse(g, degree) for g in spec["generators"]]
            return closure(gens, cap=self.cap, degree=degree)
        if kind == "product":
            return direct_product([self.group(factor) for factor in spec["factors"]], cap=self.cap)
        if kind == "diagonal":
            return diagonal(self.group(spec["factor"]), spec.get("copies", 2))
        if kind == "subdirect":
            degrees = spec["degrees"]
            gens = [
                direct_sum_all(Permutation.parse(part, d) for part, d in zip(parts, degrees))
                for parts in spec["generators"]
            ]
            return closure(gens, cap=self.cap, degree=sum(degrees))
        if kind == "projective_line":
            q = spec["q"]
            return closure([projective_line_map(q, m) for m in spec["maps"]], cap=self.cap, degree=q + 1)
        raise InadmissibleInputError(f"unknown group construction {kind!r}")

    def build_fixture(self, name: str) -> GroupTriple:
        """The (G, H, S) triple of a named fixture."""
        record = self.record(name)
        return self.group(record.group), self.group(record.subgroup), self.group(record.acting)

    def evaluate(self, name: str) -> FixtureOutcome:
        """Brute-force a fixture and compare it with its expected profile (and law, if any)."""
        record = self.record(name)
        group, subgroup, acting = self.build_fixture(name)
        observed = subgroup_orbits_on_cosets(group, subgroup, acting)
        expected = profile_from_json(record.expected)
        outcome = FixtureOutcome(
            name=record.name,
            suite=record.suite,
            expected=profile_to_json(expected),
            observed=profile_to_json(observed),
            matched=observed == expected,
            printed=record.printed,
        )
        if record.law is not None:
            law = subdirect_orbit_law(product_orbit_law(record.law.profiles()), record.law.index)
            outcome.law = profile_to_json(law)
            outcome.law_matched = law == observed
        if record.printed is not None and profile_from_json(record.printed) != observed:
            outcome.notes.append(
                f"the printed profile {profile_from_json(record.printed)} disagrees with the computed {observed}"
            )
            logger.warning(f"fixture {name}: printed {record.printed} differs from brute force {observed}")
        return outcome

    def run_suite(self, suite: str) -> List[FixtureOutcome]:
        if suite not in SUITES:
            raise InadmissibleInputError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
        outcomes = [self.evaluate(record.name) for record in self.records if record.suite == suite]
        logger.info(f"suite {suite}: {sum(o.passed for o in outcomes)}/{len(outcomes)} fixtures match")
        return outcomes


def build_fixture(name: str, cap: int = DEFAULT_CAP) -> GroupTriple:
    return FixtureBuilder(cap=cap).build_fixture(name)
