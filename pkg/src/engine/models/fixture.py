from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from .profile import OrbitProfile


def profile_from_json(data: Dict[str, int]) -> OrbitProfile:
    return OrbitProfile.from_counts({int(length): int(m) for length, m in data.items()})


def profile_to_json(profile: OrbitProfile) -> Dict[str, int]:
    return {str(length): m for length, m in profile.items}


class OrbitLaw(BaseModel):
    """Law-side prediction for a fixture: product of factor profiles, then scaled by index."""
    factors: List[Dict[str, int]]
    index: int = 1

    def profiles(self) -> List[OrbitProfile]:
        return [profile_from_json(factor) for factor in self.factors]


class FixtureRecord(BaseModel):
    """
    One brute-force check: the orbits of `acting` on the cosets of
    `subgroup` in `group`, all three named in the catalog's group section.
    """
    name: str
    suite: str
    group: str
    subgroup: str
    acting: str
    expected: Dict[str, int]
    printed: Optional[Dict[str, int]] = None
    law: Optional[OrbitLaw] = None
    description: str = ""


class ProductSuite(BaseModel):
    """
    Fixtures over G x G built from every unordered pair of a base suite's
    fixtures; the expected profile is the product law of the two factors.
    """
    base_suite: str
    group: str
    acting: str


class FixtureCatalog(BaseModel):
    catalog_version: int = 1
    groups: Dict[str, Dict[str, Any]] = Field(default_factory=dict)
    fixtures: List[FixtureRecord] = Field(default_factory=list)
    product_suites: Dict[str, ProductSuite] = Field(default_factory=dict)


class FixtureOutcome(BaseModel):
    name: str
    suite: str
    expected: Dict[str, int]
    observed: Dict[str, int]
    matched: bool
    law: Optional[Dict[str, int]] = None
    law_matched: Optional[bool] = None
    printed: Optional[Dict[str, int]] = None
    notes: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.matched and self.law_matched is not False
