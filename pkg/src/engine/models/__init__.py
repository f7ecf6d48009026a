# This file makes 'models' a Python package.

from .profile import OrbitProfile, TowerLevel, TowerProfile
from .row import RowFamily, Congruence, RowRecord, RowSpec, RowInstance, row_family_str_map, congruence_str_map
from .certificate import (
    BoundMode, Provenance, Verdict, RationalValue, SeedConstant, QuotientBound, RowMaximum, BoundCertificate,
    bound_mode_str_map, provenance_str_map, verdict_str_map
)
from .report import Report, SCHEMA_VERSION
from .fixture import OrbitLaw, FixtureRecord, ProductSuite, FixtureCatalog, FixtureOutcome, profile_from_json, profile_to_json
