# This file makes 'groups' a Python package.

from .permutation import Permutation
from .perm_group import (
    PermGroup, CosetSpace, closure, subgroup_from_elements, direct_product, diagonal,
    subgroup_orbits_on_cosets, covering_condition
)
from .orbit_laws import product_orbit_law, power_orbit_law, subdirect_orbit_law
from .fixtures import FixtureBuilder, SUITES, build_fixture, load_fixture_catalog, projective_line_map
