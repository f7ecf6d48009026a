# This file makes 'processors' a Python package.

from .profile_engine import ProfileEngine, load_orbit_table, mersenne_primes
from .bound_engine import (
    BoundEngine, combine, closed_form, esol_sum, family_position, family_degrees, EXCEPTIONAL_FAMILIES
)
