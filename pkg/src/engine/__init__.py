"""
The `engine` package.

This package contains the verification engine for the generation bound of
transitive permutation groups: an exact arithmetic kernel, a data-driven
generator of soluble-subgroup orbit profiles, the inductive bound pipeline
over the exceptional degrees, and a brute-force permutation-group oracle.
"""

__version__ = "0.3.0"

# Expose key models and components at the package level
from .calculus.arith import e_sol, ws, factorize
from .calculus.threshold import threshold
from .models.profile import OrbitProfile
from .models.certificate import BoundCertificate, BoundMode, SeedConstant
from .processors.profile_engine import ProfileEngine
from .processors.bound_engine import BoundEngine
from .engine import VerificationEngine

__all__ = [
    "e_sol",
    "ws",
    "factorize",
    "threshold",
    "OrbitProfile",
    "BoundCertificate",
    "BoundMode",
    "SeedConstant",
    "ProfileEngine",
    "BoundEngine",
    "VerificationEngine"
]

# This file makes 'engine' a Python package.
