"""
Shared pytest fixtures for all tests
"""

import json

import pytest

from src.engine.config import load_seed_file
from src.engine.groups.fixtures import FixtureBuilder
from src.engine.models.certificate import BoundMode
from src.engine.processors.bound_engine import BoundEngine
from src.engine.processors.profile_engine import ProfileEngine


@pytest.fixture(scope="session")
def profile_engine():
    """One profile engine over the bundled table, shared by the whole run."""
    return ProfileEngine()


@pytest.fixture(scope="session")
def bound_engine(profile_engine):
    return BoundEngine(profile_engine)


@pytest.fixture(scope="session")
def seeds():
    """The bundled seed constants."""
    loaded, _ = load_seed_file()
    return loaded


@pytest.fixture(scope="session")
def fixture_builder():
    """Group fixtures are cached per builder, so one builder serves every group test."""
    return FixtureBuilder()


@pytest.fixture(scope="session")
def family_15_certificates(bound_engine, seeds):
    """Fidelity certificates for 2^15*15, 2^16*15 and 2^17*15, keyed by degree."""
    certificates = bound_engine.chain(2 ** 17 * 15, seeds, BoundMode.FIDELITY)
    return {certificate.degree: certificate for certificate in certificates}


@pytest.fixture
def seed_file(tmp_path):
    """Write a seed file and return its path; call with the records to store."""
    def _write(records, wrap=True):
        path = tmp_path / "seeds.json"
        document = {"seeds": records} if wrap else records
        path.write_text(json.dumps(document), encoding="utf-8")
        return path
    return _write
