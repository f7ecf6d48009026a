"""
Runtime settings and seed-file loading.

Settings come from environment variables (a `.env` file is honoured by the
front end through python-dotenv); command-line flags override them.
"""

import hashlib
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import ValidationError

from .errors import InadmissibleInputError
from .models.certificate import BoundMode, SeedConstant, bound_mode_str_map

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / "data"
DEFAULT_SEEDS_PATH = DATA_DIR / "seeds.json"
DEFAULT_GROUP_CAP = 200000


@dataclass(frozen=True)
class EngineSettings:
    seeds_path: Path = DEFAULT_SEEDS_PATH
    group_cap: int = DEFAULT_GROUP_CAP
    mode: BoundMode = BoundMode.FIDELITY


def load_settings() -> EngineSettings:
    """Read ENGINE_SEEDS_PATH, ENGINE_GROUP_CAP and ENGINE_MODE from the environment."""
    seeds_path = os.getenv("ENGINE_SEEDS_PATH")
    cap = os.getenv("ENGINE_GROUP_CAP")
    mode = os.getenv("ENGINE_MODE", BoundMode.FIDELITY.value).strip().lower()
    if mode not in bound_mode_str_map:
        raise InadmissibleInputError(f"ENGINE_MODE must be one of {sorted(bound_mode_str_map)}, got {mode!r}")
    try:
        group_cap = int(cap) if cap else DEFAULT_GROUP_CAP
    except ValueError:
        raise InadmissibleInputError(f"ENGINE_GROUP_CAP must be an integer, got {cap!r}")
    if group_cap < 1:
        raise InadmissibleInputError(f"ENGINE_GROUP_CAP must be positive, got {group_cap}")
    return EngineSettings(
        seeds_path=Path(seeds_path) if seeds_path else DEFAULT_SEEDS_PATH,
        group_cap=group_cap,
        mode=bound_mode_str_map[mode],
    )


def load_seed_file(path: Optional[Path] = None) -> Tuple[List[SeedConstant], str]:
    """
    Load seed constants and the SHA-256 digest of the file's bytes.

    Raises:
        InadmissibleInputError: if the file is missing or malformed.
    """
    path = Path(path) if path else DEFAULT_SEEDS_PATH
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InadmissibleInputError(f"cannot read seed file {path}: {exc.strerror or exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()
    try:
        document = json.loads(raw.decode("utf-8"))
        records = document["seeds"] if isinstance(document, dict) else document
        seeds = [SeedConstant.model_validate(record) for record in records]
    except (ValueError, KeyError, TypeError, ValidationError) as exc:
        raise InadmissibleInputError(f"malformed seed file {path}: {exc}") from exc
    logger.info(f"loaded {len(seeds)} seed constants from {path}")
    return seeds, digest
