import json
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class Report(BaseModel):
    """
    Self-describing document produced by one front-end invocation.

    Serialized with sorted keys and a fixed indent, so equal inputs and an
    equal seed file give byte-identical output.
    """
    schema_version: int = SCHEMA_VERSION
    engine_version: str
    command: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    results: Any = None
    seed_digest: Optional[str] = None
    ok: bool = True

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.model_validate(json.loads(text))
