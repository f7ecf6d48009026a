import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class RowFamily(Enum):
    """
    The three notations used by the orbit-length table.
    """
    LIST = "list"
    PARTITION_PAIR = "partition_pair"
    MERSENNE_TOWER = "mersenne_tower"


# Mapping for easy lookup from string
row_family_str_map = {f.value: f for f in RowFamily}


class Congruence(Enum):
    """Divisibility condition imposed on a Mersenne prime p."""
    NONE = "none"
    THREE = "3|p-1"
    FIVE = "5|p-1"
    FIFTEEN = "15|p-1"

    @property
    def modulus(self) -> int:
        return {"none": 1, "3|p-1": 3, "5|p-1": 5, "15|p-1": 15}[self.value]

    def holds(self, p: int) -> bool:
        return (p - 1) % self.modulus == 0


congruence_str_map = {c.value: c for c in Congruence}


class RowRecord(BaseModel):
    """
    One transcribed row of the orbit-length table.

    The text fields reproduce the table's columns for auditing; `template`
    and `variants` drive the generator.
    """
    row_id: int
    section: str
    family: RowFamily
    template: str
    degree_expression: str
    orbit_lengths: str
    notes: str = ""
    side_condition: Optional[str] = None
    congruence: Congruence = Congruence.NONE
    variants: List[Dict[str, Any]] = Field(default_factory=list)

    @field_validator("row_id")
    @classmethod
    def _row_in_range(cls, value: int) -> int:
        if not 1 <= value <= 30:
            raise ValueError(f"row_id must lie in 1..30, got {value}")
        return value

    @property
    def uses_closed_form(self) -> bool:
        return self.family != RowFamily.PARTITION_PAIR and self.template != "scaled_pair"


# Short alias used throughout the processors
RowSpec = RowRecord


@dataclass(frozen=True)
class RowInstance:
    """A table row together with a full assignment of its free parameters."""
    row_id: int
    assignment: Dict[str, Any] = field(default_factory=dict)

    def key(self) -> str:
        return json.dumps(self.assignment, sort_keys=True)

    def __str__(self):
        return f"row {self.row_id} {self.key()}"
