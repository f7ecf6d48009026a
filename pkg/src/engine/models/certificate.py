from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from ..calculus.arith import decimal_string, parse_degree


class BoundMode(Enum):
    """
    How row maxima are evaluated.
    """
    FIDELITY = "fidelity"   # closed forms for rows 12, 22, 24-30
    SHARP = "sharp"         # E_sol sums everywhere


bound_mode_str_map = {m.value: m for m in BoundMode}


class Provenance(Enum):
    """Where a quotient bound came from."""
    SEED = "seed"
    PIPELINE = "pipeline"
    THRESHOLD = "threshold"


provenance_str_map = {p.value: p for p in Provenance}


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"


verdict_str_map = {v.value: v for v in Verdict}


class RationalValue(BaseModel):
    """
    Serialized exact rational: the reduced fraction plus a "≈" decimal
    rendering for humans.
    """
    numerator: int
    denominator: int = 1
    decimal: str = ""

    @classmethod
    def from_fraction(cls, value: Fraction) -> "RationalValue":
        value = Fraction(value)
        return cls(numerator=value.numerator, denominator=value.denominator, decimal=decimal_string(value))

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self):
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator} ({self.decimal})"


class SeedConstant(BaseModel):
    """A bound d(X) <= bound for transitive X of the given degree, quoted from the literature."""
    degree: int
    bound: int
    citation: str = ""

    @field_validator("degree")
    @classmethod
    def _admissible_degree(cls, value: int) -> int:
        parse_degree(value)
        return value

    @field_validator("bound")
    @classmethod
    def _positive_bound(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"seed bound must be >= 1, got {value}")
        return value


class QuotientBound(BaseModel):
    """Bound used for d(G^Sigma) in one pipeline step."""
    degree: int
    bound: int
    provenance: Provenance
    source: str = ""


class RowMaximum(BaseModel):
    """
    Largest partial sum a single table row admits at the quotient degree,
    with the instance that attains it.
    """
    row_id: int
    method: str  # "esol" or "closed_form"
    value: RationalValue
    assignment: Dict[str, Any] = Field(default_factory=dict)
    profile: Dict[str, int] = Field(default_factory=dict)
    two_part_sum: Optional[int] = None
    instances: int = 0


class BoundCertificate(BaseModel):
    """
    Outcome of one inductive step: total = floor(max row partial + quotient bound),
    compared against the threshold of the degree.
    """
    degree: int
    quotient_degree: int
    mode: BoundMode
    quotient: QuotientBound
    row_maxima: List[RowMaximum] = Field(default_factory=list)
    witness: Optional[RowMaximum] = None
    partial: RationalValue
    total: int
    threshold: int
    verdict: Verdict
    margin: int
    notes: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def row(self, row_id: int) -> Optional[RowMaximum]:
        return next((r for r in self.row_maxima if r.row_id == row_id), None)

    def summary_line(self) -> str:
        return (
            f"n={self.degree:<12} q={self.quotient.bound:<8} ({self.quotient.provenance.value:<9}) "
            f"row {self.witness.row_id if self.witness else '-':>2}  total={self.total:<10} "
            f"threshold={self.threshold:<10} {self.verdict.value}"
        )
