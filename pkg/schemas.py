from fractions import Fraction
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from core.rational import RationalField

Relation = Literal["<=", "<", ">=", ">", "=="]
Status = Literal["pass", "fail", "skipped", "informative"]

_COMPARE = {
    "<=": lambda l, r: l <= r,
    "<": lambda l, r: l < r,
    ">=": lambda l, r: l >= r,
    ">": lambda l, r: l > r,
    "==": lambda l, r: l == r,
}

_SYMBOL = {"<=": "≤", "<": "<", ">=": "≥", ">": ">", "==": "="}


def compare(lhs: Fraction, relation: Relation, rhs: Fraction) -> bool:
    return _COMPARE[relation](lhs, rhs)


class CheckRecord(BaseModel):
    """
    One exact comparison made by the verification harness.
    """
    name: str = Field(..., description="Check name, e.g. 'main_bound'.")
    inputs: Dict[str, str] = Field(default_factory=dict, description="Exact inputs as rational strings.")
    lhs: Optional[RationalField] = Field(None, description="Left-hand side of the exact comparison.")
    rhs: Optional[RationalField] = Field(None, description="Right-hand side of the exact comparison.")
    relation: Optional[Relation] = Field(None, description="Relation that must hold for a pass.")
    status: Status = Field(..., description="pass, fail, skipped or informative.")
    detail: str = Field("", description="Human-readable statement of the check.")

    class Config:
        json_schema_extra = {
            "example": {
                "name": "main_bound",
                "inputs": {"n": "29", "overhang": "2"},
                "lhs": "8",
                "rhs": "6264",
                "relation": "<=",
                "status": "pass",
                "detail": "overhang³ = 8 ≤ 216·n = 6264",
            }
        }

    @classmethod
    def compared(cls, name: str, lhs, relation: Relation, rhs, *, inputs=None, detail: str = "", informative: bool = False) -> "CheckRecord":
        """Build a record whose status follows from the comparison itself."""
        holds = compare(Fraction(lhs), relation, Fraction(rhs))
        status: Status = "informative" if informative else ("pass" if holds else "fail")
        return cls(
            name=name,
            inputs={k: str(v) for k, v in (inputs or {}).items()},
            lhs=lhs,
            rhs=rhs,
            relation=relation,
            status=status,
            detail=detail or f"{lhs} {_SYMBOL[relation]} {rhs}",
        )

    @classmethod
    def flag(cls, name: str, ok: bool, detail: str = "", *, inputs=None) -> "CheckRecord":
        return cls(
            name=name,
            inputs={k: str(v) for k, v in (inputs or {}).items()},
            status="pass" if ok else "fail",
            detail=detail,
        )

    @classmethod
    def skipped(cls, name: str, detail: str) -> "CheckRecord":
        return cls(name=name, status="skipped", detail=detail)

    def recheck(self) -> Optional[bool]:
        """Recompute the comparison from the recorded values; None when nothing was compared."""
        if self.lhs is None or self.rhs is None or self.relation is None:
            return None
        return compare(self.lhs, self.relation, self.rhs)

    def line(self) -> str:
        return f"[{self.status.upper():>11}] {self.name}: {self.detail}"


class VerificationReport(BaseModel):
    """
    Records of one verification run over a stack or a trace.
    """
    subject: str = Field(..., description="Stack file name, generator call or trace id.")
    records: List[CheckRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """No record failed; skipped and informative records never fail a report."""
        return all(record.status != "fail" for record in self.records)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def extend(self, other: "VerificationReport") -> None:
        self.records.extend(other.records)

    def get(self, name: str) -> Optional[CheckRecord]:
        return next((r for r in self.records if r.name == name), None)

    def render(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lines = [f"{self.subject}: {verdict}"]
        lines.extend(f"  {record.line()}" for record in self.records)
        return "\n".join(lines)
