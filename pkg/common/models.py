"""Shared enumerations and pydantic schemas for JSON inputs and reports.

The library works with plain dataclasses and numpy arrays; these models are
the validated boundary used by the CLI, the HTTP gateway and the fixture
scripts. Map keys follow one convention everywhere: tuples of element ids
are joined with commas (``"0,1,2"``).
"""

from __future__ import annotations

import enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Coeff(str, enum.Enum):
    """Coefficient group of a cochain."""

    INTEGER = "integer"
    REAL = "real"
    CIRCLE = "circle"


class Command(str, enum.Enum):
    COHOMOLOGY = "cohomology"
    GERBE_CLASS = "gerbe-class"
    TRIVIALIZE = "trivialize"
    GLUE = "glue"
    COHERENCE_CHECK = "coherence-check"
    PI2_DEMO = "pi2-demo"
    PONTRYAGIN = "pontryagin"


class RunStatus(str, enum.Enum):
    OK = "ok"
    VALIDATION_FAILURE = "validation_failure"
    NUMERIC_DEFECT = "numeric_defect"


def join_key(items: Tuple[Any, ...]) -> str:
    return ",".join(str(item) for item in items)


def split_key(key: str) -> Tuple[str, ...]:
    return tuple(part.strip() for part in key.split(",")) if key else ()


def split_int_key(key: str) -> Tuple[int, ...]:
    return tuple(int(part) for part in split_key(key))


class ComplexSchema(BaseModel):
    vertices: List[int] = Field(default_factory=list)
    maximal_faces: List[List[int]]

    @field_validator("maximal_faces")
    @classmethod
    def _non_empty(cls, value: List[List[int]]) -> List[List[int]]:
        if not value or any(not face for face in value):
            raise ValueError("maximal_faces must be non-empty lists")
        return value


class CochainSchema(BaseModel):
    degree: int = Field(ge=0)
    coeff: Coeff
    values: Dict[str, float]
    complex: Optional[ComplexSchema] = None


class GerbeSchema(BaseModel):
    """Finite bundle gerbe: ``proj`` maps X to M, ``c`` is keyed by fiber triples."""

    proj: Dict[str, str]
    c: Dict[str, float] = Field(default_factory=dict)


class MorphismSchema(BaseModel):
    f: Dict[str, str]
    lam: Dict[str, float] = Field(default_factory=dict)


class TwoDescentSchema(BaseModel):
    """2-descent datum over a finite cover ``{U_i}`` of M."""

    cover: List[List[str]]
    gerbes: List[GerbeSchema]
    phi: Dict[str, MorphismSchema]
    psi: Dict[str, Dict[str, float]]


class TwoGerbeSchema(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    proj: Dict[str, str]
    y: Dict[str, List[str]]
    c: Dict[str, float] = Field(default_factory=dict)
    m: Dict[str, str]
    m_hat: Dict[str, float] = Field(default_factory=dict)
    a_hat: Dict[str, float] = Field(default_factory=dict)


class BicatSchema(BaseModel):
    """Finite bicategory: 1-cells name their (source, target) objects."""

    objects: List[str]
    cells: Dict[str, List[str]]
    compose: Dict[str, str]
    vc: Dict[str, float] = Field(default_factory=dict)
    hc: Dict[str, float] = Field(default_factory=dict)
    assoc: Dict[str, float] = Field(default_factory=dict)
    identities: Dict[str, str] = Field(default_factory=dict)
    left: Dict[str, float] = Field(default_factory=dict)
    right: Dict[str, float] = Field(default_factory=dict)
    synthesized_units: bool = False


class CheckEntry(BaseModel):
    passed: bool = True
    max_defect: float = 0.0
    witness: Dict[str, Any] = Field(default_factory=dict)
    skipped: bool = False


class CheckReport(BaseModel):
    """Per-invariant outcome of a report-style validation; never raised."""

    tol: float
    entries: Dict[str, CheckEntry] = Field(default_factory=dict)

    def record(self, name: str, defect: float, witness: Optional[Dict[str, Any]] = None) -> None:
        """Keep the largest defect seen for ``name`` and the witness that produced it."""
        entry = self.entries.setdefault(name, CheckEntry())
        defect = float(defect)
        if defect > entry.max_defect or (not entry.witness and witness and defect > self.tol):
            entry.max_defect = defect
            entry.witness = dict(witness or {})
        entry.passed = entry.max_defect <= self.tol

    def skip(self, name: str, reason: str) -> None:
        self.entries[name] = CheckEntry(skipped=True, witness={"reason": reason})

    def fail(self, name: str, witness: Dict[str, Any]) -> None:
        self.entries[name] = CheckEntry(passed=False, max_defect=float("inf"), witness=witness)

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries.values())

    def defects(self) -> Dict[str, float]:
        return {name: entry.max_defect for name, entry in self.entries.items() if not entry.skipped}


class Report(BaseModel):
    """Uniform JSON report printed by every command."""

    command: Command
    status: RunStatus
    version: str
    seed: int
    result: Dict[str, Any] = Field(default_factory=dict)
    defects: Dict[str, float] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None
