# Pydantic schemas for the JSON reports
# every command emits one Report; command payloads go in `result`
# field elements appear in their serialized form (see utils.serialize)

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


# --- Run configuration ---

class RunConfig(BaseModel):
    """Effective settings for one run, recorded in every report"""
    seed: int
    budget: int = Field(description="BFS element budget for trace sets")
    fixtures: List[str] = Field(default_factory=list, description="Fixture paths as given")
    out: Optional[str] = None
    options: Dict[str, Any] = Field(default_factory=dict, description="Command-specific flags")


# --- Suite items ---

class SuiteItem(BaseModel):
    """One checked identity: key, verdict and the inputs it ran on"""
    key: str
    passed: bool
    detail: Dict[str, Any] = Field(default_factory=dict)


# --- Forms ---

class FormInvariantsReport(BaseModel):
    base: Optional[int]
    rank: int
    det: Any
    disc_class: Any
    signatures: Dict[str, List[int]]
    hasse: Dict[str, int]


class EquivalenceReport(BaseModel):
    equivalent: bool
    lhs: FormInvariantsReport
    rhs: FormInvariantsReport


class AdmissibilityReport(BaseModel):
    """Quaternion algebra ramification target for an SO(Q) Fuchsian lift"""
    indefinite_place: str
    finite_set: List[str]
    target: List[str]
    parity_even: bool


class JnabReport(BaseModel):
    n: int
    a: Any
    b: Any
    entries: List[Any]
    invariants: FormInvariantsReport


# --- Cocycles ---

class CocycleSolveReport(BaseModel):
    name: str
    field: Dict[str, Any]
    table: Dict[str, List[List[Any]]]
    s: List[List[Any]]
    attempts: int
    relation_checked: bool
    transported_form: Optional[List[List[Any]]] = None


# --- Bending ---

class InvariantFormsReport(BaseModel):
    dimension: int
    symmetric: int
    alternating: int
    kind: str
    cross_invariant: Optional[bool] = None


class TraceFieldReport(BaseModel):
    label: str
    equals_base: bool
    word_length: int
    stable_from: Optional[int] = None
    history: List[str] = Field(default_factory=list)


class BendReport(BaseModel):
    n: int
    separating_index: int
    multipliers: List[Any]
    bending_matrix: List[List[Any]]
    relator_holds: bool
    gamma_fixed: bool
    verdict: Optional[str] = None
    invariant_forms: Optional[InvariantFormsReport] = None
    agrees: Optional[bool] = None
    trace_field: Optional[TraceFieldReport] = None
    bent_fixture: Dict[str, Any] = Field(default_factory=dict)


# --- Separation ---

class SeparationRowReport(BaseModel):
    prime: str
    l: int
    ord_B: int
    trace_set_size: int
    collapsed: bool
    exhaustive: bool
    seed: Optional[int]
    trace_set: List[int]
    pushforward: List[int]
    matches_pushforward: bool


class PhiImageReport(BaseModel):
    n: int
    q: int
    image: List[int]
    is_surjective: bool


class SeparationReport(BaseModel):
    n: int
    rows: List[SeparationRowReport]
    phi_images: Dict[str, PhiImageReport]
    collapse_holds: bool
    separation_witnessed: bool


# --- Envelope ---

class Report(BaseModel):
    """Top-level document written by every command"""
    schema_version: int
    artifact_version: str
    command: str
    config: RunConfig
    fixture_digest: Optional[str] = Field(description="sha256 of the fixture bytes, null without fixtures")
    passed: bool
    items: List[SuiteItem] = Field(default_factory=list)
    result: Dict[str, Any] = Field(default_factory=dict)
