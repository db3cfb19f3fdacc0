"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class TokenizeRequest(BaseModel):
    domain: str = Field(description="mol | protein | dna | rna | number")
    text: str
    wrap: str | None = Field(default=None, description="Optional entity tag to wrap with")


class TokensResponse(BaseModel):
    tokens: list[str]


class DetokenizeRequest(BaseModel):
    tokens: list[str]


class TextResponse(BaseModel):
    text: str


class SmilesRequest(BaseModel):
    smiles: str


class SmilesListRequest(BaseModel):
    smiles: list[str]
    raw: bool = False


class ValidityReportResponse(BaseModel):
    schema_version: int
    n_total: int
    n_valid: int
    n_unique_valid: int
    validity: float
    uniqueness: float


class CanonicalResponse(BaseModel):
    canonical: str


class CheckResponse(BaseModel):
    valid: bool
    failures: list[dict]


class DescriptorsResponse(BaseModel):
    hbd: int
    hba: int
    rot_bonds: int
    fsp3: float
    heavy_atoms: int
    components: int


class SequenceRequest(BaseModel):
    sequence: str


class TranslateRequest(BaseModel):
    sequence: str
    kind: str = "dna"
    frame: int = 0


class CrRNARequest(BaseModel):
    target: str
    guide: str


class CrRNAResponse(BaseModel):
    valid: bool
    failures: list[str]
    match_position: int | None
    strand: str | None


class CompositionPair(BaseModel):
    symbol: str
    count: int


class EncodeCompositionRequest(BaseModel):
    composition: list[CompositionPair]
    space_group: int


class DecodeTokensRequest(BaseModel):
    tokens: list[str]


class CompositionResponse(BaseModel):
    composition: list[tuple[str, int]]
    space_group: int


class StructureModel(BaseModel):
    composition: list[tuple[str, int]]
    space_group: int
    lattice: list[float]
    frac_coords: list[tuple[float, float, float]]


class PoscarRequest(BaseModel):
    text: str
    space_group: int = 1


class SmactRequest(BaseModel):
    composition: list[CompositionPair]


class SmactResponse(BaseModel):
    valid: bool
    witness: dict[str, int] | None = None
    nearest_miss: dict | None = None


class InstructionRequest(BaseModel):
    instruction: str
    response: str
    task: str = ""


class RenderedResponse(BaseModel):
    text: str
    tokens: list[str]
    loss_mask: list[int]


class InterleaveSpan(BaseModel):
    start: int
    end: int
    domain: str
    payload: str


class InterleaveRequest(BaseModel):
    text: str
    spans: list[InterleaveSpan]


class PreferenceRequest(BaseModel):
    prompt: str
    accepted: str
    rejected: str


class AarRequest(BaseModel):
    reference: str
    generated: str


class ValueResponse(BaseModel):
    value: float


class SpearmanRequest(BaseModel):
    xs: list[float]
    ys: list[float]


class TopkRequest(BaseModel):
    references: list[str]
    candidates: list[list[str]]
    k: int = 1


class NoveltyRequest(BaseModel):
    generated: list[str]
    reference: list[str]


class DiversityRequest(BaseModel):
    sequences: list[str]
    threshold: float = 0.5
    denominator: str = "alignment"


class StabilityRequest(BaseModel):
    ehulls: list[float]
    threshold: float = 0.1


class SuccessWithinRequest(BaseModel):
    values: list[float]
    targets: list[float]
    rel_tol: float = 0.10


class PropertyCorrectRequest(BaseModel):
    values: list[float]
    targets: list[float]
    delta: float


class ErrorResponse(BaseModel):
    code: str
    message: str
