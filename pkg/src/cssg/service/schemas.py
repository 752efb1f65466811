"""Pydantic request/response models for the scoring service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class SourcePayload(BaseModel):
    text: str
    language: str  # python | java | cpp
    id: str = ""


class CompareRequest(BaseModel):
    a: SourcePayload
    b: SourcePayload
    metrics: list[str] = Field(default_factory=lambda: ["bleu", "jaccard", "tsed", "cssg"])
    exact_budget: int | None = None
    tsed_name_sensitive: bool = False


class MetricResult(BaseModel):
    metric: str
    score: float
    ged: int | None = None
    d_max: int | None = None
    solver: str | None = None
    degenerate: bool = False


class CompareResponse(BaseModel):
    results: list[MetricResult]


class GraphRequest(BaseModel):
    source: SourcePayload
    format: str = "json"  # json | dot


class GraphResponse(BaseModel):
    format: str
    graph: dict | None = None
    dot: str | None = None


class EvalRequest(BaseModel):
    corpus: str  # JSONL text, one submission per line
    setting: str = "monolingual"
    target_lang: str | None = None
    source_lang: str | None = None
    seed: int = 0
    per_problem: int = 1
    metrics: list[str] = Field(default_factory=lambda: ["bleu", "jaccard", "tsed", "cssg"])
    exact_budget: int | None = None
    tsed_name_sensitive: bool = False
    jobs: int = 1
    correlation_level: str = "scores"


class EvalResponse(BaseModel):
    triplet_count: int
    effect_csv: str
    correlation_csv: str
    scores_jsonl: str
    manifest: dict


class HealthResponse(BaseModel):
    status: str
    version: str
