"""FastAPI service exposing the similarity pipeline.

Three endpoints: /api/compare scores one pair, /api/graph returns a
unit's serialized semantic graph, /api/eval runs the batch protocol on
an uploaded JSONL corpus and returns the report payloads. The CLI is a
thin client over these; run the service standalone with
``uvicorn cssg.service.app:app``.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import (
    BudgetExceeded,
    CssgError,
    EmptyCorpus,
    EmptyInput,
    ParseFailure,
    UnsupportedLanguage,
)
from ..frontend.astnodes import Language, SourceUnit
from ..harness import EvalConfig, run_eval
from ..metrics import Metric, score_pair
from ..semgraph import graph_for_unit, serialize, to_json_obj
from .schemas import (
    CompareRequest,
    CompareResponse,
    EvalRequest,
    EvalResponse,
    GraphRequest,
    GraphResponse,
    HealthResponse,
    MetricResult,
)

app = FastAPI(title="cssg", version=__version__)

_ERROR_CODES = {
    ParseFailure: "parse_failure",
    UnsupportedLanguage: "unsupported_language",
    EmptyCorpus: "empty_corpus",
    EmptyInput: "empty_input",
    BudgetExceeded: "budget_exceeded",
}


def _http_error(exc: CssgError, status: int = 422) -> HTTPException:
    code = _ERROR_CODES.get(type(exc), "cssg_error")
    return HTTPException(status_code=status, detail={"code": code, "message": str(exc)})


def _language(name: str) -> Language:
    try:
        return Language(name.lower())
    except ValueError:
        raise HTTPException(
            status_code=422,
            detail={"code": "bad_request", "message": f"unknown language {name!r}"},
        )


def _metrics(names: list[str]) -> list[Metric]:
    try:
        return [Metric(n.lower()) for n in names]
    except ValueError as exc:
        raise HTTPException(status_code=422, detail={"code": "bad_request", "message": str(exc)})


def _unit(payload) -> SourceUnit:
    return SourceUnit(_language(payload.language), payload.text, payload.id)


@app.get("/api/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/api/compare", response_model=CompareResponse)
def compare(request: CompareRequest) -> CompareResponse:
    metrics = _metrics(request.metrics)
    try:
        results = score_pair(
            _unit(request.a),
            _unit(request.b),
            metrics,
            request.exact_budget,
            request.tsed_name_sensitive,
        )
    except CssgError as exc:
        raise _http_error(exc)
    ordered = [results[m] for m in metrics]
    return CompareResponse(
        results=[
            MetricResult(
                metric=r.metric.value,
                score=r.score,
                ged=r.ged,
                d_max=r.d_max,
                solver=r.solver,
                degenerate=r.degenerate,
            )
            for r in ordered
        ]
    )


@app.post("/api/graph", response_model=GraphResponse)
def graph(request: GraphRequest) -> GraphResponse:
    if request.format not in ("json", "dot"):
        raise HTTPException(
            status_code=422,
            detail={"code": "bad_request", "message": f"unknown format {request.format!r}"},
        )
    try:
        semantic = graph_for_unit(_unit(request.source))
    except CssgError as exc:
        raise _http_error(exc)
    if request.format == "json":
        return GraphResponse(format="json", graph=to_json_obj(semantic))
    return GraphResponse(format="dot", dot=serialize(semantic, "dot").decode("utf-8"))


@app.post("/api/eval", response_model=EvalResponse)
def evaluate(request: EvalRequest) -> EvalResponse:
    if request.setting not in ("monolingual", "crosslingual"):
        raise HTTPException(
            status_code=422,
            detail={"code": "bad_request", "message": f"unknown setting {request.setting!r}"},
        )
    config = EvalConfig(
        setting=request.setting,
        target_lang=_language(request.target_lang) if request.target_lang else None,
        source_lang=_language(request.source_lang) if request.source_lang else None,
        seed=request.seed,
        per_problem=request.per_problem,
        metrics=_metrics(request.metrics),
        exact_budget=request.exact_budget,
        tsed_name_sensitive=request.tsed_name_sensitive,
        jobs=request.jobs,
        correlation_level=request.correlation_level,
    )
    try:
        output = run_eval(request.corpus, config)
    except CssgError as exc:
        raise _http_error(exc)
    return EvalResponse(
        triplet_count=output.triplet_count,
        effect_csv=output.effect_csv,
        correlation_csv=output.correlation_csv,
        scores_jsonl=output.scores_jsonl,
        manifest=output.manifest,
    )


__all__ = ["app"]
