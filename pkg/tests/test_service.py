"""HTTP surface: request/response contracts and error codes."""

from __future__ import annotations

import json
import warnings

import pytest

from conftest import GOLDEN, CORPUS

with warnings.catch_warnings():
    warnings.simplefilter("ignore", DeprecationWarning)
    from fastapi.testclient import TestClient

from cssg.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def payload(text: str, language: str = "python", id: str = "t") -> dict:
    return {"text": text, "language": language, "id": id}


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_compare_identity(client):
    body = {"a": payload("x = 1\n"), "b": payload("x = 1\n"), "metrics": ["cssg", "jaccard"]}
    response = client.post("/api/compare", json=body)
    assert response.status_code == 200
    results = {r["metric"]: r for r in response.json()["results"]}
    assert results["cssg"]["score"] == 1.0
    assert results["cssg"]["solver"] == "exact"
    assert results["cssg"]["ged"] == 0
    assert results["jaccard"]["score"] == 1.0


def test_compare_unsupported_language(client):
    body = {"a": payload("int main(){}", "cpp"), "b": payload("x = 1\n")}
    response = client.post("/api/compare", json=body)
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "unsupported_language"


def test_compare_unknown_metric(client):
    body = {"a": payload("x = 1\n"), "b": payload("x = 1\n"), "metrics": ["codebleu"]}
    response = client.post("/api/compare", json=body)
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "bad_request"


def test_graph_json_schema(client):
    response = client.post("/api/graph", json={"source": payload("x = 1\n"), "format": "json"})
    assert response.status_code == 200
    graph = response.json()["graph"]
    assert {n["category"] for n in graph["nodes"]} >= {"root", "function_name"}
    assert all(e["kind"] in ("data", "control", "call", "root") for e in graph["edges"])


def test_graph_dot_for_recursion(client):
    text = (GOLDEN / "recursive.py").read_text()
    response = client.post("/api/graph", json={"source": payload(text), "format": "dot"})
    assert response.status_code == 200
    assert 'kind="call"' in response.json()["dot"]


def test_graph_bad_format(client):
    response = client.post("/api/graph", json={"source": payload("x = 1\n"), "format": "png"})
    assert response.status_code == 422


def test_eval_roundtrip(client):
    corpus = CORPUS.read_text(encoding="utf-8")
    body = {
        "corpus": corpus,
        "setting": "monolingual",
        "target_lang": "python",
        "seed": 0,
        "metrics": ["jaccard", "tsed"],
    }
    response = client.post("/api/eval", json=body)
    assert response.status_code == 200
    out = response.json()
    assert out["triplet_count"] == 38
    assert out["effect_csv"].startswith("language_pair,jaccard,tsed")
    assert out["manifest"]["counts"]["triplets"] == 38
    rows = [json.loads(l) for l in out["scores_jsonl"].strip().split("\n")]
    assert len(rows) == 2 * out["triplet_count"]


def test_eval_empty_corpus(client):
    response = client.post("/api/eval", json={"corpus": "\n"})
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "empty_corpus"


def test_eval_bad_setting(client):
    response = client.post("/api/eval", json={"corpus": "x", "setting": "bilingual"})
    assert response.status_code == 422
