"""Command-line client for the scoring service.

All commands go through the HTTP API: against an in-process app by
default, or a remote server when --server is given. Human output goes
to stdout; eval reports are written as files under --out.

Exit codes: 0 ok, 1 usage, 2 parse failure, 3 I/O error, 4 empty
triplet yield.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

from .frontend import infer_language
from .harness import DEFAULT_METRICS, manifest_json
from .metrics import Metric

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_IO = 3
EXIT_EMPTY = 4

_PARSE_ERROR_CODES = {"parse_failure", "unsupported_language"}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit 2; we use 1
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class _Client:
    """Uniform POST/GET over a remote server or the in-process app."""

    def __init__(self, server: str | None):
        if server:
            self._client = httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DeprecationWarning)
                from fastapi.testclient import TestClient

                from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> httpx.Response:
        return self._client.post(path, json=payload)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _error_exit(response: httpx.Response) -> int:
    try:
        detail = response.json().get("detail", {})
    except ValueError:
        detail = {}
    code = detail.get("code", "")
    message = detail.get("message", response.text)
    exit_code = EXIT_PARSE if code in _PARSE_ERROR_CODES else EXIT_USAGE
    return _fail(f"{code or response.status_code}: {message}", exit_code)


def _read_source(path: str, lang_flag: str | None) -> dict | int:
    language = lang_flag or (infer_language(path) and infer_language(path).value)
    if language is None:
        return _fail(f"cannot infer language for {path!r}; pass --lang", EXIT_USAGE)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot read {path}: {exc}", EXIT_IO)
    return {"text": text, "language": language, "id": os.path.basename(path)}


def _check_budget(budget: int | None) -> int | None:
    if budget is not None and budget < 0:
        return _fail("--exact-budget must be >= 0", EXIT_USAGE)
    return None


def _metric_list(raw: list[str] | None) -> list[str] | int:
    if not raw:
        return [m.value for m in DEFAULT_METRICS]
    names: list[str] = []
    for chunk in raw:
        names.extend(part.strip().lower() for part in chunk.split(",") if part.strip())
    valid = {m.value for m in Metric}
    for name in names:
        if name not in valid:
            return _fail(f"unknown metric {name!r} (choose from {sorted(valid)})", EXIT_USAGE)
    return names


def cmd_compare(args: argparse.Namespace) -> int:
    bad_budget = _check_budget(args.exact_budget)
    if bad_budget is not None:
        return bad_budget
    metrics = _metric_list(args.metric)
    if isinstance(metrics, int):
        return metrics
    a = _read_source(args.file_a, args.lang)
    if isinstance(a, int):
        return a
    b = _read_source(args.file_b, args.lang)
    if isinstance(b, int):
        return b
    payload = {
        "a": a,
        "b": b,
        "metrics": metrics,
        "exact_budget": args.exact_budget,
        "tsed_name_sensitive": args.tsed_name_sensitive,
    }
    response = _Client(args.server).post("/api/compare", payload)
    if response.status_code != 200:
        return _error_exit(response)
    for result in response.json()["results"]:
        line = f"{result['metric']} {result['score']:.6f}"
        if result["metric"] == "cssg":
            line += f" ged={result['ged']} dmax={result['d_max']} solver={result['solver']}"
        print(line)
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    source = _read_source(args.file, args.lang)
    if isinstance(source, int):
        return source
    response = _Client(args.server).post("/api/graph", {"source": source, "format": args.format})
    if response.status_code != 200:
        return _error_exit(response)
    body = response.json()
    if args.format == "json":
        print(json.dumps(body["graph"], indent=2, sort_keys=True))
    else:
        sys.stdout.write(body["dot"])
    return EXIT_OK


def _write_reports(out_dir: str, body: dict) -> int:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "effect_sizes.csv").write_bytes(body["effect_csv"].encode("utf-8"))
        (out / "correlation.csv").write_bytes(body["correlation_csv"].encode("utf-8"))
        (out / "scores.jsonl").write_bytes(body["scores_jsonl"].encode("utf-8"))
        (out / "manifest.json").write_bytes(manifest_json(body["manifest"]).encode("utf-8"))
    except OSError as exc:
        return _fail(f"cannot write reports: {exc}", EXIT_IO)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    bad_budget = _check_budget(args.exact_budget)
    if bad_budget is not None:
        return bad_budget
    metrics = _metric_list(args.metric)
    if isinstance(metrics, int):
        return metrics
    try:
        corpus = Path(args.corpus).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot read corpus: {exc}", EXIT_IO)
    payload = {
        "corpus": corpus,
        "setting": args.setting,
        "target_lang": args.target_lang,
        "source_lang": args.source_lang,
        "seed": args.seed,
        "per_problem": args.per_problem,
        "metrics": metrics,
        "exact_budget": args.exact_budget,
        "tsed_name_sensitive": args.tsed_name_sensitive,
        "jobs": args.jobs,
        "correlation_level": args.correlation_level,
    }
    response = _Client(args.server).post("/api/eval", payload)
    if response.status_code != 200:
        return _error_exit(response)
    body = response.json()
    if body["triplet_count"] == 0:
        return _fail("no triplets could be built from the corpus", EXIT_EMPTY)
    status = _write_reports(args.out, body)
    if status != EXIT_OK:
        return status
    print(f"{body['triplet_count']} triplets scored; reports in {args.out}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    """Recompute the CSV reports from a saved scores.jsonl."""
    from .harness import ScoreRow, correlation_csv, effect_csv, effect_sizes, pearson_matrix

    metrics = _metric_list(args.metric)
    if isinstance(metrics, int):
        return metrics
    try:
        lines = Path(args.scores).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        return _fail(f"cannot read scores: {exc}", EXIT_IO)
    rows = []
    for line in lines:
        if not line.strip():
            continue
        obj = json.loads(line)
        rows.append(
            ScoreRow(
                triplet_id=obj["triplet_id"],
                problem_id=obj["problem_id"],
                language_pair=obj["language_pair"],
                pair_role=obj["pair_role"],
                scores={Metric(k): v for k, v in obj["scores"].items()},
            )
        )
    if not rows:
        return _fail("scores file is empty", EXIT_EMPTY)
    chosen = [Metric(m) for m in metrics]
    reports = effect_sizes(rows, chosen)
    matrix = pearson_matrix(rows, chosen, args.correlation_level, reports)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "effect_sizes.csv").write_bytes(effect_csv(reports, chosen).encode("utf-8"))
        (out / "correlation.csv").write_bytes(correlation_csv(matrix).encode("utf-8"))
    except OSError as exc:
        return _fail(f"cannot write reports: {exc}", EXIT_IO)
    print(f"reports recomputed from {len(rows)} rows; written to {args.out}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--server", default=None, help="remote service URL (default: in-process)")
    parser.add_argument("--exact-budget", type=int, default=None,
                        help="combined node count above which the approx solver is used "
                             "(default 80; env CSSG_EXACT_BUDGET overrides)")
    parser.add_argument("--tsed-name-sensitive", action="store_true",
                        help="keep identifier/constant spellings in TSED")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cssg", description="semantic-graph code similarity")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compare = sub.add_parser("compare", help="score one file pair")
    p_compare.add_argument("file_a")
    p_compare.add_argument("file_b")
    p_compare.add_argument("--lang", default=None, help="override language for both files")
    p_compare.add_argument("--metric", action="append", default=None,
                           help="metric name or comma list (repeatable); default: all")
    _add_common(p_compare)
    p_compare.set_defaults(func=cmd_compare)

    p_graph = sub.add_parser("graph", help="print a file's semantic graph")
    p_graph.add_argument("file")
    p_graph.add_argument("--lang", default=None)
    p_graph.add_argument("--format", choices=("json", "dot"), default="json")
    p_graph.add_argument("--server", default=None)
    p_graph.set_defaults(func=cmd_graph)

    p_eval = sub.add_parser("eval", help="run the triplet evaluation protocol")
    p_eval.add_argument("--corpus", required=True, help="JSONL submissions file")
    p_eval.add_argument("--setting", choices=("monolingual", "crosslingual"), default="monolingual")
    p_eval.add_argument("--target-lang", default=None)
    p_eval.add_argument("--source-lang", default=None)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--per-problem", type=int, default=1)
    p_eval.add_argument("--metric", action="append", default=None)
    p_eval.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="parallel scoring workers (default: available parallelism)")
    p_eval.add_argument("--correlation-level", choices=("scores", "effects"), default="scores")
    p_eval.add_argument("--out", required=True, help="directory for report files")
    _add_common(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_report = sub.add_parser("report", help="recompute reports from saved scores")
    p_report.add_argument("--scores", required=True, help="scores.jsonl from a previous eval")
    p_report.add_argument("--metric", action="append", default=None)
    p_report.add_argument("--correlation-level", choices=("scores", "effects"), default="scores")
    p_report.add_argument("--out", required=True)
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
