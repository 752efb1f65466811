"""Corpus ingestion, triplet sampling, batch scoring, and statistics.

The harness consumes a JSONL corpus of submissions, derives (pos1,
pos2, neg) triplets per problem, scores the positive and negative pair
of each triplet under every requested metric, and reports Cohen's d
effect sizes plus inter-metric Pearson correlations. Everything is
seeded and order-independent so reruns are byte-identical.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CssgError, DegenerateVariance, EmptyCorpus
from .frontend.astnodes import Language, SourceUnit
from .metrics import Metric, resolve_exact_budget, score_pair

VERDICT_CORRECT = "correct"
VERDICT_INCORRECT = "incorrect"

DEFAULT_METRICS = [Metric.BLEU, Metric.JACCARD, Metric.TSED, Metric.CSSG]


@dataclass(frozen=True)
class Submission:
    problem_id: str
    language: Language
    verdict: str
    source: str
    submission_id: str


@dataclass(frozen=True)
class Triplet:
    pos1: Submission
    pos2: Submission
    neg: Submission
    setting: str  # monolingual | crosslingual
    target_lang: Language
    source_lang: Language

    @property
    def triplet_id(self) -> str:
        return "/".join(
            [self.pos1.problem_id, self.pos1.submission_id, self.pos2.submission_id, self.neg.submission_id]
        )

    @property
    def language_pair(self) -> str:
        if self.setting == "monolingual":
            return self.target_lang.value
        return f"({self.target_lang.value}, {self.source_lang.value})"


@dataclass
class IngestResult:
    submissions: list[Submission]
    skipped_lines: int
    sha256: str


@dataclass
class ScoreRow:
    triplet_id: str
    problem_id: str
    language_pair: str
    pair_role: str  # pos | neg
    scores: dict[Metric, float | None] = field(default_factory=dict)


@dataclass
class EffectSizeReport:
    metric: Metric
    language_pair: str
    cohens_d: float | None
    n_pos: int
    n_neg: int
    mean_pos: float | None
    mean_neg: float | None
    pooled_sd: float | None
    undefined: bool = False


@dataclass
class CorrelationMatrix:
    metrics: list[Metric]
    pearson: list[list[float | None]]


# --- ingestion --------------------------------------------------------------

_REQUIRED_FIELDS = ("problem_id", "language", "verdict", "source", "submission_id")


def ingest_text(text: str) -> IngestResult:
    submissions: list[Submission] = []
    skipped = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not all(isinstance(obj.get(k), str) and obj[k] for k in _REQUIRED_FIELDS):
                raise ValueError("missing fields")
            if obj["verdict"] not in (VERDICT_CORRECT, VERDICT_INCORRECT):
                raise ValueError("bad verdict")
            submissions.append(
                Submission(
                    problem_id=obj["problem_id"],
                    language=Language(obj["language"].lower()),
                    verdict=obj["verdict"],
                    source=obj["source"],
                    submission_id=obj["submission_id"],
                )
            )
        except (ValueError, KeyError, TypeError):
            skipped += 1
    if not submissions:
        raise EmptyCorpus("no valid submissions in corpus")
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return IngestResult(submissions, skipped, digest)


def ingest(path: str) -> IngestResult:
    with io.open(path, "r", encoding="utf-8") as handle:
        return ingest_text(handle.read())


# --- triplet construction ----------------------------------------------------


def build_triplets(
    submissions: list[Submission],
    setting: str,
    target_lang: Language,
    source_lang: Language,
    seed: int,
    per_problem: int = 1,
) -> tuple[list[Triplet], dict[str, int]]:
    """Sample triplets without replacement, per problem.

    Monolingual: pos1, pos2 correct and neg incorrect, all in the target
    language. Crosslingual: pos1 correct in the target language, pos2
    correct and neg incorrect in the source language. Problems without
    enough material are skipped and counted.
    """
    rng = random.Random(seed)
    by_problem: dict[str, list[Submission]] = {}
    for sub in submissions:
        by_problem.setdefault(sub.problem_id, []).append(sub)

    triplets: list[Triplet] = []
    skips = {"insufficient_correct": 0, "insufficient_incorrect": 0}
    for problem_id in sorted(by_problem):
        subs = sorted(by_problem[problem_id], key=lambda s: s.submission_id)
        if setting == "monolingual":
            correct = [s for s in subs if s.language == target_lang and s.verdict == VERDICT_CORRECT]
            incorrect = [s for s in subs if s.language == target_lang and s.verdict == VERDICT_INCORRECT]
            rng.shuffle(correct)
            rng.shuffle(incorrect)
            made = 0
            while made < per_problem and len(correct) >= 2 and len(incorrect) >= 1:
                pos1, pos2 = correct.pop(), correct.pop()
                neg = incorrect.pop()
                triplets.append(Triplet(pos1, pos2, neg, setting, target_lang, target_lang))
                made += 1
            if made < per_problem:
                key = "insufficient_correct" if len(correct) < 2 else "insufficient_incorrect"
                skips[key] += 1
        else:
            target_correct = [s for s in subs if s.language == target_lang and s.verdict == VERDICT_CORRECT]
            source_correct = [s for s in subs if s.language == source_lang and s.verdict == VERDICT_CORRECT]
            source_incorrect = [s for s in subs if s.language == source_lang and s.verdict == VERDICT_INCORRECT]
            rng.shuffle(target_correct)
            rng.shuffle(source_correct)
            rng.shuffle(source_incorrect)
            made = 0
            while made < per_problem and target_correct and source_correct and source_incorrect:
                pos1 = target_correct.pop()
                pos2 = source_correct.pop()
                neg = source_incorrect.pop()
                triplets.append(Triplet(pos1, pos2, neg, setting, target_lang, source_lang))
                made += 1
            if made < per_problem:
                key = "insufficient_correct" if not (target_correct and source_correct) else "insufficient_incorrect"
                skips[key] += 1
    return triplets, skips


# --- scoring ------------------------------------------------------------------


def _unit(sub: Submission) -> SourceUnit:
    return SourceUnit(sub.language, sub.source, sub.submission_id)


def _score_task(task: tuple) -> tuple[str, str, dict[str, float | None], dict[str, str]]:
    """Score one pair. Module-level so process pools can pickle it."""
    key, role, ref, cand, metric_names, budget, tsed_name_sensitive = task
    metrics = [Metric(m) for m in metric_names]
    ref_unit = SourceUnit(Language(ref["language"]), ref["source"], ref["id"])
    cand_unit = SourceUnit(Language(cand["language"]), cand["source"], cand["id"])
    scores: dict[str, float | None] = {}
    errors: dict[str, str] = {}
    for metric in metrics:
        try:
            result = score_pair(ref_unit, cand_unit, [metric], budget, tsed_name_sensitive)
            scores[metric.value] = result[metric].score
        except (CssgError, RecursionError) as exc:
            scores[metric.value] = None
            errors[metric.value] = f"{type(exc).__name__}: {exc}"
    return key, role, scores, errors


def _pair_payload(sub: Submission) -> dict:
    return {"language": sub.language.value, "source": sub.source, "id": sub.submission_id}


def score_all(
    triplets: list[Triplet],
    metrics: list[Metric],
    budget: int | None = None,
    jobs: int = 1,
    tsed_name_sensitive: bool = False,
) -> tuple[list[ScoreRow], dict[Metric, int]]:
    """Two rows per triplet (positive and negative pair) per metric;
    pos1 is the reference for asymmetric metrics. Failures are recorded
    as missing values and counted per metric."""
    budget = resolve_exact_budget(budget)
    metric_names = [m.value for m in metrics]
    tasks = []
    row_meta: dict[tuple[str, str], Triplet] = {}
    for triplet in triplets:
        for role, cand in (("pos", triplet.pos2), ("neg", triplet.neg)):
            key = triplet.triplet_id
            row_meta[(key, role)] = triplet
            tasks.append(
                (key, role, _pair_payload(triplet.pos1), _pair_payload(cand),
                 metric_names, budget, tsed_name_sensitive)
            )

    results: dict[tuple[str, str], tuple[dict, dict]] = {}
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            for key, role, scores, errors in pool.map(_score_task, tasks):
                results[(key, role)] = (scores, errors)
    else:
        for task in tasks:
            key, role, scores, errors = _score_task(task)
            results[(key, role)] = (scores, errors)

    rows: list[ScoreRow] = []
    failures: dict[Metric, int] = {m: 0 for m in metrics}
    for (key, role), triplet in sorted(row_meta.items()):
        scores, _errors = results[(key, role)]
        row = ScoreRow(
            triplet_id=key,
            problem_id=triplet.pos1.problem_id,
            language_pair=triplet.language_pair,
            pair_role=role,
            scores={Metric(m): v for m, v in scores.items()},
        )
        for metric in metrics:
            if row.scores.get(metric) is None:
                failures[metric] += 1
        rows.append(row)
    return rows, failures


# --- statistics ---------------------------------------------------------------


def cohens_d(pos_scores: list[float], neg_scores: list[float]) -> EffectSizeReport:
    """Standardized mean difference with pooled (n-1)-weighted variance."""
    n1, n2 = len(pos_scores), len(neg_scores)
    if n1 < 2 or n2 < 2:
        raise ValueError("cohens_d needs at least two scores per group")
    mean_pos = sum(pos_scores) / n1
    mean_neg = sum(neg_scores) / n2
    var_pos = sum((x - mean_pos) ** 2 for x in pos_scores) / (n1 - 1)
    var_neg = sum((x - mean_neg) ** 2 for x in neg_scores) / (n2 - 1)
    pooled = math.sqrt(((n1 - 1) * var_pos + (n2 - 1) * var_neg) / (n1 + n2 - 2))
    if pooled == 0.0:
        raise DegenerateVariance("pooled standard deviation is zero")
    return EffectSizeReport(
        metric=Metric.CSSG,  # caller overwrites; placeholder keeps the type simple
        language_pair="",
        cohens_d=(mean_pos - mean_neg) / pooled,
        n_pos=n1,
        n_neg=n2,
        mean_pos=mean_pos,
        mean_neg=mean_neg,
        pooled_sd=pooled,
    )


def pearson(xs: list[float], ys: list[float]) -> float | None:
    """Plain Pearson r; None when undefined (degenerate variance or n < 2)."""
    n = len(xs)
    if n < 2 or n != len(ys):
        return None
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    var_x = sum((x - mean_x) ** 2 for x in xs)
    var_y = sum((y - mean_y) ** 2 for y in ys)
    if var_x == 0.0 or var_y == 0.0:
        return None
    return cov / math.sqrt(var_x * var_y)


def effect_sizes(rows: list[ScoreRow], metrics: list[Metric]) -> list[EffectSizeReport]:
    """One report per (language pair, metric), pairwise-complete."""
    pairs = sorted({row.language_pair for row in rows})
    reports: list[EffectSizeReport] = []
    for language_pair in pairs:
        for metric in metrics:
            pos = [
                row.scores[metric]
                for row in rows
                if row.language_pair == language_pair and row.pair_role == "pos"
                and row.scores.get(metric) is not None
            ]
            neg = [
                row.scores[metric]
                for row in rows
                if row.language_pair == language_pair and row.pair_role == "neg"
                and row.scores.get(metric) is not None
            ]
            try:
                report = cohens_d(pos, neg)
                report.metric = metric
                report.language_pair = language_pair
            except (ValueError, DegenerateVariance):
                report = EffectSizeReport(
                    metric=metric, language_pair=language_pair, cohens_d=None,
                    n_pos=len(pos), n_neg=len(neg), mean_pos=None, mean_neg=None,
                    pooled_sd=None, undefined=True,
                )
            reports.append(report)
    return reports


def pearson_matrix(
    rows: list[ScoreRow],
    metrics: list[Metric],
    level: str = "scores",
    effect_reports: list[EffectSizeReport] | None = None,
) -> CorrelationMatrix:
    """Pearson r between metrics over aligned per-pair scores (default)
    or, with level="effects", over per-language-pair Cohen's d values."""
    vectors: dict[Metric, dict] = {m: {} for m in metrics}
    if level == "effects":
        for report in effect_reports or []:
            if report.cohens_d is not None:
                vectors[report.metric][report.language_pair] = report.cohens_d
    else:
        for row in rows:
            for metric in metrics:
                value = row.scores.get(metric)
                if value is not None:
                    vectors[metric][(row.triplet_id, row.pair_role)] = value

    matrix: list[list[float | None]] = []
    for m1 in metrics:
        line: list[float | None] = []
        for m2 in metrics:
            if m1 == m2:
                line.append(1.0 if vectors[m1] else None)
                continue
            keys = sorted(set(vectors[m1]) & set(vectors[m2]))
            xs = [vectors[m1][k] for k in keys]
            ys = [vectors[m2][k] for k in keys]
            line.append(pearson(xs, ys))
        matrix.append(line)
    return CorrelationMatrix(metrics=list(metrics), pearson=matrix)


# --- reports -------------------------------------------------------------------


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def effect_csv(reports: list[EffectSizeReport], metrics: list[Metric]) -> str:
    """Effect-size table: one row per language pair, one column per
    metric, plus an Average row over defined cells."""
    by_pair: dict[str, dict[Metric, float | None]] = {}
    for report in reports:
        by_pair.setdefault(report.language_pair, {})[report.metric] = report.cohens_d
    lines = ["language_pair," + ",".join(m.value for m in metrics)]
    for pair in sorted(by_pair):
        cells = [_fmt(by_pair[pair].get(m)) for m in metrics]
        lines.append(f"{pair}," + ",".join(cells))
    averages = []
    for metric in metrics:
        values = [d[metric] for d in by_pair.values() if d.get(metric) is not None]
        averages.append(_fmt(sum(values) / len(values)) if values else "")
    lines.append("Average," + ",".join(averages))
    return "\n".join(lines) + "\n"


def correlation_csv(matrix: CorrelationMatrix) -> str:
    lines = ["metric," + ",".join(m.value for m in matrix.metrics)]
    for metric, row in zip(matrix.metrics, matrix.pearson):
        lines.append(f"{metric.value}," + ",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def scores_jsonl(rows: list[ScoreRow]) -> str:
    out = []
    for row in rows:
        out.append(
            json.dumps(
                {
                    "triplet_id": row.triplet_id,
                    "problem_id": row.problem_id,
                    "language_pair": row.language_pair,
                    "pair_role": row.pair_role,
                    "scores": {m.value: row.scores.get(m) for m in sorted(row.scores, key=lambda x: x.value)},
                },
                sort_keys=True,
            )
        )
    return "\n".join(out) + "\n"

# --- end-to-end orchestration ----------------------------------------------


@dataclass
class EvalConfig:
    setting: str = "monolingual"
    target_lang: Language | None = None
    source_lang: Language | None = None
    seed: int = 0
    per_problem: int = 1
    metrics: list[Metric] = field(default_factory=lambda: list(DEFAULT_METRICS))
    exact_budget: int | None = None
    tsed_name_sensitive: bool = False
    jobs: int = 1
    correlation_level: str = "scores"


@dataclass
class EvalOutput:
    rows: list[ScoreRow]
    effect_reports: list[EffectSizeReport]
    correlation: CorrelationMatrix
    effect_csv: str
    correlation_csv: str
    scores_jsonl: str
    manifest: dict
    triplet_count: int


def _language_pairs(config: EvalConfig, submissions: list[Submission]) -> list[tuple[Language, Language]]:
    present = sorted({s.language for s in submissions}, key=lambda l: l.value)
    if config.setting == "monolingual":
        if config.target_lang is not None:
            return [(config.target_lang, config.target_lang)]
        return [(lang, lang) for lang in present]
    if config.target_lang is not None and config.source_lang is not None:
        return [(config.target_lang, config.source_lang)]
    return [(t, s) for t in present for s in present if t != s]


def run_eval(corpus_text: str, config: EvalConfig) -> EvalOutput:
    """Ingest, sample, score, and summarize; deterministic in
    (corpus bytes, config)."""
    ingested = ingest_text(corpus_text)
    triplets: list[Triplet] = []
    skip_totals = {"insufficient_correct": 0, "insufficient_incorrect": 0}
    for target, source in _language_pairs(config, ingested.submissions):
        group, skips = build_triplets(
            ingested.submissions, config.setting, target, source, config.seed, config.per_problem
        )
        triplets.extend(group)
        for key, count in skips.items():
            skip_totals[key] += count

    rows, failures = score_all(
        triplets, config.metrics, config.exact_budget, config.jobs, config.tsed_name_sensitive
    )
    reports = effect_sizes(rows, config.metrics)
    matrix = pearson_matrix(rows, config.metrics, config.correlation_level, reports)

    manifest = {
        "seed": config.seed,
        "setting": config.setting,
        "target_lang": config.target_lang.value if config.target_lang else None,
        "source_lang": config.source_lang.value if config.source_lang else None,
        "per_problem": config.per_problem,
        "metrics": [m.value for m in config.metrics],
        "exact_budget": resolve_exact_budget(config.exact_budget),
        "tsed_name_sensitive": config.tsed_name_sensitive,
        "jobs": config.jobs,
        "correlation_level": config.correlation_level,
        "corpus_sha256": ingested.sha256,
        "counts": {
            "submissions": len(ingested.submissions),
            "skipped_lines": ingested.skipped_lines,
            "triplets": len(triplets),
            "skipped_problems": skip_totals,
            "pairs_scored": len(rows),
            "failures": {m.value: failures[m] for m in config.metrics},
        },
    }
    return EvalOutput(
        rows=rows,
        effect_reports=reports,
        correlation=matrix,
        effect_csv=effect_csv(reports, config.metrics),
        correlation_csv=correlation_csv(matrix),
        scores_jsonl=scores_jsonl(rows),
        manifest=manifest,
        triplet_count=len(triplets),
    )


def manifest_json(manifest: dict) -> str:
    return json.dumps(manifest, indent=2, sort_keys=True) + "\n"


def emit_report(output: EvalOutput, out_dir: str) -> list[str]:
    """Write the effect-size table, correlation matrix, per-pair scores,
    and run manifest under ``out_dir``; UTF-8, LF, 6-decimal cells."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "effect_sizes.csv": output.effect_csv,
        "correlation.csv": output.correlation_csv,
        "scores.jsonl": output.scores_jsonl,
        "manifest.json": manifest_json(output.manifest),
    }
    written = []
    for name, text in files.items():
        path = out / name
        path.write_bytes(text.encode("utf-8"))
        written.append(str(path))
    return written
