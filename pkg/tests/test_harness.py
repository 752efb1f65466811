"""Corpus ingestion, triplet sampling, scoring, and statistics."""

from __future__ import annotations

import json
import random

import pytest

from conftest import CORPUS
from cssg.errors import DegenerateVariance, EmptyCorpus
from cssg.frontend.astnodes import Language
from cssg.harness import (
    DEFAULT_METRICS,
    EvalConfig,
    Submission,
    build_triplets,
    cohens_d,
    effect_csv,
    effect_sizes,
    ingest,
    ingest_text,
    pearson,
    pearson_matrix,
    run_eval,
    score_all,
)
from cssg.metrics import Metric


def sub(problem: str, verdict: str, source: str, sid: str, lang: Language = Language.PYTHON) -> Submission:
    return Submission(problem, lang, verdict, source, sid)


def line(problem="p1", language="python", verdict="correct", source="x = 1\n", sid="s1") -> str:
    return json.dumps(
        {"problem_id": problem, "language": language, "verdict": verdict, "source": source, "submission_id": sid}
    )


class TestIngest:
    def test_three_valid_lines(self):
        text = "\n".join([line(sid="a"), line(sid="b"), line(sid="c")]) + "\n"
        result = ingest_text(text)
        assert len(result.submissions) == 3
        assert result.skipped_lines == 0

    def test_malformed_line_skipped_and_counted(self):
        text = "\n".join([line(sid="a"), "{not json", line(sid="b"), line(verdict="weird", sid="c")])
        result = ingest_text(text)
        assert len(result.submissions) == 2
        assert result.skipped_lines == 2

    def test_empty_corpus_rejected(self):
        with pytest.raises(EmptyCorpus):
            ingest_text("\n\n")

    def test_missing_file_is_io_error(self):
        with pytest.raises(OSError):
            ingest("/nonexistent/corpus.jsonl")

    def test_desk_corpus_counts_by_construction(self):
        result = ingest(str(CORPUS))
        assert result.skipped_lines == 0
        assert len(result.submissions) == 138  # 30 Python problems * 3 + 8 bilingual * 6
        python = [s for s in result.submissions if s.language == Language.PYTHON]
        java = [s for s in result.submissions if s.language == Language.JAVA]
        assert len(python) == 114 and len(java) == 24


class TestBuildTriplets:
    def test_exactly_one_triplet(self):
        subs = [
            sub("p", "correct", "a = 1\n", "s1"),
            sub("p", "correct", "b = 2\n", "s2"),
            sub("p", "incorrect", "c = 3\n", "s3"),
        ]
        triplets, skips = build_triplets(subs, "monolingual", Language.PYTHON, Language.PYTHON, seed=0)
        assert len(triplets) == 1
        t = triplets[0]
        assert t.pos1.verdict == t.pos2.verdict == "correct"
        assert t.neg.verdict == "incorrect"
        assert t.pos1.submission_id != t.pos2.submission_id

    def test_insufficient_supply_is_skipped(self):
        subs = [sub("p", "correct", "a = 1\n", "s1")]
        triplets, skips = build_triplets(subs, "monolingual", Language.PYTHON, Language.PYTHON, seed=0)
        assert triplets == []
        assert sum(skips.values()) == 1

    def test_same_seed_same_triplets(self):
        subs = []
        for i in range(6):
            subs.append(sub("p", "correct", f"a = {i}\n", f"c{i}"))
        for i in range(3):
            subs.append(sub("p", "incorrect", f"b = {i}\n", f"i{i}"))
        first = build_triplets(subs, "monolingual", Language.PYTHON, Language.PYTHON, seed=42, per_problem=3)[0]
        second = build_triplets(subs, "monolingual", Language.PYTHON, Language.PYTHON, seed=42, per_problem=3)[0]
        assert [(t.pos1.submission_id, t.pos2.submission_id, t.neg.submission_id) for t in first] == [
            (t.pos1.submission_id, t.pos2.submission_id, t.neg.submission_id) for t in second
        ]

    def test_sampling_without_replacement(self):
        subs = []
        for i in range(6):
            subs.append(sub("p", "correct", f"a = {i}\n", f"c{i}"))
        for i in range(3):
            subs.append(sub("p", "incorrect", f"b = {i}\n", f"i{i}"))
        triplets, _ = build_triplets(subs, "monolingual", Language.PYTHON, Language.PYTHON, seed=1, per_problem=3)
        used = [t.pos1.submission_id for t in triplets] + [t.pos2.submission_id for t in triplets]
        assert len(used) == len(set(used))

    def test_crosslingual_language_roles(self):
        subs = [
            sub("p", "correct", "a = 1\n", "py1"),
            sub("p", "correct", "class Main { static void f() {} }", "j1", Language.JAVA),
            sub("p", "incorrect", "class Main { static void g() {} }", "j2", Language.JAVA),
        ]
        triplets, _ = build_triplets(subs, "crosslingual", Language.PYTHON, Language.JAVA, seed=0)
        assert len(triplets) == 1
        t = triplets[0]
        assert t.pos1.language == Language.PYTHON
        assert t.pos2.language == t.neg.language == Language.JAVA


class TestScoreAll:
    def test_counts_and_identity(self):
        subs = [
            sub("p", "correct", "x = 1\n", "s1"),
            sub("p", "correct", "x = 1\n", "s2"),
            sub("p", "incorrect", "y = 2\nz = y\n", "s3"),
        ]
        triplets, _ = build_triplets(subs, "monolingual", Language.PYTHON, Language.PYTHON, seed=0)
        rows, failures = score_all(triplets, DEFAULT_METRICS)
        assert len(rows) == 2  # one pos row, one neg row
        total_scores = sum(len(r.scores) for r in rows)
        assert total_scores == 8  # 2 rows x 4 metrics
        pos_row = next(r for r in rows if r.pair_role == "pos")
        for metric in DEFAULT_METRICS:
            assert pos_row.scores[metric] == 1.0  # identical sources
        assert all(count == 0 for count in failures.values())

    def test_failures_recorded_as_missing(self):
        subs = [
            sub("p", "correct", "x = 1\n", "s1"),
            sub("p", "correct", "x = 2\n", "s2"),
            sub("p", "incorrect", "int main(){}", "s3", Language.CPP),
        ]
        triplets, _ = build_triplets(subs, "monolingual", Language.PYTHON, Language.PYTHON, seed=0)
        assert triplets == []  # neg is cpp, filtered by language split

    def test_jobs_parallel_matches_serial(self):
        corpus = CORPUS.read_text(encoding="utf-8")
        subs = ingest_text(corpus).submissions[:12]
        triplets, _ = build_triplets(subs, "monolingual", Language.PYTHON, Language.PYTHON, seed=0)
        serial_rows, _ = score_all(triplets, [Metric.CSSG, Metric.JACCARD], jobs=1)
        parallel_rows, _ = score_all(triplets, [Metric.CSSG, Metric.JACCARD], jobs=2)
        assert [(r.triplet_id, r.pair_role, r.scores) for r in serial_rows] == [
            (r.triplet_id, r.pair_role, r.scores) for r in parallel_rows
        ]


class TestStatistics:
    def test_cohens_d_hand_value(self):
        report = cohens_d([0.8, 0.9], [0.5, 0.6])
        assert report.cohens_d == pytest.approx(4.2426, abs=1e-3)

    def test_translation_invariance(self):
        base = cohens_d([0.8, 0.9, 0.7], [0.5, 0.6, 0.4]).cohens_d
        shifted = cohens_d([0.9, 1.0, 0.8], [0.6, 0.7, 0.5]).cohens_d
        assert shifted == pytest.approx(base, abs=1e-12)

    def test_identical_groups_degenerate(self):
        with pytest.raises(DegenerateVariance):
            cohens_d([0.5, 0.5], [0.5, 0.5])

    def test_equal_distributions_zero(self):
        assert cohens_d([0.4, 0.6], [0.6, 0.4]).cohens_d == pytest.approx(0.0, abs=1e-12)

    def test_sign_matches_mean_difference(self):
        report = cohens_d([0.9, 0.8], [0.1, 0.2])
        assert report.cohens_d > 0
        flipped = cohens_d([0.1, 0.2], [0.9, 0.8])
        assert flipped.cohens_d < 0

    def test_pearson_affine(self):
        xs = [0.1, 0.4, 0.2, 0.9]
        ys = [2 * x + 1 for x in xs]
        assert pearson(xs, ys) == pytest.approx(1.0, abs=1e-12)

    def test_pearson_shuffled_is_near_zero(self):
        rng = random.Random(7)
        xs = [rng.random() for _ in range(1000)]
        ys = [rng.random() for _ in range(1000)]
        assert abs(pearson(xs, ys)) < 0.1

    def test_pearson_degenerate_is_none(self):
        assert pearson([1.0, 1.0], [0.2, 0.4]) is None


class TestReports:
    def _rows(self):
        subs = ingest_text(CORPUS.read_text(encoding="utf-8")).submissions
        keep = [s for s in subs if s.problem_id.startswith(("a", "b"))]
        triplets, _ = build_triplets(keep, "monolingual", Language.PYTHON, Language.PYTHON, seed=0)
        rows, _ = score_all(triplets, DEFAULT_METRICS)
        return rows

    def test_effect_csv_layout(self):
        rows = self._rows()
        reports = effect_sizes(rows, DEFAULT_METRICS)
        text = effect_csv(reports, DEFAULT_METRICS)
        lines = text.strip().split("\n")
        assert lines[0] == "language_pair,bleu,jaccard,tsed,cssg"
        assert lines[-1].startswith("Average,")
        assert len(lines) == 3  # header + python row + average

    def test_matrix_diagonal_and_symmetry(self):
        rows = self._rows()
        matrix = pearson_matrix(rows, DEFAULT_METRICS)
        n = len(DEFAULT_METRICS)
        for i in range(n):
            assert matrix.pearson[i][i] == 1.0
            for j in range(n):
                a, b = matrix.pearson[i][j], matrix.pearson[j][i]
                if a is None or b is None:
                    assert a == b
                else:
                    assert a == pytest.approx(b, abs=1e-12)
                if a is not None:
                    assert -1.0 - 1e-12 <= a <= 1.0 + 1e-12

    def test_effects_level_correlation_flag(self):
        corpus = CORPUS.read_text(encoding="utf-8")
        out = run_eval(corpus, EvalConfig(setting="monolingual", metrics=[Metric.TSED, Metric.CSSG],
                                          correlation_level="effects"))
        assert out.manifest["correlation_level"] == "effects"
        assert out.correlation_csv.startswith("metric,tsed,cssg")

    def test_missing_data_accounting(self):
        rows = self._rows()
        reports = effect_sizes(rows, DEFAULT_METRICS)
        triplet_count = len({r.triplet_id for r in rows})
        for metric in DEFAULT_METRICS:
            report = next(r for r in reports if r.metric == metric)
            assert report.n_pos + report.n_neg == 2 * triplet_count  # zero failures here


class TestFailureAccounting:
    def test_unsupported_language_counts_as_missing(self):
        rows_data = []
        for sid, verdict in (("s1", "correct"), ("s2", "correct"), ("s3", "incorrect")):
            rows_data.append(json.dumps({
                "problem_id": "p", "language": "cpp", "verdict": verdict,
                "source": "int main(){return 0;}\n", "submission_id": sid,
            }))
        subs = ingest_text("\n".join(rows_data)).submissions
        triplets, _ = build_triplets(subs, "monolingual", Language.CPP, Language.CPP, seed=0)
        assert len(triplets) == 1
        rows, failures = score_all(triplets, DEFAULT_METRICS)
        # every metric needs the frontend, so both pairs fail per metric
        for metric in DEFAULT_METRICS:
            assert failures[metric] == 2
        reports = effect_sizes(rows, DEFAULT_METRICS)
        for metric in DEFAULT_METRICS:
            report = next(r for r in reports if r.metric == metric)
            assert report.undefined
            assert report.n_pos + report.n_neg + failures[metric] == 2 * len(triplets)


class TestEmitReport:
    def test_writes_all_four_files(self, tmp_path):
        from cssg.harness import emit_report

        corpus = CORPUS.read_text(encoding="utf-8")
        out = run_eval(corpus, EvalConfig(
            setting="monolingual", target_lang=Language.PYTHON,
            metrics=[Metric.JACCARD, Metric.CSSG],
        ))
        written = emit_report(out, str(tmp_path / "reports"))
        names = sorted(p.rsplit("/", 1)[-1] for p in written)
        assert names == ["correlation.csv", "effect_sizes.csv", "manifest.json", "scores.jsonl"]
        csv_text = (tmp_path / "reports" / "effect_sizes.csv").read_text()
        assert csv_text == out.effect_csv
        # rerun into a second directory: byte-identical outputs
        out2 = run_eval(corpus, EvalConfig(
            setting="monolingual", target_lang=Language.PYTHON,
            metrics=[Metric.JACCARD, Metric.CSSG],
        ))
        emit_report(out2, str(tmp_path / "again"))
        for name in names:
            assert ((tmp_path / "reports" / name).read_bytes()
                    == (tmp_path / "again" / name).read_bytes())

    def test_empty_rows_still_valid_csv(self):
        from cssg.harness import effect_csv as make_csv

        text = make_csv([], [Metric.CSSG, Metric.TSED])
        lines = text.strip().split("\n")
        assert lines[0] == "language_pair,cssg,tsed"
        assert lines[1] == "Average,,"
