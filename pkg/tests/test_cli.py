"""CLI contract: output formats, exit codes, report files."""

from __future__ import annotations

import json
import re

import pytest

from conftest import GOLDEN, CORPUS, DATA
from cssg.cli import main


def run(capsys, *argv) -> tuple[int, str, str]:
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage failures
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def sample(tmp_path):
    a = tmp_path / "a.py"
    a.write_text("x = 1\ny = x + 1\n")
    b = tmp_path / "b.py"
    b.write_text("x = 1\ny = x + 2\n")
    return a, b


class TestCompare:
    def test_identity_line_format(self, capsys, sample):
        a, _ = sample
        code, out, _ = run(capsys, "compare", str(a), str(a), "--metric", "cssg")
        assert code == 0
        assert re.match(r"^cssg 1\.000000 ged=0 dmax=\d+ solver=exact$", out.strip())

    def test_dataflow_contrast(self, capsys):
        a = str(GOLDEN / "dataflow_v1.py")
        b = str(GOLDEN / "dataflow_v2.py")
        code, out, _ = run(capsys, "compare", a, b, "--metric", "cssg,tsed")
        assert code == 0
        lines = dict(l.split(" ", 1) for l in out.strip().split("\n"))
        assert lines["tsed"].strip() == "1.000000"
        assert float(lines["cssg"].split()[0]) < 1.0

    def test_mixed_extensions_inferred(self, capsys, tmp_path):
        py = tmp_path / "s.py"
        py.write_text("n = 1\nprint(n)\n")
        java = DATA / "identity" / "jc0_java_pos1.java"
        code, out, _ = run(capsys, "compare", str(py), str(java), "--metric", "cssg")
        assert code == 0
        assert out.startswith("cssg ")

    def test_parse_exit_code_for_cpp(self, capsys, tmp_path):
        cpp = tmp_path / "m.cpp"
        cpp.write_text("int main(){return 0;}")
        py = tmp_path / "a.py"
        py.write_text("x = 1\n")
        code, _, err = run(capsys, "compare", str(cpp), str(py))
        assert code == 2
        assert "unsupported_language" in err

    def test_missing_file_is_io(self, capsys, tmp_path):
        py = tmp_path / "a.py"
        py.write_text("x = 1\n")
        code, _, _ = run(capsys, "compare", str(tmp_path / "nope.py"), str(py))
        assert code == 3

    def test_unknown_metric_is_usage(self, capsys, sample):
        a, b = sample
        code, _, _ = run(capsys, "compare", str(a), str(b), "--metric", "rouge")
        assert code == 1

    def test_unknown_extension_needs_lang(self, capsys, tmp_path):
        f = tmp_path / "prog.txt"
        f.write_text("x = 1\n")
        code, _, _ = run(capsys, "compare", str(f), str(f))
        assert code == 1
        code, out, _ = run(capsys, "compare", str(f), str(f), "--lang", "python", "--metric", "jaccard")
        assert code == 0


class TestGraph:
    def test_json_schema_valid(self, capsys, sample):
        a, _ = sample
        code, out, _ = run(capsys, "graph", str(a), "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert set(obj) == {"nodes", "edges"}

    def test_dot_cycle_for_recursion(self, capsys):
        code, out, _ = run(capsys, "graph", str(GOLDEN / "recursive.py"), "--format", "dot")
        assert code == 0
        assert 'kind="call"' in out

    def test_empty_file_two_nodes(self, capsys, tmp_path):
        f = tmp_path / "empty.py"
        f.write_text("")
        code, out, _ = run(capsys, "graph", str(f))
        assert code == 0
        obj = json.loads(out)
        assert len(obj["nodes"]) == 2
        assert len(obj["edges"]) == 1


class TestEval:
    def test_reports_written(self, capsys, tmp_path):
        out_dir = tmp_path / "reports"
        code, out, _ = run(
            capsys, "eval", "--corpus", str(CORPUS), "--setting", "monolingual",
            "--target-lang", "python", "--seed", "0", "--jobs", "1",
            "--metric", "jaccard,cssg", "--out", str(out_dir),
        )
        assert code == 0
        for name in ("effect_sizes.csv", "correlation.csv", "manifest.json", "scores.jsonl"):
            assert (out_dir / name).exists()
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["seed"] == 0
        assert manifest["counts"]["triplets"] == 38

    def test_empty_yield_exit_4(self, capsys, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        corpus.write_text(json.dumps({
            "problem_id": "p", "language": "python", "verdict": "correct",
            "source": "x = 1\n", "submission_id": "only",
        }) + "\n")
        code, _, err = run(capsys, "eval", "--corpus", str(corpus), "--out", str(tmp_path / "r"),
                           "--jobs", "1")
        assert code == 4

    def test_missing_corpus_exit_3(self, capsys, tmp_path):
        code, _, _ = run(capsys, "eval", "--corpus", str(tmp_path / "no.jsonl"), "--out", str(tmp_path / "r"))
        assert code == 3

    def test_usage_error_exit_1(self, capsys):
        code, _, _ = run(capsys, "eval", "--corpus")
        assert code == 1


class TestReport:
    def test_recompute_from_scores(self, capsys, tmp_path):
        out_dir = tmp_path / "reports"
        run(
            capsys, "eval", "--corpus", str(CORPUS), "--target-lang", "python",
            "--seed", "0", "--jobs", "1", "--metric", "jaccard,cssg", "--out", str(out_dir),
        )
        redo = tmp_path / "redone"
        code, out, _ = run(capsys, "report", "--scores", str(out_dir / "scores.jsonl"),
                           "--metric", "jaccard,cssg", "--out", str(redo))
        assert code == 0
        assert (redo / "effect_sizes.csv").read_bytes() == (out_dir / "effect_sizes.csv").read_bytes()
        assert (redo / "correlation.csv").read_bytes() == (out_dir / "correlation.csv").read_bytes()


def test_negative_budget_is_usage_error(capsys, tmp_path):
    f = tmp_path / "a.py"
    f.write_text("x = 1\n")
    code, _, err = run(capsys, "compare", str(f), str(f), "--exact-budget", "-5")
    assert code == 1
    assert "exact-budget" in err
