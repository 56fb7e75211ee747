"""End-to-end command-line runs over the fixture corpus.

The golden files under tests/fixtures/golden/ freeze the byte-exact
output of ingest and build-dataset; regenerate them with
scripts/refresh_goldens.py only on an intentional behavior change.
"""

from __future__ import annotations

import io
import json
import subprocess
import sys
import warnings
from contextlib import redirect_stdout
from pathlib import Path

import pytest

from typedppi import wire
from typedppi.cli import main
from typedppi.dataset import read_dataset_tsv
from typedppi.labels import CLASS_ORDER, INTERACTION_TYPES, NEGATIVE_LABEL
from typedppi.pipeline import ReviewSession
from typedppi.scorer import load_ensemble


def _run(argv: list[str]) -> dict | None:
    """Invoke the CLI in process, returning its stdout JSON if any."""
    buf = io.StringIO()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with redirect_stdout(buf):
            rc = main(argv)
    assert rc == 0
    text = buf.getvalue().strip()
    return json.loads(text) if text else None


TRAIN_ARGS = [
    "--members", "2", "--epochs", "2", "--n-features", "8192", "--seed", "3",
]


@pytest.fixture(scope="session")
def cli_dir(tmp_path_factory, corpus_dir):
    """Run the whole command chain once into a session directory."""
    root = tmp_path_factory.mktemp("cli")
    paths = {
        "corpus": root / "corpus",
        "dataset": root / "dataset.tsv",
        "binary": root / "dataset_binary.tsv",
        "stats": root / "stats.json",
        "model": root / "model",
        "members": root / "members.jsonl",
        "thresholds": root / "thresholds.tsv",
        "cal_report": root / "calibration.json",
        "metrics": root / "metrics.json",
        "scan": root / "scan.jsonl",
        "scan_report": root / "scan_report.json",
        "kept": root / "kept.jsonl",
        "dropped": root / "dropped.jsonl",
    }
    summaries = {}
    summaries["ingest"] = _run([
        "ingest",
        "--medline", str(corpus_dir / "medline.xml.gz"),
        "--mitab", str(corpus_dir / "mitab.tsv"),
        "--pubtator", str(corpus_dir / "pubtator.txt"),
        "--id-map", str(corpus_dir / "id_map.tsv"),
        "--type-map", str(corpus_dir / "type_map.tsv"),
        "--out", str(paths["corpus"]),
    ])
    _run([
        "build-dataset",
        "--corpus", str(paths["corpus"]),
        "--out", str(paths["dataset"]),
        "--binary-out", str(paths["binary"]),
        "--stats", str(paths["stats"]),
        "--seed", "0",
    ])
    summaries["train"] = _run([
        "train",
        "--dataset", str(paths["dataset"]),
        "--out", str(paths["model"]),
        "--split", "train",
        *TRAIN_ARGS,
    ])
    _run([
        "predict",
        "--model", str(paths["model"]),
        "--dataset", str(paths["dataset"]),
        "--split", "val",
        "--out", str(paths["members"]),
    ])
    _run([
        "calibrate",
        "--predictions", str(paths["members"]),
        "--dataset", str(paths["dataset"]),
        "--split", "val",
        "--target", "0.5",
        "--out", str(paths["thresholds"]),
        "--report", str(paths["cal_report"]),
    ])
    _run([
        "eval",
        "--model", str(paths["model"]),
        "--dataset", str(paths["dataset"]),
        "--split", "test",
        "--out", str(paths["metrics"]),
    ])
    _run([
        "scan",
        "--model", str(paths["model"]),
        "--corpus", str(paths["corpus"]),
        "--out", str(paths["scan"]),
        "--workers", "2",
        "--report", str(paths["scan_report"]),
    ])
    summaries["threshold"] = _run([
        "threshold",
        "--predictions", str(paths["scan"]),
        "--defaults",
        "--out", str(paths["kept"]),
        "--dropped", str(paths["dropped"]),
    ])
    return {"paths": paths, "summaries": summaries}


class TestIngest:
    def test_summary_matches_ground_truth(self, cli_dir, ground_truth):
        summary = cli_dir["summaries"]["ingest"]
        assert summary["abstracts"] == ground_truth["kept_abstracts"]
        assert summary["interactions"] == ground_truth["kept_interactions"]
        assert summary["skips"] == ground_truth["expected_skips"]

    def test_corpus_bytes_match_golden(self, cli_dir, golden_dir):
        got_dir = cli_dir["paths"]["corpus"]
        golden_corpus = golden_dir / "corpus"
        names = sorted(p.name for p in golden_corpus.iterdir())
        assert names, "golden corpus directory is empty"
        for name in names:
            assert (got_dir / name).read_bytes() == \
                (golden_corpus / name).read_bytes(), name


class TestBuildDataset:
    def test_dataset_bytes_match_golden(self, cli_dir, golden_dir):
        assert cli_dir["paths"]["dataset"].read_bytes() == \
            (golden_dir / "dataset.tsv").read_bytes()

    def test_binary_bytes_match_golden(self, cli_dir, golden_dir):
        assert cli_dir["paths"]["binary"].read_bytes() == \
            (golden_dir / "dataset_binary.tsv").read_bytes()

    def test_stats_bytes_match_golden(self, cli_dir, golden_dir):
        assert cli_dir["paths"]["stats"].read_bytes() == \
            (golden_dir / "stats.json").read_bytes()

    def test_stats_totals(self, cli_dir, ground_truth):
        stats = json.loads(cli_dir["paths"]["stats"].read_text("utf-8"))
        overall = stats["stats"]["overall"]
        totals = ground_truth["dataset"]["totals"]
        assert overall["samples"] == totals["samples"]
        assert overall["positives"] == totals["positives"]
        assert overall["negatives"] == totals["negatives"]
        assert overall["pmids"] == totals["pmids"]


class TestTrainPredict:
    def test_train_summary_and_artifacts(self, cli_dir):
        summary = cli_dir["summaries"]["train"]
        assert summary["members"] == 2
        assert summary["trained_on"] > 0
        model = cli_dir["paths"]["model"]
        assert (model / "ensemble.json").exists()
        assert (model / "member_00.npz").exists()
        assert (model / "member_01.npz").exists()
        ensemble = load_ensemble(model)
        assert len(ensemble.members) == 2
        assert ensemble.class_order == CLASS_ORDER

    def test_predict_covers_val_pairs_per_member(self, cli_dir):
        rows, model_ids = wire.read_member_predictions(
            cli_dir["paths"]["members"]
        )
        assert model_ids == ["member_00", "member_01"]
        samples = [s for s in read_dataset_tsv(cli_dir["paths"]["dataset"])
                   if s.split == "val"]
        pairs = {(s.pmid, s.participant1, s.participant2) for s in samples}
        assert {(r.pmid, r.participant1, r.participant2) for r in rows} == pairs
        assert len(rows) == 2 * len(pairs)
        keys = [(r.pmid, r.participant1, r.participant2, r.model_id)
                for r in rows]
        assert keys == sorted(keys)

    def test_predict_probs_are_distributions(self, cli_dir):
        rows, _ = wire.read_member_predictions(cli_dir["paths"]["members"])
        for r in rows:
            assert len(r.probs) == len(CLASS_ORDER)
            assert abs(sum(r.probs) - 1.0) < 1e-9
            assert all(0.0 <= p <= 1.0 for p in r.probs)


class TestCalibrateEval:
    def test_thresholds_file_readable(self, cli_dir):
        cutoffs = wire.read_thresholds(cli_dir["paths"]["thresholds"])
        assert set(cutoffs) == set(INTERACTION_TYPES)
        assert all(v >= 0.0 for v in cutoffs.values())

    def test_calibration_report_shape(self, cli_dir):
        report = json.loads(cli_dir["paths"]["cal_report"].read_text("utf-8"))
        assert set(report["cutoffs"]) == set(INTERACTION_TYPES)
        for t in INTERACTION_TYPES:
            assert "cutoff" in report["per_type"][t]
        assert "skips" in report

    def test_eval_metrics_shape(self, cli_dir):
        payload = json.loads(cli_dir["paths"]["metrics"].read_text("utf-8"))
        assert payload["confusion"]["classes"] == list(CLASS_ORDER)
        metrics = payload["metrics"]
        assert set(metrics["per_class"]) == set(CLASS_ORDER)
        assert 0.0 <= metrics["accuracy"] <= 1.0
        assert "binary" not in metrics

    def test_eval_binary_mode(self, cli_dir, tmp_path):
        out = tmp_path / "binary_metrics.json"
        _run([
            "eval",
            "--model", str(cli_dir["paths"]["model"]),
            "--dataset", str(cli_dir["paths"]["dataset"]),
            "--split", "test",
            "--binary",
            "--out", str(out),
        ])
        payload = json.loads(out.read_text("utf-8"))
        assert payload["metrics"]["binary"]["positive_class"] == "POSITIVE"
        assert len(payload["confusion"]["classes"]) == 2


class TestScanThreshold:
    def test_scan_output_parses_and_is_sorted(self, cli_dir):
        preds = wire.read_scan_predictions(cli_dir["paths"]["scan"])
        assert preds
        keys = [(p.pmid, p.participant1, p.participant2) for p in preds]
        assert keys == sorted(keys)
        report = json.loads(cli_dir["paths"]["scan_report"].read_text("utf-8"))
        assert report["predictions"] == len(preds)

    def test_scan_worker_count_is_immaterial(self, cli_dir, tmp_path):
        out = tmp_path / "scan1.jsonl"
        _run([
            "scan",
            "--model", str(cli_dir["paths"]["model"]),
            "--corpus", str(cli_dir["paths"]["corpus"]),
            "--out", str(out),
            "--workers", "1",
        ])
        assert out.read_bytes() == cli_dir["paths"]["scan"].read_bytes()

    def test_threshold_partition_adds_up(self, cli_dir):
        summary = cli_dir["summaries"]["threshold"]
        preds = wire.read_scan_predictions(cli_dir["paths"]["scan"])
        kept = wire.read_scan_predictions(cli_dir["paths"]["kept"])
        dropped = wire.read_scan_predictions(cli_dir["paths"]["dropped"])
        negatives = sum(1 for p in preds if p.label == NEGATIVE_LABEL)
        assert summary["input"] == len(preds)
        assert summary["kept"] == len(kept)
        assert summary["dropped_typed"] == len(dropped)
        assert len(kept) + len(dropped) + negatives == len(preds)
        assert all(p.label != NEGATIVE_LABEL for p in kept + dropped)

    def test_threshold_requires_a_cutoff_source(self, cli_dir, tmp_path):
        with pytest.raises(SystemExit):
            _run([
                "threshold",
                "--predictions", str(cli_dir["paths"]["scan"]),
                "--out", str(tmp_path / "kept.jsonl"),
            ])


def _run_review(argv: list[str], answers: list[str], monkeypatch) -> str:
    """Drive the interactive review command through a scripted stdin."""
    monkeypatch.setattr("sys.stdin", io.StringIO("".join(a + "\n" for a in answers)))
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = main(argv)
    assert rc == 0
    return buf.getvalue()


class TestReview:
    def test_new_session_then_resume(self, cli_dir, tmp_path, monkeypatch):
        state = tmp_path / "review_state.json"
        _run_review([
            "review",
            "--predictions", str(cli_dir["paths"]["scan"]),
            "--corpus", str(cli_dir["paths"]["corpus"]),
            "--sample", "2",
            "--state", str(state),
        ], ["c", "q"], monkeypatch)
        session = ReviewSession.load(state)
        assert session.items
        assert session.items[0].verdict == "correct"
        assert session.items[0].display_text
        remaining = len(session.pending())

        _run_review(["review", "--state", str(state)], ["i", "q"], monkeypatch)
        resumed = ReviewSession.load(state)
        assert resumed.items[0].verdict == "correct"
        assert len(resumed.pending()) in (remaining - 1, 0)

    def test_new_session_requires_predictions(self, tmp_path):
        with pytest.raises(SystemExit):
            _run(["review", "--state", str(tmp_path / "nope.json")])


def test_module_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "typedppi", "--help"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert "ingest" in proc.stdout
