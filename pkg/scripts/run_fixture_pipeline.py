#!/usr/bin/env python3
"""Run the full extraction pipeline on the bundled fixture corpus.

This walks every stage in order: ingest, build-dataset, train, predict,
calibrate, eval, scan, threshold. Each stage is invoked through the
regular command-line interface, so the script doubles as a worked
example of the commands. The interactive review stage is not run here;
the final summary prints the command to start it.

Usage:
    python3 scripts/run_fixture_pipeline.py [--out DIR] [--members N]
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from typedppi.cli import main as cli_main  # noqa: E402

FIXTURE_CORPUS = REPO / "tests" / "fixtures" / "corpus"


def run(argv: list[str]) -> None:
    print(f"\n$ typedppi {' '.join(argv)}")
    rc = cli_main(argv)
    if rc != 0:
        raise SystemExit(rc)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="fixture_run",
                        help="working directory (default ./fixture_run)")
    parser.add_argument("--members", type=int, default=5)
    parser.add_argument("--epochs", type=int, default=4)
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--target", type=float, default=0.5,
                        help="calibration precision target")
    args = parser.parse_args()

    out = Path(args.out)
    if out.exists():
        shutil.rmtree(out)
    out.mkdir(parents=True)

    corpus = out / "corpus"
    dataset = out / "dataset.tsv"
    model = out / "model"

    run([
        "ingest",
        "--medline", str(FIXTURE_CORPUS / "medline.xml.gz"),
        "--mitab", str(FIXTURE_CORPUS / "mitab.tsv"),
        "--pubtator", str(FIXTURE_CORPUS / "pubtator.txt"),
        "--id-map", str(FIXTURE_CORPUS / "id_map.tsv"),
        "--type-map", str(FIXTURE_CORPUS / "type_map.tsv"),
        "--out", str(corpus),
    ])
    run([
        "build-dataset",
        "--corpus", str(corpus),
        "--out", str(dataset),
        "--binary-out", str(out / "dataset_binary.tsv"),
        "--stats", str(out / "stats.json"),
        "--seed", "0",
    ])
    run([
        "train",
        "--dataset", str(dataset),
        "--out", str(model),
        "--members", str(args.members),
        "--epochs", str(args.epochs),
        "--n-features", str(1 << 14),
    ])
    run([
        "predict",
        "--model", str(model),
        "--dataset", str(dataset),
        "--split", "val",
        "--out", str(out / "val_members.jsonl"),
    ])
    run([
        "calibrate",
        "--predictions", str(out / "val_members.jsonl"),
        "--dataset", str(dataset),
        "--split", "val",
        "--target", str(args.target),
        "--out", str(out / "thresholds.tsv"),
        "--report", str(out / "calibration.json"),
    ])
    run([
        "eval",
        "--model", str(model),
        "--dataset", str(dataset),
        "--split", "test",
        "--out", str(out / "metrics_test.json"),
    ])
    run([
        "scan",
        "--model", str(model),
        "--corpus", str(corpus),
        "--out", str(out / "scan.jsonl"),
        "--workers", str(args.workers),
        "--report", str(out / "scan_report.json"),
    ])
    run([
        "threshold",
        "--predictions", str(out / "scan.jsonl"),
        "--thresholds", str(out / "thresholds.tsv"),
        "--out", str(out / "kept.jsonl"),
        "--dropped", str(out / "dropped.jsonl"),
    ])

    metrics = json.loads((out / "metrics_test.json").read_text("utf-8"))
    print("\ntest-split macro F1 (typed classes):",
          round(metrics["metrics"]["macro"]["f1"], 4))
    print("(the fixture corpus is 20 abstracts; scores here demonstrate "
          "the mechanics, not model quality)")
    print("outputs under:", out)
    print("to review kept calls interactively:")
    print(f"  typedppi review --predictions {out / 'kept.jsonl'} "
          f"--corpus {corpus} --state {out / 'review.json'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
