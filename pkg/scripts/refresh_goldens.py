#!/usr/bin/env python3
"""Freeze the fixture pipeline outputs under tests/fixtures/golden.

The goldens pin byte-level stability: rebuilding the corpus and dataset
from the fixture inputs must reproduce these files exactly. Run this
only when an intentional behavior change makes the frozen outputs
stale, and review the diff before committing.
"""

from __future__ import annotations

import sys
from pathlib import Path

from typedppi.cli import main

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "tests" / "fixtures" / "corpus"
GOLDEN = ROOT / "tests" / "fixtures" / "golden"


def run() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    main(
        [
            "ingest",
            "--medline", str(CORPUS / "medline.xml.gz"),
            "--mitab", str(CORPUS / "mitab.tsv"),
            "--pubtator", str(CORPUS / "pubtator.txt"),
            "--id-map", str(CORPUS / "id_map.tsv"),
            "--type-map", str(CORPUS / "type_map.tsv"),
            "--out", str(GOLDEN / "corpus"),
        ]
    )
    main(
        [
            "build-dataset",
            "--corpus", str(GOLDEN / "corpus"),
            "--out", str(GOLDEN / "dataset.tsv"),
            "--binary-out", str(GOLDEN / "dataset_binary.tsv"),
            "--seed", "0",
            "--stats", str(GOLDEN / "stats.json"),
        ]
    )
    print(f"goldens refreshed under {GOLDEN}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
