#!/usr/bin/env python3
"""Regenerate the static test fixtures: dataset.tsv and vocab.txt.

The dataset is a small, fully separable labeled-sample file in the
dataset-builder TSV format: every class is marked by its own verb, so
a tiny encoder can learn it in one epoch. The vocabulary is derived
from the masked texts, which guarantees the test tokenizer covers
every word the fixture uses.
"""

from __future__ import annotations

import argparse
import csv
import random
import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from neuralscorer.labels import CLASS_ORDER, NEGATIVE_LABEL

TYPE_VERBS = {
    "acetylation": "acetylated",
    "methylation": "methylated",
    "demethylation": "demethylated",
    "phosphorylation": "phosphorylated",
    "dephosphorylation": "dephosphorylated",
    "ubiquitination": "ubiquitinated",
    "deubiquitination": "deubiquitinated",
}

NEUTRAL_VERBS = ["bound", "recruited", "stabilized"]

LEADS = [
    "we found that",
    "we report that",
    "this study shows that",
    "the data indicate that",
]

FILLERS = [
    "in a kinase assay",
    "in cell lysates",
    "in this study",
    "in vivo",
    "in vitro",
    "at lysine residues",
    "during mitosis",
    "after stimulation",
    "in the nucleus",
    "under stress conditions",
    "in a directed screen",
    "following treatment",
    "during differentiation",
    "in cultured neurons",
    "within the complex",
    "at the plasma membrane",
    "upon ligand binding",
]

# One sentence per (lead x filler) combination, 68 per class; the
# split sizes must sum to that. Assignments are interleaved with a
# fixed shuffle so every lead and most fillers appear in training.
SPLIT_PLAN = [("train", 48), ("val", 10), ("test", 10)]
SPLIT_SHUFFLE_SEED = 13

DATASET_COLUMNS = (
    "Participant1",
    "Participant2",
    "PMID",
    "RawAbstract",
    "NormalizedMaskedAbstract",
    "Class",
    "AssocType",
    "Split",
)

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


def split_pattern() -> list[str]:
    pattern = [name for name, count in SPLIT_PLAN for _ in range(count)]
    random.Random(SPLIT_SHUFFLE_SEED).shuffle(pattern)
    return pattern


def build_rows() -> list[tuple]:
    rows = []
    interaction_types = [c for c in CLASS_ORDER if c != NEGATIVE_LABEL]
    contexts = [(lead, filler) for lead in LEADS for filler in FILLERS]
    pattern = split_pattern()
    if len(pattern) != len(contexts):
        raise ValueError("split plan does not cover the context grid")
    serial = 0
    for label in CLASS_ORDER:
        for i, (lead, filler) in enumerate(contexts):
            if label == NEGATIVE_LABEL:
                verb = NEUTRAL_VERBS[i % len(NEUTRAL_VERBS)]
                assoc = interaction_types[i % len(interaction_types)]
            else:
                verb = TYPE_VERBS[label]
                assoc = label
            masked = f"{lead} PROTEIN1 {verb} PROTEIN2 {filler}."
            p1 = f"P{10000 + serial}"
            p2 = f"Q{20000 + serial}"
            raw = masked.replace("PROTEIN1", p1).replace("PROTEIN2", p2)
            pmid = str(900000 + serial)
            rows.append((p1, p2, pmid, raw, masked, label, assoc, pattern[i]))
            serial += 1
    return rows


def vocab_for(rows: list[tuple]) -> list[str]:
    words: set[str] = set()
    for row in rows:
        masked = row[4]
        words.update(re.findall(r"[a-z0-9]+|[^\sa-z0-9]+", masked.lower()))
    return SPECIALS + sorted(words)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out-dir",
        default=str(Path(__file__).resolve().parents[1] / "tests" / "fixtures"),
    )
    args = parser.parse_args(argv)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = build_rows()
    with open(out_dir / "dataset.tsv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(
            fh, delimiter="\t", quoting=csv.QUOTE_MINIMAL, lineterminator="\n"
        )
        writer.writerow(DATASET_COLUMNS)
        writer.writerows(rows)

    vocab = vocab_for(rows)
    with open(out_dir / "vocab.txt", "w", encoding="utf-8") as fh:
        fh.write("\n".join(vocab) + "\n")

    print(f"wrote {len(rows)} rows and {len(vocab)} vocab entries to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
