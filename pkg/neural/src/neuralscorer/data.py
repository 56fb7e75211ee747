"""Reader for the labeled-sample TSV produced by the dataset builder.

The format is the external contract between the two scorer packages:
a tab-separated file with the exact header below, one labeled sample
per row, masked abstracts fed whole (the sentences stay joined,
including their end-of-sentence periods).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .labels import CLASS_INDEX

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


@dataclass(frozen=True)
class DatasetRow:
    pmid: str
    participant1: str
    participant2: str
    raw_text: str
    masked_text: str
    label: str
    assoc_type: str
    split: str


def read_dataset_tsv(path: str | Path) -> list[DatasetRow]:
    csv.field_size_limit(max(csv.field_size_limit(), 1 << 24))
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", lineterminator="\n")
        header = next(reader, None)
        if header is None or tuple(header) != DATASET_COLUMNS:
            raise ValueError(f"unexpected dataset header in {path}: {header}")
        for row in reader:
            if len(row) != len(DATASET_COLUMNS):
                raise ValueError(f"{path}: row with {len(row)} columns")
            p1, p2, pmid, raw, masked, label, assoc, split = row
            rows.append(
                DatasetRow(
                    pmid=pmid,
                    participant1=p1,
                    participant2=p2,
                    raw_text=raw,
                    masked_text=masked,
                    label=label,
                    assoc_type=assoc,
                    split=split,
                )
            )
    return rows


def rows_for_split(rows: list[DatasetRow], split: str) -> list[DatasetRow]:
    return [r for r in rows if r.split == split]


def label_indices(rows: list[DatasetRow]) -> list[int]:
    """Map row labels to class indices; unknown labels are a hard error."""
    out = []
    for r in rows:
        if r.label not in CLASS_INDEX:
            raise ValueError(f"unknown class {r.label!r} for pmid {r.pmid}")
        out.append(CLASS_INDEX[r.label])
    return out
