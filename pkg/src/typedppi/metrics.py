"""Confusion matrices and precision/recall/F1 reporting.

Zero-denominator cases score 0 and are flagged rather than raising.
The headline macro average excludes the negative class, since the
negative class dominates the datasets this package builds; the
all-classes variant is always reported alongside it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .labels import CLASS_ORDER, NEGATIVE_LABEL


@dataclass
class ConfusionMatrix:
    """Rows are gold classes, columns are predicted classes."""

    classes: tuple[str, ...]
    matrix: np.ndarray

    def to_json(self) -> dict:
        return {
            "classes": list(self.classes),
            "matrix": self.matrix.tolist(),
        }


@dataclass
class MetricReport:
    per_class: dict[str, dict] = field(default_factory=dict)
    macro: dict[str, float] = field(default_factory=dict)
    macro_with_negative: dict[str, float] = field(default_factory=dict)
    micro: dict[str, float] = field(default_factory=dict)
    accuracy: float = 0.0
    binary: dict[str, float] | None = None

    def to_json(self) -> dict:
        out = {
            "per_class": self.per_class,
            "macro": self.macro,
            "macro_with_negative": self.macro_with_negative,
            "micro": self.micro,
            "accuracy": self.accuracy,
        }
        if self.binary is not None:
            out["binary"] = self.binary
        return out


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float, list[str]]:
    flags = []
    precision = recall = f1 = 0.0
    if tp + fp:
        precision = tp / (tp + fp)
    else:
        flags.append("zero_denominator_precision")
    if tp + fn:
        recall = tp / (tp + fn)
    else:
        flags.append("zero_denominator_recall")
    if precision + recall:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        flags.append("zero_denominator_f1")
    return precision, recall, f1, flags


def evaluate(
    gold: Sequence[str],
    predicted: Sequence[str],
    classes: tuple[str, ...] = CLASS_ORDER,
    negative_label: str = NEGATIVE_LABEL,
) -> tuple[ConfusionMatrix, MetricReport]:
    """Score predictions against gold labels over a fixed class set."""
    if len(gold) != len(predicted):
        raise ValueError(
            f"gold and predicted differ in length: {len(gold)} != {len(predicted)}"
        )
    index = {c: i for i, c in enumerate(classes)}
    unknown = {l for l in (*gold, *predicted) if l not in index}
    if unknown:
        raise ValueError(f"labels outside the class set: {sorted(unknown)}")

    n = len(classes)
    matrix = np.zeros((n, n), dtype=np.int64)
    for g, p in zip(gold, predicted):
        matrix[index[g], index[p]] += 1
    cm = ConfusionMatrix(classes=classes, matrix=matrix)

    report = MetricReport()
    per_class_rows = []
    for i, cls in enumerate(classes):
        tp = int(matrix[i, i])
        fp = int(matrix[:, i].sum() - tp)
        fn = int(matrix[i, :].sum() - tp)
        precision, recall, f1, flags = _prf(tp, fp, fn)
        row = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": int(matrix[i, :].sum()),
            "flags": flags,
        }
        report.per_class[cls] = row
        per_class_rows.append((cls, row))

    def _macro(rows: list[tuple[str, dict]]) -> dict[str, float]:
        if not rows:
            return {"precision": 0.0, "recall": 0.0, "f1": 0.0}
        return {
            key: float(np.mean([row[key] for _, row in rows]))
            for key in ("precision", "recall", "f1")
        }

    report.macro = _macro([r for r in per_class_rows if r[0] != negative_label])
    report.macro_with_negative = _macro(per_class_rows)

    total = int(matrix.sum())
    correct = int(np.trace(matrix))
    report.accuracy = (correct / total) if total else 0.0
    # With one prediction per sample, micro precision, recall, and F1
    # all collapse to accuracy.
    report.micro = {
        "precision": report.accuracy,
        "recall": report.accuracy,
        "f1": report.accuracy,
    }

    if len(classes) == 2:
        positive = next(c for c in classes if c != negative_label)
        row = report.per_class[positive]
        report.binary = {
            "positive_class": positive,
            "precision": row["precision"],
            "recall": row["recall"],
            "f1": row["f1"],
        }
    return cm, report


def run_summary(values: Sequence[float]) -> dict[str, float]:
    """Mean and population standard deviation over repeated runs."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no values to summarize")
    return {"mean": float(arr.mean()), "std": float(arr.std())}
