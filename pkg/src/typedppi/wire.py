"""Line-oriented interchange formats.

Member predictions travel as JSON Lines with an optional leading header
object carrying the class order and model ids. Any scorer that emits
this format can feed the aggregation and thresholding stages, so the
class-order check is a hard error while malformed data rows are merely
counted and skipped.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .labels import CLASS_ORDER, INTERACTION_TYPES
from .records import SkipReport, TypedPrediction


@dataclass(frozen=True)
class MemberPrediction:
    pmid: str
    participant1: str
    participant2: str
    model_id: str
    probs: tuple[float, ...]


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def write_member_predictions(
    path: str | Path,
    rows: Iterable[MemberPrediction],
    class_order: tuple[str, ...] = CLASS_ORDER,
    model_ids: Sequence[str] | None = None,
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        header: dict = {"class_order": list(class_order)}
        if model_ids is not None:
            header["model_ids"] = list(model_ids)
        fh.write(_dumps(header) + "\n")
        for row in rows:
            fh.write(
                _dumps(
                    {
                        "pmid": row.pmid,
                        "p1": row.participant1,
                        "p2": row.participant2,
                        "model_id": row.model_id,
                        "probs": list(row.probs),
                    }
                )
                + "\n"
            )


def _valid_probs(value: object, n_classes: int) -> tuple[float, ...] | None:
    if not isinstance(value, list) or len(value) != n_classes:
        return None
    out = []
    for p in value:
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            return None
        p = float(p)
        if not math.isfinite(p):
            return None
        out.append(p)
    return tuple(out)


def read_member_predictions(
    path: str | Path,
    expected_class_order: tuple[str, ...] = CLASS_ORDER,
    report: SkipReport | None = None,
) -> tuple[list[MemberPrediction], list[str] | None]:
    """Read member rows, returning them with the header's model ids.

    A header with a different class order is a hard error. Rows that do
    not parse or are missing fields are counted and skipped.
    """
    rows: list[MemberPrediction] = []
    model_ids: list[str] | None = None
    n_classes = len(expected_class_order)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                if report is not None:
                    report.add("wire_bad_row")
                continue
            if not isinstance(obj, dict):
                if report is not None:
                    report.add("wire_bad_row")
                continue
            if "class_order" in obj:
                got = tuple(obj["class_order"])
                if got != expected_class_order:
                    raise ValueError(
                        f"{path}:{lineno}: class order mismatch: "
                        f"{list(got)} != {list(expected_class_order)}"
                    )
                ids = obj.get("model_ids")
                if ids is not None:
                    model_ids = [str(i) for i in ids]
                continue
            probs = _valid_probs(obj.get("probs"), n_classes)
            if probs is None or not all(
                isinstance(obj.get(k), str) for k in ("pmid", "p1", "p2", "model_id")
            ):
                if report is not None:
                    report.add("wire_bad_row")
                continue
            rows.append(
                MemberPrediction(
                    pmid=obj["pmid"],
                    participant1=obj["p1"],
                    participant2=obj["p2"],
                    model_id=obj["model_id"],
                    probs=probs,
                )
            )
    return rows, model_ids


def group_member_rows(
    rows: Iterable[MemberPrediction],
) -> dict[tuple[str, str, str], list[MemberPrediction]]:
    """Group rows by (pmid, p1, p2); members sort by model id."""
    groups: dict[tuple[str, str, str], list[MemberPrediction]] = {}
    for row in rows:
        groups.setdefault(
            (row.pmid, row.participant1, row.participant2), []
        ).append(row)
    for members in groups.values():
        members.sort(key=lambda r: r.model_id)
    return groups


def aggregate_groups(
    groups: dict[tuple[str, str, str], list[MemberPrediction]],
) -> list[tuple[tuple[str, str, str], np.ndarray]]:
    """Mean member probabilities per pair, in canonical key order."""
    out = []
    for key in sorted(groups):
        stacked = np.array([r.probs for r in groups[key]], dtype=np.float64)
        out.append((key, stacked.mean(axis=0)))
    return out


def write_validation_predictions(
    path: str | Path,
    rows: Iterable[tuple[tuple[str, str, str], str, Sequence[float]]],
    class_order: tuple[str, ...] = CLASS_ORDER,
) -> None:
    """Write (key, gold, aggregated probs) rows used for calibration."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dumps({"class_order": list(class_order)}) + "\n")
        for (pmid, p1, p2), gold, probs in rows:
            fh.write(
                _dumps(
                    {
                        "pmid": pmid,
                        "p1": p1,
                        "p2": p2,
                        "gold": gold,
                        "probs": [float(p) for p in probs],
                    }
                )
                + "\n"
            )


def read_validation_predictions(
    path: str | Path,
    expected_class_order: tuple[str, ...] = CLASS_ORDER,
    report: SkipReport | None = None,
) -> list[tuple[tuple[str, str, str], str, tuple[float, ...]]]:
    n_classes = len(expected_class_order)
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                if report is not None:
                    report.add("wire_bad_row")
                continue
            if isinstance(obj, dict) and "class_order" in obj:
                got = tuple(obj["class_order"])
                if got != expected_class_order:
                    raise ValueError(
                        f"{path}:{lineno}: class order mismatch: "
                        f"{list(got)} != {list(expected_class_order)}"
                    )
                continue
            probs = _valid_probs(obj.get("probs"), n_classes) if isinstance(obj, dict) else None
            if probs is None or not all(
                isinstance(obj.get(k), str) for k in ("pmid", "p1", "p2", "gold")
            ):
                if report is not None:
                    report.add("wire_bad_row")
                continue
            rows.append(((obj["pmid"], obj["p1"], obj["p2"]), obj["gold"], probs))
    return rows


def write_scan_predictions(
    path: str | Path, predictions: Iterable[TypedPrediction]
) -> None:
    """Write aggregated pair decisions, one JSON object per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in predictions:
            fh.write(
                _dumps(
                    {
                        "pmid": p.pmid,
                        "p1": p.participant1,
                        "p2": p.participant2,
                        "label": p.label,
                        "probability": p.probability,
                        "tie": p.tie,
                    }
                )
                + "\n"
            )


def read_scan_predictions(path: str | Path) -> list[TypedPrediction]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            out.append(
                TypedPrediction(
                    pmid=obj["pmid"],
                    participant1=obj["p1"],
                    participant2=obj["p2"],
                    label=obj["label"],
                    probability=float(obj["probability"]),
                    tie=bool(obj.get("tie", False)),
                )
            )
    return out


THRESHOLD_COLUMNS = ("Type", "Cutoff")


def write_thresholds(path: str | Path, cutoffs: dict[str, float]) -> None:
    """Write the per-type cutoff table in the fixed type order."""
    missing = [t for t in INTERACTION_TYPES if t not in cutoffs]
    if missing:
        raise ValueError(f"cutoffs missing types: {missing}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(THRESHOLD_COLUMNS) + "\n")
        for t in INTERACTION_TYPES:
            fh.write(f"{t}\t{cutoffs[t]!r}\n")


def read_thresholds(path: str | Path) -> dict[str, float]:
    cutoffs: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if tuple(header.split("\t")) != THRESHOLD_COLUMNS:
            raise ValueError(f"unexpected thresholds header in {path}: {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns")
            cutoffs[parts[0]] = float(parts[1])
    if set(cutoffs) != set(INTERACTION_TYPES):
        raise ValueError(
            f"thresholds file {path} must cover exactly the interaction "
            f"types; got {sorted(cutoffs)}"
        )
    return cutoffs
