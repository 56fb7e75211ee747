"""Corpus scanning, per-type thresholds, calibration, and manual review.

The scan walks every abstract, enumerates co-mentioned protein pairs,
masks each pair, and records the ensemble's decision. Thresholding then
keeps only typed calls whose aggregated probability clears a per-type
cutoff (inclusive). Cutoffs either come from the shipped defaults or
are calibrated against validation predictions for a precision target.
"""

from __future__ import annotations

import dataclasses
import json
import random
import re
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .dataset import _TOKEN_CHARS, mask_participants, order_participants
from .labels import CLASS_INDEX, CLASS_ORDER, INTERACTION_TYPES, NEGATIVE_LABEL
from .records import NormalizedAbstract, SkipReport, TypedPrediction
from .scorer import Decision, Ensemble, decide, ensemble_proba

# Per-type cutoffs tuned for high precision on the reference corpus.
# A cutoff of 0.0 keeps every call of that type.
DEFAULT_THRESHOLDS: dict[str, float] = {
    "acetylation": 0.83,
    "methylation": 0.85,
    "demethylation": 0.0,
    "phosphorylation": 0.98,
    "dephosphorylation": 0.85,
    "ubiquitination": 0.3,
    "deubiquitination": 0.5,
}


@dataclass(frozen=True)
class ThresholdConfig:
    """Cutoffs for exactly the typed (non-negative) classes."""

    cutoffs: dict[str, float]

    def __post_init__(self) -> None:
        got = set(self.cutoffs)
        expected = set(INTERACTION_TYPES)
        if got != expected:
            raise ValueError(
                f"cutoffs must cover exactly the interaction types; "
                f"missing {sorted(expected - got)}, extra {sorted(got - expected)}"
            )
        for t, v in self.cutoffs.items():
            if not (isinstance(v, (int, float)) and np.isfinite(v) and v >= 0.0):
                raise ValueError(f"cutoff for {t} must be a non-negative number")


def default_thresholds() -> ThresholdConfig:
    return ThresholdConfig(dict(DEFAULT_THRESHOLDS))


def _pair_samples(
    norm: NormalizedAbstract,
) -> list[tuple[str, str, str]]:
    """(p1, p2, masked text) for each unordered present pair."""
    present = sorted(norm.present_ids)
    out = []
    for i, a in enumerate(present):
        for b in present[i + 1 :]:
            p1, p2 = order_participants(norm.text, a, b)
            out.append((p1, p2, mask_participants(norm.text, p1, p2)))
    return out


def _scan_one(
    norm: NormalizedAbstract, ensemble: Ensemble
) -> list[TypedPrediction]:
    pairs = _pair_samples(norm)
    texts = [t for _, _, t in pairs]
    probs = ensemble_proba(ensemble, texts)
    out = []
    for (p1, p2, _), row in zip(pairs, probs):
        decision = decide(row, ensemble.class_order)
        out.append(
            TypedPrediction(
                pmid=norm.pmid,
                participant1=p1,
                participant2=p2,
                label=decision.label,
                probability=decision.probability,
                tie=decision.tie,
            )
        )
    return out


def scan_corpus(
    abstracts: Iterable[NormalizedAbstract],
    ensemble: Ensemble,
    workers: int = 1,
    report: SkipReport | None = None,
) -> list[TypedPrediction]:
    """Score every co-mentioned pair in every abstract.

    Abstracts are scored independently (optionally in a thread pool)
    and results are returned in canonical (pmid, p1, p2) order, so the
    output is identical for any worker count.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    todo = []
    for norm in abstracts:
        if len(norm.present_ids) < 2:
            if report is not None:
                report.add("scan_too_few_proteins")
            continue
        todo.append(norm)

    results: list[TypedPrediction] = []

    def _run(norm: NormalizedAbstract) -> list[TypedPrediction] | None:
        try:
            return _scan_one(norm, ensemble)
        except Exception:
            return None

    if workers == 1:
        chunks = map(_run, todo)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        try:
            chunks = pool.map(_run, todo)
        finally:
            pool.shutdown(wait=False)
    for chunk in chunks:
        if chunk is None:
            if report is not None:
                report.add("scan_abstract_failed")
            continue
        results.extend(chunk)
    results.sort(key=lambda p: (p.pmid, p.participant1, p.participant2))
    return results


def apply_thresholds(
    predictions: Iterable[TypedPrediction],
    thresholds: ThresholdConfig,
) -> tuple[list[TypedPrediction], list[TypedPrediction]]:
    """Split typed calls into kept and dropped by per-type cutoff.

    The comparison is inclusive: a probability equal to the cutoff is
    kept. Negative decisions are never kept and never counted as
    dropped typed calls; they simply pass out of scope.
    """
    kept = []
    dropped = []
    for p in predictions:
        if p.label == NEGATIVE_LABEL:
            continue
        if p.probability >= thresholds.cutoffs[p.label]:
            kept.append(p)
        else:
            dropped.append(p)
    return kept, dropped


@dataclass
class CalibrationResult:
    thresholds: ThresholdConfig
    per_type: dict[str, dict] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"cutoffs": self.thresholds.cutoffs, "per_type": self.per_type}


def calibrate_thresholds(
    gold: Sequence[str],
    decisions: Sequence[Decision],
    target_precision: float,
) -> CalibrationResult:
    """Pick the smallest per-type cutoff meeting a precision target.

    For each type the candidate grid is 0.0 plus every observed
    decision probability for that type. Precision at a cutoff counts
    the kept decisions of the type that match gold. If no grid point
    reaches the target, the cutoff lands just above the highest
    observed probability (keeping nothing) and a warning is issued.
    A non-positive target keeps everything at cutoff 0.0.
    """
    if len(gold) != len(decisions):
        raise ValueError("gold and decisions differ in length")
    cutoffs: dict[str, float] = {}
    per_type: dict[str, dict] = {}
    for t in INTERACTION_TYPES:
        obs = [
            (d.probability, g == t)
            for g, d in zip(gold, decisions)
            if d.label == t
        ]
        gold_total = sum(1 for g in gold if g == t)
        flags: list[str] = []
        if target_precision <= 0.0:
            cutoff = 0.0
        elif not obs:
            cutoff = 0.0
            flags.append("no_predictions")
            warnings.warn(
                f"no validation decisions for type {t!r}; cutoff left at 0.0",
                stacklevel=2,
            )
        else:
            grid = [0.0] + sorted({p for p, _ in obs})
            cutoff = None
            for c in grid:
                kept = [(p, ok) for p, ok in obs if p >= c]
                if not kept:
                    continue
                precision = sum(1 for _, ok in kept if ok) / len(kept)
                if precision >= target_precision:
                    cutoff = c
                    break
            if cutoff is None:
                cutoff = max(p for p, _ in obs) + 1e-9
                flags.append("unattainable")
                warnings.warn(
                    f"precision target {target_precision} unattainable for "
                    f"type {t!r}; cutoff set above all observations",
                    stacklevel=2,
                )
        kept = [(p, ok) for p, ok in obs if p >= cutoff]
        kept_correct = sum(1 for _, ok in kept if ok)
        per_type[t] = {
            "cutoff": cutoff,
            "kept": len(kept),
            "precision": (kept_correct / len(kept)) if kept else None,
            "recall": (kept_correct / gold_total) if gold_total else None,
            "flags": flags,
        }
        cutoffs[t] = cutoff
    return CalibrationResult(thresholds=ThresholdConfig(cutoffs), per_type=per_type)


def highlight_participants(text: str, participant1: str, participant2: str) -> str:
    """Bracket both participant ids for display during review."""
    ids = sorted((participant1, participant2), key=len, reverse=True)
    pattern = re.compile(
        rf"(?<![{_TOKEN_CHARS}])(?:"
        + "|".join(re.escape(i) for i in ids)
        + rf")(?![{_TOKEN_CHARS}])"
    )
    return pattern.sub(lambda m: f"[[{m.group(0)}]]", text)


def sample_for_review(
    predictions: Sequence[TypedPrediction],
    per_type: int,
    seed: int = 0,
) -> list[TypedPrediction]:
    """Draw up to ``per_type`` kept calls of each type for manual review.

    One seeded generator draws the types in the fixed class order, so
    the selection is reproducible. Each type's pool and the final
    selection are canonically sorted.
    """
    if per_type < 0:
        raise ValueError("per_type must be non-negative")
    rng = random.Random(seed)
    chosen: list[TypedPrediction] = []
    for t in INTERACTION_TYPES:
        pool = sorted(
            (p for p in predictions if p.label == t),
            key=lambda p: (p.pmid, p.participant1, p.participant2),
        )
        take = min(per_type, len(pool))
        picked = rng.sample(pool, take) if take else []
        chosen.extend(
            sorted(picked, key=lambda p: (p.pmid, p.participant1, p.participant2))
        )
    return chosen


VERDICTS = ("correct", "incorrect", "ambiguous")


@dataclass
class ReviewItem:
    pmid: str
    participant1: str
    participant2: str
    label: str
    probability: float
    display_text: str
    verdict: str | None = None


@dataclass
class ReviewSession:
    """A resumable manual-review pass over sampled predictions."""

    items: list[ReviewItem] = field(default_factory=list)

    @classmethod
    def new(
        cls,
        predictions: Sequence[TypedPrediction],
        texts: Mapping[str, str] | None = None,
    ) -> "ReviewSession":
        """Build a fresh session; ``texts`` maps pmid to display text."""
        items = []
        for p in predictions:
            base = texts.get(p.pmid, "") if texts else ""
            display = (
                highlight_participants(base, p.participant1, p.participant2)
                if base
                else ""
            )
            items.append(
                ReviewItem(
                    pmid=p.pmid,
                    participant1=p.participant1,
                    participant2=p.participant2,
                    label=p.label,
                    probability=p.probability,
                    display_text=display,
                )
            )
        return cls(items=items)

    def pending(self) -> list[int]:
        return [i for i, item in enumerate(self.items) if item.verdict is None]

    def record(self, index: int, verdict: str) -> None:
        if verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {verdict!r}")
        self.items[index].verdict = verdict

    def save(self, path: str | Path) -> None:
        payload = {
            "format_version": 1,
            "items": [dataclasses.asdict(item) for item in self.items],
        }
        tmp = Path(path).with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        tmp.replace(path)

    @classmethod
    def load(cls, path: str | Path) -> "ReviewSession":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format_version") != 1:
            raise ValueError(
                f"unsupported review session version: {payload.get('format_version')!r}"
            )
        items = [ReviewItem(**obj) for obj in payload["items"]]
        return cls(items=items)

    def precision_report(self) -> dict:
        """Precision over decided items; ambiguous ones are excluded."""

        def _block(items: Sequence[ReviewItem]) -> dict:
            correct = sum(1 for i in items if i.verdict == "correct")
            incorrect = sum(1 for i in items if i.verdict == "incorrect")
            ambiguous = sum(1 for i in items if i.verdict == "ambiguous")
            decided = correct + incorrect
            return {
                "reviewed": sum(1 for i in items if i.verdict is not None),
                "correct": correct,
                "incorrect": incorrect,
                "ambiguous": ambiguous,
                "precision": (correct / decided) if decided else None,
            }

        report = {
            "overall": _block(self.items),
            "per_type": {},
            "pending": len(self.pending()),
        }
        for t in INTERACTION_TYPES:
            members = [i for i in self.items if i.label == t]
            if members:
                report["per_type"][t] = _block(members)
        return report


_PROMPT = "[c]orrect / [i]ncorrect / [a]mbiguous / [q]uit: "
_KEYMAP = {"c": "correct", "i": "incorrect", "a": "ambiguous"}


def run_review(
    session: ReviewSession,
    state_path: str | Path,
    input_fn: Callable[[str], str] = input,
    print_fn: Callable[[str], None] = print,
) -> ReviewSession:
    """Interactive review loop; state is saved after every verdict."""
    pending = session.pending()
    total = len(session.items)
    for index in pending:
        item = session.items[index]
        print_fn("")
        print_fn(
            f"[{index + 1}/{total}] pmid {item.pmid}: "
            f"{item.participant1} / {item.participant2} -> "
            f"{item.label} (p={item.probability:.4f})"
        )
        if item.display_text:
            print_fn(item.display_text)
        while True:
            answer = input_fn(_PROMPT).strip().lower()
            if answer == "q":
                session.save(state_path)
                print_fn("stopping; session saved")
                return session
            if answer in _KEYMAP:
                session.record(index, _KEYMAP[answer])
                session.save(state_path)
                break
            print_fn("please answer c, i, a, or q")
    session.save(state_path)
    report = session.precision_report()
    print_fn("")
    print_fn(json.dumps(report, indent=2))
    return session
