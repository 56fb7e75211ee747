"""Weakly supervised dataset construction.

The builder joins three inputs that are already parsed and assembled:
abstracts, entity mentions (with normalized protein ids), and binary
typed interactions. Positives come from the interaction records;
negatives are enumerated from co-mentioned protein pairs that are not
annotated with the type in question.
"""

from __future__ import annotations

import csv
import dataclasses
import random
import re
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .labels import (
    CLASS_INDEX,
    CLASS_ORDER,
    INTERACTION_TYPES,
    NEGATIVE_LABEL,
    POSITIVE_LABEL,
    PROTEIN1_MARKER,
    PROTEIN2_MARKER,
    UNTYPED,
)
from .records import (
    AbstractRecord,
    EntityMention,
    InteractionRecord,
    LabeledSample,
    NormalizedAbstract,
    SkipReport,
)

# Characters that can extend an identifier token; replacements must not
# fire inside a longer token.
_TOKEN_CHARS = r"A-Za-z0-9_\-"

SPLITS = ("train", "val", "test")
DEFAULT_SPLIT_RATIOS = (0.71, 0.09, 0.20)

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


class ParticipantNotPresentError(ValueError):
    """A participant id is not a whole token of the normalized text."""


class SmallStratumWarning(UserWarning):
    """A stratum had too few documents to spread across the splits."""


def _token_pattern(token: str) -> re.Pattern[str]:
    return re.compile(
        rf"(?<![{_TOKEN_CHARS}]){re.escape(token)}(?![{_TOKEN_CHARS}])"
    )


def select_mentions(
    record: AbstractRecord,
    mentions: Sequence[EntityMention],
    report: SkipReport | None = None,
) -> list[EntityMention]:
    """Pick a non-overlapping set of mapped mentions, longest span first.

    Ties on length go to the leftmost mention. Mentions without a
    normalized id or with spans that do not match the document text are
    ignored.
    """
    doc = record.doc_text
    candidates = []
    for m in mentions:
        if m.norm_id is None:
            continue
        if not (0 <= m.start < m.end <= len(doc)) or doc[m.start : m.end] != m.surface:
            if report is not None:
                report.add("mention_span_invalid")
            continue
        candidates.append(m)
    candidates.sort(key=lambda m: (-(m.end - m.start), m.start))
    chosen: list[EntityMention] = []
    for m in candidates:
        if all(m.end <= c.start or m.start >= c.end for c in chosen):
            chosen.append(m)
    chosen.sort(key=lambda m: m.start)
    return chosen


def normalize_abstract(
    record: AbstractRecord,
    mentions: Sequence[EntityMention],
    report: SkipReport | None = None,
) -> NormalizedAbstract:
    """Replace mention spans with normalized ids and collect present ids.

    An id counts as present only if, after substitution, it occurs in
    the text as a whole token.
    """
    doc = record.doc_text
    chosen = select_mentions(record, mentions, report)
    text = doc
    for m in sorted(chosen, key=lambda m: m.start, reverse=True):
        text = text[: m.start] + m.norm_id + text[m.end :]
    substituted = {m.norm_id for m in chosen}
    present = frozenset(
        pid for pid in substituted if _token_pattern(pid).search(text)
    )
    return NormalizedAbstract(
        pmid=record.pmid, text=text, present_ids=present, raw_text=doc
    )


def normalize_corpus(
    abstracts: Iterable[AbstractRecord],
    mentions: Iterable[EntityMention],
    report: SkipReport | None = None,
) -> dict[str, NormalizedAbstract]:
    """Normalize every abstract against its own mentions."""
    by_pmid: dict[str, list[EntityMention]] = defaultdict(list)
    for m in mentions:
        by_pmid[m.pmid].append(m)
    normalized = {}
    for rec in abstracts:
        normalized[rec.pmid] = normalize_abstract(rec, by_pmid.get(rec.pmid, ()), report)
    return normalized


def pair_gold(samples: Iterable[LabeledSample]) -> dict[tuple[str, str, str], str]:
    """Gold label per pair: its positive type if any, else negative.

    The builder admits at most one positive type per pair, so the
    positive label is unambiguous.
    """
    gold: dict[tuple[str, str, str], str] = {}
    for s in samples:
        key = (s.pmid, s.participant1, s.participant2)
        if s.label != NEGATIVE_LABEL:
            gold[key] = s.label
        else:
            gold.setdefault(key, NEGATIVE_LABEL)
    return gold


def order_participants(text: str, id_a: str, id_b: str) -> tuple[str, str]:
    """Order two ids by first whole-token occurrence in the text."""
    matches = {}
    for pid in (id_a, id_b):
        m = _token_pattern(pid).search(text)
        if m is None:
            raise ParticipantNotPresentError(
                f"participant {pid!r} not present in text"
            )
        matches[pid] = m.start()
    if matches[id_a] == matches[id_b]:
        return tuple(sorted((id_a, id_b)))  # type: ignore[return-value]
    return (id_a, id_b) if matches[id_a] < matches[id_b] else (id_b, id_a)


def mask_participants(text: str, participant1: str, participant2: str) -> str:
    """Replace the two participant ids with the fixed marker tokens.

    Replacement is done in a single pass so markers never interact with
    the ids being replaced. Every whole-token occurrence is replaced.
    """
    marker = {participant1: PROTEIN1_MARKER, participant2: PROTEIN2_MARKER}
    ids = sorted(marker, key=len, reverse=True)
    pattern = re.compile(
        rf"(?<![{_TOKEN_CHARS}])(?:"
        + "|".join(re.escape(i) for i in ids)
        + rf")(?![{_TOKEN_CHARS}])"
    )
    counts = Counter()

    def _sub(m: re.Match[str]) -> str:
        counts[m.group(0)] += 1
        return marker[m.group(0)]

    masked = pattern.sub(_sub, text)
    for pid in (participant1, participant2):
        if counts[pid] == 0:
            raise ParticipantNotPresentError(
                f"participant {pid!r} not present in text"
            )
    return masked


def _index_annotations(
    interactions: Iterable[InteractionRecord],
    report: SkipReport | None,
) -> tuple[
    dict[str, set[tuple[frozenset[str], str]]],
    dict[str, set[str]],
    list[InteractionRecord],
]:
    """Index typed binary interactions for positive and negative logic.

    Returns the annotated (pair, type) sets per pmid, the set of types
    annotated per pmid, and the typed records that survive the
    at-most-one-type-per-pair rule (lowest class index wins).
    """
    annotated: dict[str, set[tuple[frozenset[str], str]]] = defaultdict(set)
    types_here: dict[str, set[str]] = defaultdict(set)
    by_pair: dict[tuple[str, frozenset[str]], list[InteractionRecord]] = defaultdict(list)
    for rec in interactions:
        if rec.itype == UNTYPED:
            continue
        annotated[rec.pmid].add((rec.pair, rec.itype))
        types_here[rec.pmid].add(rec.itype)
        by_pair[(rec.pmid, rec.pair)].append(rec)
    retained: list[InteractionRecord] = []
    for key in sorted(by_pair, key=lambda k: (k[0], tuple(sorted(k[1])))):
        recs = sorted(by_pair[key], key=lambda r: CLASS_INDEX[r.itype])
        retained.append(recs[0])
        if report is not None:
            for _ in recs[1:]:
                report.add("positive_conflicting_types")
    return annotated, types_here, retained


def build_dataset(
    normalized: Mapping[str, NormalizedAbstract],
    interactions: Iterable[InteractionRecord],
    report: SkipReport | None = None,
) -> list[LabeledSample]:
    """Build the labeled multiclass samples for a corpus.

    ``interactions`` must already be binary (two distinct participants).
    Untyped records pass through unused: they neither create positives
    nor mark a type as annotated for a document, and they never block a
    negative.
    """
    annotated, types_here, retained = _index_annotations(interactions, report)

    samples: list[LabeledSample] = []
    for rec in retained:
        norm = normalized.get(rec.pmid)
        if norm is None:
            if report is not None:
                report.add("positive_dropped_pmid_missing")
            continue
        a, b = sorted(rec.pair)
        if a not in norm.present_ids or b not in norm.present_ids:
            if report is not None:
                report.add("positive_dropped_participant_absent")
            continue
        p1, p2 = order_participants(norm.text, a, b)
        samples.append(
            LabeledSample(
                pmid=rec.pmid,
                participant1=p1,
                participant2=p2,
                raw_text=norm.raw_text,
                masked_text=mask_participants(norm.text, p1, p2),
                label=rec.itype,
                assoc_type=rec.itype,
            )
        )

    for pmid in sorted(normalized):
        norm = normalized[pmid]
        types = sorted(types_here.get(pmid, ()), key=lambda t: CLASS_INDEX[t])
        if not types:
            continue
        present = sorted(norm.present_ids)
        pos_here = annotated.get(pmid, set())
        for i, a in enumerate(present):
            for b in present[i + 1 :]:
                pair = frozenset((a, b))
                for t in types:
                    if (pair, t) in pos_here:
                        continue
                    p1, p2 = order_participants(norm.text, a, b)
                    samples.append(
                        LabeledSample(
                            pmid=pmid,
                            participant1=p1,
                            participant2=p2,
                            raw_text=norm.raw_text,
                            masked_text=mask_participants(norm.text, p1, p2),
                            label=NEGATIVE_LABEL,
                            assoc_type=t,
                        )
                    )
    return sort_samples(samples)


def sort_samples(samples: Iterable[LabeledSample]) -> list[LabeledSample]:
    """Canonical order: pmid, participants, class, associated type."""
    return sorted(
        samples,
        key=lambda s: (
            s.pmid,
            s.participant1,
            s.participant2,
            CLASS_INDEX.get(s.label, len(CLASS_ORDER)),
            s.assoc_type,
        ),
    )


def derive_untyped(samples: Iterable[LabeledSample]) -> list[LabeledSample]:
    """Collapse per-type samples into one binary sample per pair.

    A pair is positive if any of its samples carries an interaction
    type; otherwise it is negative. The associated type column is left
    empty for the binary view.
    """
    groups: dict[tuple[str, str, str], list[LabeledSample]] = defaultdict(list)
    for s in samples:
        groups[(s.pmid, s.participant1, s.participant2)].append(s)
    out = []
    for key in sorted(groups):
        members = groups[key]
        positive = any(m.label != NEGATIVE_LABEL for m in members)
        first = members[0]
        out.append(
            dataclasses.replace(
                first,
                label=POSITIVE_LABEL if positive else NEGATIVE_LABEL,
                assoc_type="",
            )
        )
    return sort_samples(out)


def _stratum_label(members: Sequence[LabeledSample]) -> str:
    """Dominant positive class, falling back to dominant associated type.

    Count ties break toward the earlier class in the fixed order.
    """
    pos = Counter(s.label for s in members if s.label != NEGATIVE_LABEL)
    pool = pos if pos else Counter(s.assoc_type for s in members if s.assoc_type)
    if not pool:
        return NEGATIVE_LABEL
    return min(pool, key=lambda t: (-pool[t], CLASS_INDEX.get(t, len(CLASS_ORDER))))


def _largest_remainder(total: int, ratios: Sequence[float]) -> list[int]:
    quotas = [total * r for r in ratios]
    base = [int(q) for q in quotas]
    leftover = total - sum(base)
    order = sorted(
        range(len(ratios)), key=lambda i: (-(quotas[i] - base[i]), i)
    )
    for i in order[:leftover]:
        base[i] += 1
    return base


def split_dataset(
    samples: Sequence[LabeledSample],
    ratios: Sequence[float] = DEFAULT_SPLIT_RATIOS,
    seed: int = 0,
) -> list[LabeledSample]:
    """Assign train/val/test splits grouped by document.

    Documents are stratified by their dominant positive class and
    allocated per stratum with largest-remainder rounding. All samples
    of a document land in the same split. Strata with fewer documents
    than active splits go wholly to train, with a warning.
    """
    if len(ratios) != len(SPLITS):
        raise ValueError(f"expected {len(SPLITS)} ratios, got {len(ratios)}")
    if any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError("split ratios must be non-negative and sum to 1")

    by_pmid: dict[str, list[LabeledSample]] = defaultdict(list)
    for s in samples:
        by_pmid[s.pmid].append(s)

    strata: dict[str, list[str]] = defaultdict(list)
    for pmid in sorted(by_pmid):
        strata[_stratum_label(by_pmid[pmid])].append(pmid)

    active = sum(1 for r in ratios if r > 0)
    rng = random.Random(seed)
    assignment: dict[str, str] = {}
    stratum_order = sorted(
        strata, key=lambda t: CLASS_INDEX.get(t, len(CLASS_ORDER))
    )
    for label in stratum_order:
        pmids = sorted(strata[label])
        if len(pmids) < active:
            warnings.warn(
                f"stratum {label!r} has only {len(pmids)} document(s); "
                "assigning all to train",
                SmallStratumWarning,
                stacklevel=2,
            )
            for pmid in pmids:
                assignment[pmid] = "train"
            continue
        rng.shuffle(pmids)
        counts = _largest_remainder(len(pmids), ratios)
        cursor = 0
        for split, n in zip(SPLITS, counts):
            for pmid in pmids[cursor : cursor + n]:
                assignment[pmid] = split
            cursor += n
    return [dataclasses.replace(s, split=assignment[s.pmid]) for s in samples]


@dataclass
class DatasetStats:
    """Counts per split plus overall, with the positive/negative ratio."""

    splits: dict[str, dict] = field(default_factory=dict)
    overall: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"splits": self.splits, "overall": self.overall}


def _stat_block(members: Sequence[LabeledSample]) -> dict:
    positives = sum(1 for s in members if s.label != NEGATIVE_LABEL)
    negatives = sum(1 for s in members if s.label == NEGATIVE_LABEL)
    by_type = {
        t: sum(1 for s in members if s.label == t) for t in INTERACTION_TYPES
    }
    total = len(members)
    return {
        "samples": total,
        "positives": positives,
        "negatives": negatives,
        "by_type": by_type,
        "pmids": len({s.pmid for s in members}),
        "positive_negative_ratio": (positives / negatives) if negatives else None,
        "positive_fraction": (positives / total) if total else None,
    }


def compute_stats(samples: Sequence[LabeledSample]) -> DatasetStats:
    stats = DatasetStats()
    for split in SPLITS + ("unassigned",):
        members = [s for s in samples if s.split == split]
        if members or split in SPLITS:
            stats.splits[split] = _stat_block(members)
    if not stats.splits.get("unassigned", {}).get("samples", 0):
        stats.splits.pop("unassigned", None)
    stats.overall = _stat_block(list(samples))
    return stats


def dedupe_for_training(
    samples: Iterable[LabeledSample], report: SkipReport | None = None
) -> list[LabeledSample]:
    """Drop samples identical up to the associated type.

    Negative enumeration can emit the same pair once per annotated
    type; the classifier sees one copy.
    """
    seen: set[tuple[str, str, str, str]] = set()
    kept = []
    for s in samples:
        key = (s.pmid, s.participant1, s.participant2, s.label)
        if key in seen:
            if report is not None:
                report.add("training_duplicate_pair")
            continue
        seen.add(key)
        kept.append(s)
    return kept


def write_dataset_tsv(path: str | Path, samples: Iterable[LabeledSample]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(
            fh, delimiter="\t", quoting=csv.QUOTE_MINIMAL, lineterminator="\n"
        )
        writer.writerow(DATASET_COLUMNS)
        for s in samples:
            writer.writerow(
                [
                    s.participant1,
                    s.participant2,
                    s.pmid,
                    s.raw_text,
                    s.masked_text,
                    s.label,
                    s.assoc_type,
                    s.split,
                ]
            )


def read_dataset_tsv(path: str | Path) -> list[LabeledSample]:
    csv.field_size_limit(max(csv.field_size_limit(), 1 << 24))
    samples = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", lineterminator="\n")
        header = next(reader, None)
        if header is None or tuple(header) != DATASET_COLUMNS:
            raise ValueError(f"unexpected dataset header in {path}: {header}")
        for row in reader:
            if len(row) != len(DATASET_COLUMNS):
                raise ValueError(f"{path}: row with {len(row)} columns")
            p1, p2, pmid, raw, masked, label, assoc, split = row
            samples.append(
                LabeledSample(
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
    return samples
