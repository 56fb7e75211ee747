"""Deterministic JSONL serialization for the assembled corpus.

A corpus directory holds three line-oriented files plus a report:

- ``abstracts.jsonl``: one object per abstract, sorted by pmid
- ``mentions.jsonl``: one object per entity mention, sorted by
  (pmid, start, end, surface)
- ``interactions.jsonl``: one object per interaction record, sorted by
  (pmid, participants, type)
- ``ingest_report.json``: skip counters from the parse

Keys are emitted in a fixed order with compact separators so a rebuild
from the same inputs is byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from ..records import AbstractRecord, EntityMention, InteractionRecord, SkipReport

ABSTRACTS_FILE = "abstracts.jsonl"
MENTIONS_FILE = "mentions.jsonl"
INTERACTIONS_FILE = "interactions.jsonl"
REPORT_FILE = "ingest_report.json"


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def _abstract_obj(rec: AbstractRecord) -> dict:
    return {"pmid": rec.pmid, "title": rec.title, "body": rec.body}


def _mention_obj(m: EntityMention) -> dict:
    return {
        "pmid": m.pmid,
        "start": m.start,
        "end": m.end,
        "surface": m.surface,
        "entity_kind": m.entity_kind,
        "norm_id": m.norm_id,
    }


def _interaction_obj(r: InteractionRecord) -> dict:
    return {
        "participant_a": r.participant_a,
        "participant_b": r.participant_b,
        "itype": r.itype,
        "pmid": r.pmid,
        "n_participants": r.n_participants,
    }


def write_corpus(
    out_dir: str | Path,
    abstracts: Iterable[AbstractRecord],
    mentions: Iterable[EntityMention],
    interactions: Iterable[InteractionRecord],
    report: SkipReport | None = None,
) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    abs_sorted = sorted(abstracts, key=lambda r: r.pmid)
    men_sorted = sorted(mentions, key=lambda m: (m.pmid, m.start, m.end, m.surface))
    int_sorted = sorted(
        interactions,
        key=lambda r: (r.pmid, min(r.participant_a, r.participant_b),
                       max(r.participant_a, r.participant_b), r.itype),
    )

    with open(out / ABSTRACTS_FILE, "w", encoding="utf-8") as fh:
        for rec in abs_sorted:
            fh.write(_dumps(_abstract_obj(rec)) + "\n")
    with open(out / MENTIONS_FILE, "w", encoding="utf-8") as fh:
        for m in men_sorted:
            fh.write(_dumps(_mention_obj(m)) + "\n")
    with open(out / INTERACTIONS_FILE, "w", encoding="utf-8") as fh:
        for r in int_sorted:
            fh.write(_dumps(_interaction_obj(r)) + "\n")
    with open(out / REPORT_FILE, "w", encoding="utf-8") as fh:
        counts = report.as_dict() if report is not None else {}
        json.dump(counts, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_corpus(
    corpus_dir: str | Path,
) -> tuple[list[AbstractRecord], list[EntityMention], list[InteractionRecord]]:
    d = Path(corpus_dir)
    abstracts = []
    with open(d / ABSTRACTS_FILE, encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            abstracts.append(AbstractRecord(obj["pmid"], obj["title"], obj["body"]))
    mentions = []
    with open(d / MENTIONS_FILE, encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            mentions.append(
                EntityMention(
                    pmid=obj["pmid"],
                    start=obj["start"],
                    end=obj["end"],
                    surface=obj["surface"],
                    entity_kind=obj["entity_kind"],
                    norm_id=obj["norm_id"],
                )
            )
    interactions = []
    with open(d / INTERACTIONS_FILE, encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            interactions.append(
                InteractionRecord(
                    participant_a=obj["participant_a"],
                    participant_b=obj["participant_b"],
                    itype=obj["itype"],
                    pmid=obj["pmid"],
                    n_participants=obj["n_participants"],
                )
            )
    return abstracts, mentions, interactions


def dedupe_abstracts(
    records: Iterable[AbstractRecord], report: SkipReport | None = None
) -> list[AbstractRecord]:
    """Keep the first record per pmid; later duplicates are counted."""
    seen: set[str] = set()
    kept: list[AbstractRecord] = []
    for rec in records:
        if rec.pmid in seen:
            if report is not None:
                report.add("medline_duplicate_pmid")
            continue
        seen.add(rec.pmid)
        kept.append(rec)
    return kept
