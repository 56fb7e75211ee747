"""Parser for PubTator-style entity annotation files.

Format: blank-line separated blocks of

    <pmid>|t|<title>
    <pmid>|a|<abstract>
    <pmid>\t<start>\t<end>\t<surface>\t<kind>\t<id>

Offsets are interpreted against ``title + " " + abstract``.
"""

from __future__ import annotations

import re
from typing import BinaryIO, Iterator, Mapping

from ..records import AbstractRecord, EntityMention, SkipReport

_TITLE_LINE = re.compile(r"^([^|\t]+)\|t\|(.*)$")
_ABSTRACT_LINE = re.compile(r"^([^|\t]+)\|a\|(.*)$")


def _parse_block(
    block: list[str],
    id_map: Mapping[str, str],
    report: SkipReport,
) -> tuple[AbstractRecord, list[EntityMention]] | None:
    title_match = _TITLE_LINE.match(block[0]) if block else None
    if title_match is None:
        report.add("pubtator_missing_title")
        return None
    abstract_match = _ABSTRACT_LINE.match(block[1]) if len(block) > 1 else None
    if abstract_match is None or abstract_match.group(1) != title_match.group(1):
        report.add("pubtator_missing_abstract")
        return None
    pmid = title_match.group(1)
    title = title_match.group(2)
    abstract = abstract_match.group(2)
    record = AbstractRecord(pmid=pmid, title=title, body=abstract)
    doc = record.doc_text

    mentions: list[EntityMention] = []
    for line in block[2:]:
        fields = line.split("\t")
        if len(fields) not in (5, 6):
            report.add("pubtator_bad_mention_line")
            continue
        if fields[0] != pmid:
            report.add("pubtator_pmid_mismatch")
            continue
        try:
            start, end = int(fields[1]), int(fields[2])
        except ValueError:
            report.add("pubtator_bad_offsets")
            continue
        surface, kind = fields[3], fields[4]
        raw_id = fields[5] if len(fields) == 6 else ""
        if not (0 <= start < end <= len(doc)) or doc[start:end] != surface:
            report.add("pubtator_span_mismatch")
            continue
        mentions.append(
            EntityMention(
                pmid=pmid,
                start=start,
                end=end,
                surface=surface,
                entity_kind=kind,
                norm_id=id_map.get(raw_id) if raw_id else None,
            )
        )
    return record, mentions


def parse_pubtator(
    stream: BinaryIO,
    id_map: Mapping[str, str] | None = None,
    report: SkipReport | None = None,
) -> Iterator[tuple[AbstractRecord, list[EntityMention]]]:
    """Yield (abstract, mentions) per block, one block in memory at a time.

    Mention ids are mapped to protein identifiers through ``id_map``;
    unmapped ids leave ``norm_id`` unset.  Mentions whose span does not
    reproduce the stated surface are dropped and counted, as are blocks
    missing their title or abstract line.
    """
    if id_map is None:
        id_map = {}
    if report is None:
        report = SkipReport()
    block: list[str] = []
    for raw in stream:
        line = raw.decode("utf-8", errors="replace").rstrip("\r\n")
        if line:
            block.append(line)
            continue
        if block:
            parsed = _parse_block(block, id_map, report)
            if parsed is not None:
                yield parsed
            block = []
    if block:
        parsed = _parse_block(block, id_map, report)
        if parsed is not None:
            yield parsed
