"""Parser for PSI-MITAB style interaction tables.

Only the columns this pipeline consumes are interpreted: the two
interactor identifier columns (0, 1), the publication identifiers
(column 8) and the interaction type (column 11).  Everything else is
carried through untouched or ignored.
"""

from __future__ import annotations

import re
from typing import BinaryIO, Iterable, Iterator

from ..labels import UNTYPED
from ..records import InteractionRecord, SkipReport

# Columns we interpret; MITAB 2.5 rows have 15, later versions more.
_MIN_COLUMNS = 12
_COL_ID_A = 0
_COL_ID_B = 1
_COL_PUBLICATION = 8
_COL_INTERACTION_TYPE = 11

_QUOTED_TERM = re.compile(r'"([^"]*)"')
_PAREN_LABEL = re.compile(r"\(([^()]*)\)\s*$")


def _split_field(field: str) -> list[str]:
    field = field.strip()
    if field in ("", "-"):
        return []
    return field.split("|")


def _parse_xref(entry: str) -> tuple[str, str]:
    """Split ``prefix:value`` keeping any further colons inside the value."""
    prefix, sep, value = entry.partition(":")
    if not sep:
        return "", entry.strip()
    return prefix.strip(), value.strip().strip('"')


def _interactor(column: str) -> tuple[str | None, int]:
    """Return (participant identifier, molecule count) for one ID column.

    Each xref prefix enumerates the molecules listed in the column, so the
    molecule count is the largest number of distinct values sharing one
    prefix.  The participant identifier is the first uniprotkb value when
    present, else the first value of any prefix, with the prefix stripped.
    """
    entries = [_parse_xref(e) for e in _split_field(column)]
    entries = [(p, v) for p, v in entries if v]
    if not entries:
        return None, 0
    per_prefix: dict[str, set[str]] = {}
    for prefix, value in entries:
        per_prefix.setdefault(prefix, set()).add(value)
    count = max(len(values) for values in per_prefix.values())
    participant = next((v for p, v in entries if p == "uniprotkb"), entries[0][1])
    return participant, count


def _publication_pmid(column: str) -> str | None:
    for entry in _split_field(column):
        prefix, value = _parse_xref(entry)
        if prefix == "pubmed" and value.isdigit():
            return value
    return None


def _interaction_type(column: str, type_map: dict[str, str]) -> str:
    """Look up the row's interaction-type term in the configured map.

    Terms are matched first by the quoted controlled-vocabulary code
    (e.g. ``MI:0217``), then by the parenthesized label.  Unmapped terms
    yield the untyped sentinel.
    """
    for entry in _split_field(column):
        code_match = _QUOTED_TERM.search(entry)
        if code_match and code_match.group(1) in type_map:
            return type_map[code_match.group(1)]
        label_match = _PAREN_LABEL.search(entry)
        if label_match and label_match.group(1) in type_map:
            return type_map[label_match.group(1)]
    return UNTYPED


def parse_mitab(
    stream: BinaryIO,
    type_map: dict[str, str],
    report: SkipReport | None = None,
) -> Iterator[InteractionRecord]:
    """Yield one InteractionRecord per usable row.

    Rows with too few columns, no usable interactor identifier, or no
    parseable pubmed identifier are skipped and counted.  Header lines
    start with ``#``.
    """
    if report is None:
        report = SkipReport()
    for raw in stream:
        line = raw.decode("utf-8", errors="replace").rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) < _MIN_COLUMNS:
            report.add("mitab_wrong_column_count")
            continue
        participant_a, count_a = _interactor(columns[_COL_ID_A])
        participant_b, count_b = _interactor(columns[_COL_ID_B])
        if participant_a is None or participant_b is None:
            report.add("mitab_missing_interactor")
            continue
        pmid = _publication_pmid(columns[_COL_PUBLICATION])
        if pmid is None:
            report.add("mitab_unparseable_publication")
            continue
        yield InteractionRecord(
            participant_a=participant_a,
            participant_b=participant_b,
            itype=_interaction_type(columns[_COL_INTERACTION_TYPE], type_map),
            pmid=pmid,
            n_participants=count_a + count_b,
        )


def filter_binary(records: Iterable[InteractionRecord]) -> Iterator[InteractionRecord]:
    """Keep exactly the two-participant records with distinct participants.

    Self-pairs are excluded: masking needs two distinct markers.
    """
    for record in records:
        if record.n_participants == 2 and record.participant_a != record.participant_b:
            yield record


def dedupe_interactions(
    records: Iterable[InteractionRecord],
) -> tuple[list[InteractionRecord], int]:
    """Drop repeated (pair, type, pmid) rows, keeping the first.

    The pair is unordered.  Returns the retained records and the number
    of duplicates removed.
    """
    seen: set[tuple[str, frozenset[str], str]] = set()
    kept: list[InteractionRecord] = []
    dropped = 0
    for record in records:
        key = (record.pmid, record.pair, record.itype)
        if key in seen:
            dropped += 1
            continue
        seen.add(key)
        kept.append(record)
    return kept, dropped
