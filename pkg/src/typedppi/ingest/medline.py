"""Streaming parser for MEDLINE/PubMed baseline style XML.

Reads citation elements incrementally so that memory stays bounded by a
single citation regardless of file size.  Whole-corpus concerns such as
pmid uniqueness are handled by the assembly layer, not here.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from collections import deque
from typing import BinaryIO, Iterator

from ..records import AbstractRecord, SkipReport

_CHUNK_SIZE = 1 << 16
_PRUNE_EVERY = 64


class MedlineParseError(ValueError):
    """Malformed XML; carries the byte offset where parsing failed."""

    def __init__(self, message: str, byte_offset: int, line: int, column: int):
        super().__init__(
            f"{message} at byte offset {byte_offset} (line {line}, column {column})"
        )
        self.byte_offset = byte_offset
        self.line = line
        self.column = column


class _LineOffsetTracker:
    """Maps expat (line, column) error positions back to byte offsets."""

    def __init__(self, window: int = 4096):
        self.bytes_fed = 0
        self._line = 1
        self._line_start = 0
        # (line number, byte offset of line start) for recent lines
        self._recent: deque[tuple[int, int]] = deque(maxlen=window)
        self._recent.append((1, 0))

    def feed(self, chunk: bytes) -> None:
        pos = chunk.find(b"\n")
        while pos != -1:
            self._line += 1
            self._line_start = self.bytes_fed + pos + 1
            self._recent.append((self._line, self._line_start))
            pos = chunk.find(b"\n", pos + 1)
        self.bytes_fed += len(chunk)

    def offset_for(self, line: int, column: int) -> int:
        if line == self._line:
            return self._line_start + column
        for ln, start in reversed(self._recent):
            if ln == line:
                return start + column
        return self.bytes_fed


def _citation_to_record(elem: ET.Element, report: SkipReport) -> AbstractRecord | None:
    pmid_el = elem.find("PMID")
    pmid = (pmid_el.text or "").strip() if pmid_el is not None else ""
    if not pmid:
        report.add("medline_missing_pmid")
        return None
    article = elem.find("Article")
    title = ""
    body = ""
    if article is not None:
        title_el = article.find("ArticleTitle")
        if title_el is not None:
            title = "".join(title_el.itertext()).strip()
        abstract_el = article.find("Abstract")
        if abstract_el is not None:
            segments = [
                "".join(seg.itertext()).strip()
                for seg in abstract_el.findall("AbstractText")
            ]
            body = " ".join(s for s in segments if s)
    return AbstractRecord(pmid=pmid, title=title, body=body)


def parse_medline(
    stream: BinaryIO, report: SkipReport | None = None
) -> Iterator[AbstractRecord]:
    """Yield one AbstractRecord per citation element.

    Multiple abstract segments are concatenated in document order separated
    by a single space; citations with no abstract yield ``body == ""``.
    Citations without a PMID are skipped and counted in ``report``.

    Raises MedlineParseError (naming the byte offset) on malformed XML.
    """
    if report is None:
        report = SkipReport()
    parser = ET.XMLPullParser(events=("start", "end"))
    tracker = _LineOffsetTracker()
    root: ET.Element | None = None
    since_prune = 0

    def events_after(feed_chunk: bytes | None) -> list:
        # The pull parser defers syntax errors to read_events(), so the
        # event stream must be drained inside the handler too.
        nonlocal root
        try:
            if feed_chunk is None:
                parser.close()
            else:
                tracker.feed(feed_chunk)
                parser.feed(feed_chunk)
            return list(parser.read_events())
        except ET.ParseError as exc:
            line, column = exc.position
            raise MedlineParseError(
                f"malformed XML: {exc.msg.split(':')[0]}",
                tracker.offset_for(line, column),
                line,
                column,
            ) from exc

    def handle(event: str, elem: ET.Element) -> AbstractRecord | None:
        nonlocal root, since_prune
        if event == "start":
            if root is None:
                root = elem
            return None
        if elem.tag != "MedlineCitation":
            return None
        record = _citation_to_record(elem, report)
        elem.clear()
        since_prune += 1
        # Drop completed citation shells from the root so a multi-million
        # record file does not accumulate empty elements.  The last child
        # is still open and must be kept.
        if root is not None and since_prune >= _PRUNE_EVERY and len(root) > 1:
            del root[:-1]
            since_prune = 0
        return record

    while True:
        chunk = stream.read(_CHUNK_SIZE)
        if not chunk:
            break
        for event, elem in events_after(chunk):
            record = handle(event, elem)
            if record is not None:
                yield record
    for event, elem in events_after(None):
        record = handle(event, elem)
        if record is not None:
            yield record
