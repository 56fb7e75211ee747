"""Core record types passed between pipeline stages."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass(frozen=True)
class AbstractRecord:
    """One publication abstract: identifier, title and body text."""

    pmid: str
    title: str
    body: str

    @property
    def doc_text(self) -> str:
        """Title and body as one document: ``title + " " + body``.

        Entity mention offsets are interpreted against this string.
        """
        return self.title + " " + self.body


@dataclass(frozen=True)
class EntityMention:
    """A recognized entity span inside an abstract's document text.

    ``start``/``end`` are character offsets into ``AbstractRecord.doc_text``
    (end exclusive).  ``norm_id`` carries the normalized protein identifier
    when the annotator's gene id could be mapped, else ``None``.
    """

    pmid: str
    start: int
    end: int
    surface: str
    entity_kind: str
    norm_id: str | None = None


@dataclass(frozen=True)
class InteractionRecord:
    """One database-curated interaction row."""

    participant_a: str
    participant_b: str
    itype: str
    pmid: str
    n_participants: int = 2

    @property
    def pair(self) -> frozenset[str]:
        return frozenset((self.participant_a, self.participant_b))


@dataclass(frozen=True)
class NormalizedAbstract:
    """Abstract text with mapped gene mentions replaced by protein ids.

    ``present_ids`` holds exactly the substituted identifiers that occur as
    whole tokens in ``text``; ``raw_text`` keeps the unmodified document.
    """

    pmid: str
    text: str
    present_ids: frozenset[str]
    raw_text: str


@dataclass(frozen=True)
class LabeledSample:
    """One training/evaluation unit of the weakly supervised dataset."""

    pmid: str
    participant1: str
    participant2: str
    raw_text: str
    masked_text: str
    label: str
    assoc_type: str
    split: str = "unassigned"


@dataclass(frozen=True)
class TypedPrediction:
    """An aggregated ensemble decision for one protein pair."""

    pmid: str
    participant1: str
    participant2: str
    label: str
    probability: float
    tie: bool = False


@dataclass
class SkipReport:
    """Counts of records dropped or skipped during parsing/building."""

    counts: Counter = field(default_factory=Counter)

    def add(self, reason: str, n: int = 1) -> None:
        self.counts[reason] += n

    def total(self) -> int:
        return sum(self.counts.values())

    def as_dict(self) -> dict[str, int]:
        return dict(sorted(self.counts.items()))

    def merge(self, other: "SkipReport") -> None:
        self.counts.update(other.counts)
