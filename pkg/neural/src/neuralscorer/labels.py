"""Fixed class order for the eight-way interaction classifier.

The order is embedded in every prediction file header, and readers on
the other side of the wire verify it before trusting any probability
vector, so this tuple must never be reordered.
"""

from __future__ import annotations

NEGATIVE_LABEL = "NEGATIVE"

CLASS_ORDER: tuple[str, ...] = (
    "acetylation",
    "methylation",
    "demethylation",
    "phosphorylation",
    "dephosphorylation",
    "ubiquitination",
    "deubiquitination",
    NEGATIVE_LABEL,
)

CLASS_INDEX = {label: i for i, label in enumerate(CLASS_ORDER)}
