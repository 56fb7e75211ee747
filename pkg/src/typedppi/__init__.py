"""Typed protein-interaction extraction from literature abstracts.

The package builds a weakly supervised dataset by joining interaction
records with entity-annotated abstracts, trains a deep ensemble of text
classifiers over participant-masked text, and runs a high-precision
extraction pipeline with per-type probability cutoffs and a manual
review loop.
"""

from .labels import (
    CLASS_ORDER,
    INTERACTION_TYPES,
    N_CLASSES,
    NEGATIVE_LABEL,
    POSITIVE_LABEL,
)
from .records import (
    AbstractRecord,
    EntityMention,
    InteractionRecord,
    LabeledSample,
    NormalizedAbstract,
    SkipReport,
    TypedPrediction,
)

__version__ = "0.1.0"

__all__ = [
    "CLASS_ORDER",
    "INTERACTION_TYPES",
    "N_CLASSES",
    "NEGATIVE_LABEL",
    "POSITIVE_LABEL",
    "AbstractRecord",
    "EntityMention",
    "InteractionRecord",
    "LabeledSample",
    "NormalizedAbstract",
    "SkipReport",
    "TypedPrediction",
    "__version__",
]
