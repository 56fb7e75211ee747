"""Label space shared by every stage of the pipeline.

The class order below is fixed: every probability vector, confusion matrix
and serialized prediction indexes classes in exactly this order.
"""

INTERACTION_TYPES: tuple[str, ...] = (
    "acetylation",
    "methylation",
    "demethylation",
    "phosphorylation",
    "dephosphorylation",
    "ubiquitination",
    "deubiquitination",
)

NEGATIVE_LABEL = "NEGATIVE"

#: Fixed multiclass order: the seven interaction types followed by NEGATIVE.
CLASS_ORDER: tuple[str, ...] = INTERACTION_TYPES + (NEGATIVE_LABEL,)

CLASS_INDEX: dict[str, int] = {label: i for i, label in enumerate(CLASS_ORDER)}

N_CLASSES = len(CLASS_ORDER)

#: Interaction rows whose type term is not in the type map.
UNTYPED = "untyped"

#: Label used by the binary (untyped) dataset variant.
POSITIVE_LABEL = "POSITIVE"

PROTEIN1_MARKER = "PROTEIN1"
PROTEIN2_MARKER = "PROTEIN2"


def class_index(label: str) -> int:
    """Index of ``label`` in the fixed class order."""
    try:
        return CLASS_INDEX[label]
    except KeyError:
        raise ValueError(f"unknown class label: {label!r}") from None
