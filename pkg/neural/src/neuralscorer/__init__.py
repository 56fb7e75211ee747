"""Transformer fine-tuning and ensemble export for typed interactions.

Consumes the labeled-sample TSV, trains an ensemble of sequence
classifiers that differ only in seed, and exports per-member class
probabilities in the shared JSON Lines format that the aggregation
side of the pipeline reads.
"""

from .config import FineTuneConfig
from .data import DatasetRow, read_dataset_tsv, rows_for_split
from .export import export_predictions, load_members, member_probabilities
from .finetune import fine_tune, read_manifest
from .labels import CLASS_INDEX, CLASS_ORDER, NEGATIVE_LABEL

__all__ = [
    "CLASS_INDEX",
    "CLASS_ORDER",
    "NEGATIVE_LABEL",
    "DatasetRow",
    "FineTuneConfig",
    "export_predictions",
    "fine_tune",
    "load_members",
    "member_probabilities",
    "read_dataset_tsv",
    "read_manifest",
    "rows_for_split",
]
