"""Fine-tuning hyperparameters.

None of these defaults carry special meaning; they are pragmatic
choices sized so a desk-scale run finishes in minutes. The default
base model is a small biomedical-domain encoder; any model id or local
checkpoint path that AutoModelForSequenceClassification accepts works,
including full-size biomedical encoders.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class FineTuneConfig:
    pretrained_model: str = "nlpie/tiny-biobert"
    max_seq_length: int = 512
    learning_rate: float = 2e-5
    epochs: int = 3
    dropout: float = 0.1
    member_count: int = 10
    base_seed: int = 0
    batch_size: int = 8

    def __post_init__(self) -> None:
        if self.member_count < 1:
            raise ValueError("member_count must be at least 1")
        if self.max_seq_length <= 0:
            raise ValueError("max_seq_length must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must lie in [0, 1)")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")

    def to_json(self) -> dict:
        return asdict(self)


def config_from_json(d: dict) -> FineTuneConfig:
    return FineTuneConfig(**d)
