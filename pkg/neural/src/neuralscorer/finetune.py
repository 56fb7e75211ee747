"""Fine-tune an ensemble of transformer classifiers.

Members share the dataset, the encoding, and every hyperparameter;
they differ only in their seed, which drives the classification-head
initialization, the epoch shuffles, and the dropout draws. With the
same seed and dropout disabled, two members come out identical.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import torch
from transformers import (
    AutoConfig,
    AutoModelForSequenceClassification,
    AutoTokenizer,
)

from .config import FineTuneConfig
from .data import DatasetRow, label_indices, read_dataset_tsv, rows_for_split
from .labels import CLASS_ORDER

MANIFEST_NAME = "members.json"
FORMAT_VERSION = 1

_DROPOUT_FIELDS = (
    "hidden_dropout_prob",
    "attention_probs_dropout_prob",
    "classifier_dropout",
)


def _seed_everything(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed % (1 << 32))
    torch.manual_seed(seed)


@dataclass
class EncodedBatchSet:
    input_ids: torch.Tensor
    attention_mask: torch.Tensor
    truncated: int


def encode_texts(
    tokenizer,
    rows: Sequence[DatasetRow],
    max_seq_length: int,
) -> EncodedBatchSet:
    """Tokenize masked abstracts whole, truncating tails with a warning."""
    texts = [r.masked_text for r in rows]
    lengths = [
        len(ids)
        for ids in tokenizer(texts, truncation=False)["input_ids"]
    ]
    truncated = 0
    for row, n in zip(rows, lengths):
        if n > max_seq_length:
            truncated += 1
            warnings.warn(
                f"abstract {row.pmid} ({row.participant1}/{row.participant2})"
                f" is {n} tokens, over the {max_seq_length}-token limit;"
                " tail truncated",
                stacklevel=2,
            )
    enc = tokenizer(
        texts,
        truncation=True,
        max_length=max_seq_length,
        padding=True,
        return_tensors="pt",
    )
    return EncodedBatchSet(
        input_ids=enc["input_ids"],
        attention_mask=enc["attention_mask"],
        truncated=truncated,
    )


def _build_member(config: FineTuneConfig):
    """Fresh model with an 8-logit head; head init uses the torch RNG."""
    model_config = AutoConfig.from_pretrained(config.pretrained_model)
    model_config.num_labels = len(CLASS_ORDER)
    for field in _DROPOUT_FIELDS:
        if hasattr(model_config, field):
            setattr(model_config, field, config.dropout)
    model = AutoModelForSequenceClassification.from_pretrained(
        config.pretrained_model, config=model_config
    )
    for p in model.parameters():
        p.requires_grad_(True)
    return model


def _mean_loss(
    model,
    enc: EncodedBatchSet,
    labels: torch.Tensor,
    batch_size: int,
) -> float:
    loss_fn = torch.nn.CrossEntropyLoss(reduction="sum")
    model.eval()
    total = 0.0
    with torch.no_grad():
        for start in range(0, len(labels), batch_size):
            stop = start + batch_size
            out = model(
                input_ids=enc.input_ids[start:stop],
                attention_mask=enc.attention_mask[start:stop],
            )
            total += float(loss_fn(out.logits, labels[start:stop]))
    return total / len(labels)


# Gradients are clipped to this norm every step; fine-tuning small
# transformers at practical learning rates diverges without it.
MAX_GRAD_NORM = 1.0


def _train_member(
    model,
    enc: EncodedBatchSet,
    labels: torch.Tensor,
    config: FineTuneConfig,
    seed: int,
) -> None:
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    shuffler = torch.Generator().manual_seed(seed)
    model.train()
    n = len(labels)
    for _ in range(config.epochs):
        perm = torch.randperm(n, generator=shuffler)
        for start in range(0, n, config.batch_size):
            batch = perm[start : start + config.batch_size]
            out = model(
                input_ids=enc.input_ids[batch],
                attention_mask=enc.attention_mask[batch],
                labels=labels[batch],
            )
            out.loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), MAX_GRAD_NORM)
            optimizer.step()
            optimizer.zero_grad()


def fine_tune(
    dataset_path: str | Path,
    config: FineTuneConfig,
    out_dir: str | Path,
    member_seeds: Sequence[int] | None = None,
    progress_fn: Callable[[str], None] | None = None,
) -> dict:
    """Train ``config.member_count`` members and save them under ``out_dir``.

    Returns the manifest, which is also written to ``out_dir/members.json``.
    Training reads the "train" split; validation loss (before and after
    training, per member) comes from the "val" split when it has rows.
    """
    if member_seeds is None:
        member_seeds = [config.base_seed + i for i in range(config.member_count)]
    elif len(member_seeds) != config.member_count:
        raise ValueError("member_seeds length must equal member_count")
    member_seeds = [int(s) for s in member_seeds]

    rows = read_dataset_tsv(dataset_path)
    train_rows = rows_for_split(rows, "train")
    if not train_rows:
        raise ValueError(f"{dataset_path}: no rows in the train split")
    val_rows = rows_for_split(rows, "val")

    tokenizer = AutoTokenizer.from_pretrained(config.pretrained_model)
    train_enc = encode_texts(tokenizer, train_rows, config.max_seq_length)
    train_labels = torch.tensor(label_indices(train_rows), dtype=torch.long)
    val_enc = None
    val_labels = None
    if val_rows:
        val_enc = encode_texts(tokenizer, val_rows, config.max_seq_length)
        val_labels = torch.tensor(label_indices(val_rows), dtype=torch.long)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tokenizer.save_pretrained(out_dir)

    members = []
    for i, seed in enumerate(member_seeds):
        model_id = f"member-{i:02d}"
        if progress_fn is not None:
            progress_fn(f"training {model_id} (seed {seed})")
        _seed_everything(seed)
        model = _build_member(config)
        untrained_val_loss = None
        val_loss = None
        if val_rows:
            untrained_val_loss = _mean_loss(
                model, val_enc, val_labels, config.batch_size
            )
        _train_member(model, train_enc, train_labels, config, seed)
        if val_rows:
            val_loss = _mean_loss(model, val_enc, val_labels, config.batch_size)
        member_dir = out_dir / model_id
        model.save_pretrained(member_dir)
        members.append(
            {
                "model_id": model_id,
                "seed": seed,
                "dir": model_id,
                "untrained_val_loss": untrained_val_loss,
                "val_loss": val_loss,
            }
        )

    manifest = {
        "format_version": FORMAT_VERSION,
        "class_order": list(CLASS_ORDER),
        "config": config.to_json(),
        "member_seeds": member_seeds,
        "members": members,
        "counts": {
            "train_rows": len(train_rows),
            "val_rows": len(val_rows),
            "truncated_records": train_enc.truncated
            + (val_enc.truncated if val_enc is not None else 0),
        },
    }
    with open(out_dir / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def read_manifest(models_dir: str | Path) -> dict:
    path = Path(models_dir) / MANIFEST_NAME
    with open(path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format_version") != FORMAT_VERSION:
        raise ValueError(
            f"{path}: format_version {manifest.get('format_version')!r},"
            f" expected {FORMAT_VERSION}"
        )
    if tuple(manifest.get("class_order", ())) != CLASS_ORDER:
        raise ValueError(
            f"{path}: class order mismatch:"
            f" {manifest.get('class_order')} != {list(CLASS_ORDER)}"
        )
    return manifest
