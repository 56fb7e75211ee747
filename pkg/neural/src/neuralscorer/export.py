"""Export per-member probabilities as JSON Lines.

The first line is a header object carrying the class order and the
model ids; each following line is one (sample, member) probability
vector. Softmax runs in float64, so every probs row sums to 1 within
far less than the 1e-6 the wire contract allows.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np
import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .config import FineTuneConfig, config_from_json
from .data import DatasetRow
from .finetune import encode_texts, read_manifest
from .labels import CLASS_ORDER


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def load_members(models_dir: str | Path):
    """Load the tokenizer and every member model, in manifest order."""
    models_dir = Path(models_dir)
    manifest = read_manifest(models_dir)
    tokenizer = AutoTokenizer.from_pretrained(models_dir)
    members = []
    for entry in manifest["members"]:
        model = AutoModelForSequenceClassification.from_pretrained(
            models_dir / entry["dir"]
        )
        model.eval()
        members.append((entry["model_id"], model))
    return manifest, tokenizer, members


def member_probabilities(
    members,
    tokenizer,
    rows: Sequence[DatasetRow],
    config: FineTuneConfig,
    batch_size: int = 32,
) -> np.ndarray:
    """Probabilities with shape (members, samples, classes), float64."""
    enc = encode_texts(tokenizer, rows, config.max_seq_length)
    out = np.empty((len(members), len(rows), len(CLASS_ORDER)))
    with torch.no_grad():
        for m, (_, model) in enumerate(members):
            for start in range(0, len(rows), batch_size):
                stop = start + batch_size
                logits = model(
                    input_ids=enc.input_ids[start:stop],
                    attention_mask=enc.attention_mask[start:stop],
                ).logits
                probs = torch.softmax(logits.double(), dim=-1)
                out[m, start:stop] = probs.numpy()
    return out


def export_predictions(
    models_dir: str | Path,
    rows: Sequence[DatasetRow],
    out_path: str | Path,
) -> dict:
    """Write one header line plus one line per (sample, member)."""
    manifest, tokenizer, members = load_members(models_dir)
    config = config_from_json(manifest["config"])
    probs = member_probabilities(members, tokenizer, rows, config)
    model_ids = [model_id for model_id, _ in members]
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(
            _dumps({"class_order": list(CLASS_ORDER), "model_ids": model_ids})
            + "\n"
        )
        for i, row in enumerate(rows):
            for m, model_id in enumerate(model_ids):
                fh.write(
                    _dumps(
                        {
                            "pmid": row.pmid,
                            "p1": row.participant1,
                            "p2": row.participant2,
                            "model_id": model_id,
                            "probs": [float(p) for p in probs[m, i]],
                        }
                    )
                    + "\n"
                )
    return {
        "samples": len(rows),
        "members": len(model_ids),
        "lines": len(rows) * len(model_ids),
        "out": str(out_path),
    }
