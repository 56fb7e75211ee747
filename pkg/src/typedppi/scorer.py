"""Reference text classifier and the deep-ensemble machinery.

The reference model is a multinomial logistic regression over hashed
word n-gram counts, trained with minibatch SGD and feature dropout. It
stands in for heavier encoders behind the same interface: anything that
maps masked text to a probability vector over the fixed class order can
be ensembled, aggregated, and thresholded by the rest of the package.

Training is deterministic for a given config and seed: one RNG drives
the epoch permutations and dropout masks, and all updates are plain
numpy arithmetic.
"""

from __future__ import annotations

import dataclasses
import json
import re
import warnings
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .labels import CLASS_ORDER, class_index

_TOKEN_RE = re.compile(r"[a-z0-9_\-]+")

ENSEMBLE_MANIFEST = "ensemble.json"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class ReferenceModelConfig:
    """Hyperparameters for one reference model."""

    ngram_orders: tuple[int, ...] = (1, 2)
    n_features: int = 1 << 16
    learning_rate: float = 0.5
    lr_decay: float = 0.9
    epochs: int = 6
    p_drop: float = 0.1
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_features <= 0:
            raise ValueError("n_features must be positive")
        if not 0.0 <= self.p_drop < 1.0:
            raise ValueError("p_drop must lie in [0, 1)")
        if self.batch_size <= 0 or self.epochs < 0:
            raise ValueError("batch_size must be positive, epochs non-negative")
        if not self.ngram_orders or any(k <= 0 for k in self.ngram_orders):
            raise ValueError("ngram_orders must be positive integers")


@dataclass
class ReferenceModel:
    config: ReferenceModelConfig
    weights: np.ndarray
    bias: np.ndarray
    class_order: tuple[str, ...] = CLASS_ORDER


@dataclass
class Ensemble:
    members: list[ReferenceModel]
    member_seeds: list[int]
    class_order: tuple[str, ...] = CLASS_ORDER


@dataclass(frozen=True)
class Decision:
    label: str
    probability: float
    tie: bool


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def hashed_ngrams(text: str, config: ReferenceModelConfig) -> list[int]:
    """Feature indices for a text, one entry per n-gram occurrence."""
    tokens = tokenize(text)
    indices = []
    for order in config.ngram_orders:
        for i in range(len(tokens) - order + 1):
            gram = " ".join(tokens[i : i + order])
            indices.append(zlib.crc32(gram.encode("utf-8")) % config.n_features)
    return indices


def build_matrix(texts: Sequence[str], config: ReferenceModelConfig) -> sp.csr_matrix:
    """Hashed n-gram count matrix, shape (len(texts), n_features)."""
    rows: list[int] = []
    cols: list[int] = []
    for i, text in enumerate(texts):
        idx = hashed_ngrams(text, config)
        rows.extend([i] * len(idx))
        cols.extend(idx)
    data = np.ones(len(rows), dtype=np.float64)
    mat = sp.csr_matrix(
        (data, (rows, cols)), shape=(len(texts), config.n_features)
    )
    mat.sum_duplicates()
    mat.sort_indices()
    return mat


def softmax(scores: np.ndarray) -> np.ndarray:
    """Row-wise stable softmax."""
    z = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy_loss_grad(
    weights: np.ndarray,
    bias: np.ndarray,
    x: sp.csr_matrix,
    y: np.ndarray,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy over the rows of ``x`` and its exact gradient."""
    n = x.shape[0]
    probs = softmax(x @ weights + bias)
    loss = float(-np.mean(np.log(probs[np.arange(n), y])))
    g = probs.copy()
    g[np.arange(n), y] -= 1.0
    g /= n
    grad_w = np.asarray((x.T @ g))
    grad_b = g.sum(axis=0)
    return loss, grad_w, grad_b


def _sgd_batch_update(
    weights: np.ndarray,
    bias: np.ndarray,
    xb: sp.csr_matrix,
    yb: np.ndarray,
    lr: float,
) -> None:
    """One SGD step on a batch, updating only the touched weight rows."""
    nb = xb.shape[0]
    probs = softmax(xb @ weights + bias)
    g = probs
    g[np.arange(nb), yb] -= 1.0
    g /= nb
    row_of_nnz = np.repeat(np.arange(nb), np.diff(xb.indptr))
    contrib = xb.data[:, None] * g[row_of_nnz]
    np.subtract.at(weights, xb.indices, lr * contrib)
    bias -= lr * g.sum(axis=0)


def train_reference(
    texts: Sequence[str],
    labels: Sequence[str],
    config: ReferenceModelConfig,
    class_order: tuple[str, ...] = CLASS_ORDER,
) -> ReferenceModel:
    """Train one reference model. Deterministic for a given config."""
    if len(texts) != len(labels):
        raise ValueError("texts and labels differ in length")
    if not texts:
        raise ValueError("no training samples")
    index = {c: i for i, c in enumerate(class_order)}
    y = np.array([index[l] for l in labels], dtype=np.intp)
    missing = [c for i, c in enumerate(class_order) if not np.any(y == i)]
    if missing:
        warnings.warn(
            f"classes with no training samples: {missing}", stacklevel=2
        )

    x = build_matrix(texts, config)
    n_classes = len(class_order)
    weights = np.zeros((config.n_features, n_classes), dtype=np.float64)
    bias = np.zeros(n_classes, dtype=np.float64)
    rng = np.random.default_rng(config.seed)

    for epoch in range(config.epochs):
        lr = config.learning_rate * (config.lr_decay**epoch)
        perm = rng.permutation(len(texts))
        for start in range(0, len(texts), config.batch_size):
            batch = perm[start : start + config.batch_size]
            xb = x[batch]
            if config.p_drop > 0.0:
                keep = rng.random(xb.nnz) >= config.p_drop
                xb.data = xb.data * keep / (1.0 - config.p_drop)
            _sgd_batch_update(weights, bias, xb, y[batch], lr)
    return ReferenceModel(
        config=config, weights=weights, bias=bias, class_order=class_order
    )


def decision_scores(model: ReferenceModel, text: str) -> np.ndarray:
    """Raw class scores (logits) for one text.

    A text with no recognized features scores the bias alone.
    """
    scores = model.bias.copy()
    for j in hashed_ngrams(text, model.config):
        scores += model.weights[j]
    return scores


def predict_proba(model: ReferenceModel, texts: Sequence[str]) -> np.ndarray:
    x = build_matrix(texts, model.config)
    return softmax(x @ model.weights + model.bias)


def train_ensemble(
    texts: Sequence[str],
    labels: Sequence[str],
    config: ReferenceModelConfig,
    member_count: int = 10,
    member_seeds: Sequence[int] | None = None,
    class_order: tuple[str, ...] = CLASS_ORDER,
) -> Ensemble:
    """Train ``member_count`` models that differ only in their seed.

    Default seeds are ``config.seed + i``; passing identical seeds
    yields identical members.
    """
    if member_count < 1:
        raise ValueError("member_count must be at least 1")
    if member_seeds is None:
        member_seeds = [config.seed + i for i in range(member_count)]
    member_seeds = list(member_seeds)
    if len(member_seeds) != member_count:
        raise ValueError("member_seeds length must equal member_count")
    members = [
        train_reference(
            texts, labels, dataclasses.replace(config, seed=s), class_order
        )
        for s in member_seeds
    ]
    return Ensemble(
        members=members, member_seeds=member_seeds, class_order=class_order
    )


def member_probs(ensemble: Ensemble, texts: Sequence[str]) -> np.ndarray:
    """Per-member probabilities, shape (members, texts, classes)."""
    return np.stack([predict_proba(m, texts) for m in ensemble.members])


def aggregate(probs: np.ndarray) -> np.ndarray:
    """Element-wise arithmetic mean over the leading member axis."""
    arr = np.asarray(probs, dtype=np.float64)
    if arr.ndim < 2:
        raise ValueError("expected at least (members, classes)")
    if arr.shape[0] < 1:
        raise ValueError("no member predictions to aggregate")
    return arr.mean(axis=0)


def ensemble_proba(ensemble: Ensemble, texts: Sequence[str]) -> np.ndarray:
    return aggregate(member_probs(ensemble, texts))


def decide(
    probs: Sequence[float], class_order: tuple[str, ...] = CLASS_ORDER
) -> Decision:
    """Argmax with first-index tie-breaking; flags exact ties."""
    arr = np.asarray(probs, dtype=np.float64)
    if arr.shape != (len(class_order),):
        raise ValueError(
            f"expected {len(class_order)} probabilities, got shape {arr.shape}"
        )
    idx = int(np.argmax(arr))
    tie = bool(np.sum(arr == arr[idx]) > 1)
    return Decision(label=class_order[idx], probability=float(arr[idx]), tie=tie)


def _config_to_json(config: ReferenceModelConfig) -> dict:
    d = dataclasses.asdict(config)
    d["ngram_orders"] = list(d["ngram_orders"])
    return d


def _config_from_json(d: dict) -> ReferenceModelConfig:
    d = dict(d)
    d["ngram_orders"] = tuple(d["ngram_orders"])
    return ReferenceModelConfig(**d)


def save_ensemble(out_dir: str | Path, ensemble: Ensemble) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format_version": FORMAT_VERSION,
        "class_order": list(ensemble.class_order),
        "member_count": len(ensemble.members),
        "member_seeds": list(ensemble.member_seeds),
        "config": _config_to_json(ensemble.members[0].config),
    }
    with open(out / ENSEMBLE_MANIFEST, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for i, member in enumerate(ensemble.members):
        np.savez_compressed(
            out / f"member_{i:02d}.npz", weights=member.weights, bias=member.bias
        )


def load_ensemble(
    in_dir: str | Path, expected_class_order: tuple[str, ...] = CLASS_ORDER
) -> Ensemble:
    src = Path(in_dir)
    with open(src / ENSEMBLE_MANIFEST, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format_version") != FORMAT_VERSION:
        raise ValueError(
            f"unsupported ensemble format: {manifest.get('format_version')!r}"
        )
    class_order = tuple(manifest["class_order"])
    if class_order != expected_class_order:
        raise ValueError(
            "ensemble class order does not match: "
            f"{class_order} != {expected_class_order}"
        )
    config = _config_from_json(manifest["config"])
    members = []
    for i in range(manifest["member_count"]):
        with np.load(src / f"member_{i:02d}.npz") as npz:
            members.append(
                ReferenceModel(
                    config=dataclasses.replace(
                        config, seed=manifest["member_seeds"][i]
                    ),
                    weights=npz["weights"],
                    bias=npz["bias"],
                    class_order=class_order,
                )
            )
    return Ensemble(
        members=members,
        member_seeds=list(manifest["member_seeds"]),
        class_order=class_order,
    )
