"""Synthetic masked-text generator for demos and tests.

The generated samples are separable by design: each typed class puts
its signature verb between the two participant markers, while negatives
use neutral verbs and, half of the time, also mention a typed verb away
from the markers so single tokens cannot separate the classes alone.
"""

from __future__ import annotations

import random

from .labels import CLASS_ORDER, INTERACTION_TYPES, NEGATIVE_LABEL

#: Past-tense verb that signals each interaction type in synthetic text.
TYPE_VERBS = {
    "acetylation": "acetylated",
    "methylation": "methylated",
    "demethylation": "demethylated",
    "phosphorylation": "phosphorylated",
    "dephosphorylation": "dephosphorylated",
    "ubiquitination": "ubiquitinated",
    "deubiquitination": "deubiquitinated",
}

_NEUTRAL = ("bound", "recruited", "stabilized", "co-purified with", "associated with")
_FILLER = (
    "in vitro", "in cultured cells", "under stress", "at the membrane",
    "in nuclear extracts", "during mitosis", "after stimulation",
    "in reporter assays", "in pulldown experiments", "upon treatment",
)


def make_synthetic(
    n_per_class: int,
    seed: int,
    label_noise: float = 0.0,
) -> tuple[list[str], list[str]]:
    """Shuffled (texts, labels) with ``n_per_class`` samples per class.

    ``label_noise`` relabels that fraction of samples uniformly at
    random, which makes the task noisy without touching the text.
    """
    rng = random.Random(seed)
    texts = []
    labels = []
    for cls in CLASS_ORDER:
        for _ in range(n_per_class):
            filler = rng.choice(_FILLER)
            extra = rng.choice(_FILLER)
            if cls == NEGATIVE_LABEL:
                neutral = rng.choice(_NEUTRAL)
                if rng.random() < 0.5:
                    verb = TYPE_VERBS[rng.choice(INTERACTION_TYPES)]
                    text = (
                        f"P{rng.randrange(10000, 99999)} {verb} "
                        f"P{rng.randrange(10000, 99999)} {filler} while "
                        f"PROTEIN1 {neutral} PROTEIN2 {extra}"
                    )
                else:
                    text = f"PROTEIN1 {neutral} PROTEIN2 {filler} {extra}"
            else:
                text = f"PROTEIN1 {TYPE_VERBS[cls]} PROTEIN2 {filler} {extra}"
            label = cls
            if label_noise and rng.random() < label_noise:
                label = rng.choice(CLASS_ORDER)
            texts.append(text)
            labels.append(label)
    order = rng.sample(range(len(texts)), len(texts))
    return [texts[i] for i in order], [labels[i] for i in order]
