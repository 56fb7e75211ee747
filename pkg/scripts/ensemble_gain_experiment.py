#!/usr/bin/env python3
"""Measure what ensembling buys over a single model on synthetic text.

For each trial a fresh synthetic dataset is generated with label noise,
one ensemble is trained, and its first member doubles as the single
model baseline (identical configuration and seed). The report gives
macro F1 over the typed classes as mean and population standard
deviation across trials, plus how often the ensemble matched or beat
its first member.

Usage:
    python3 scripts/ensemble_gain_experiment.py [--trials 10] [--members 10]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from typedppi.labels import CLASS_ORDER  # noqa: E402
from typedppi.metrics import evaluate, run_summary  # noqa: E402
from typedppi.scorer import (  # noqa: E402
    ReferenceModelConfig,
    ensemble_proba,
    predict_proba,
    train_ensemble,
)
from typedppi.synthetic import make_synthetic  # noqa: E402


def macro_f1(gold: list[str], probs) -> float:
    predicted = [CLASS_ORDER[i] for i in probs.argmax(axis=1)]
    _, report = evaluate(gold, predicted)
    return report.macro["f1"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--members", type=int, default=10)
    parser.add_argument("--train-per-class", type=int, default=60)
    parser.add_argument("--test-per-class", type=int, default=40)
    parser.add_argument("--label-noise", type=float, default=0.15)
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    single_scores = []
    ensemble_scores = []
    wins = 0
    for trial in range(args.trials):
        train_texts, train_labels = make_synthetic(
            args.train_per_class, seed=args.seed + trial,
            label_noise=args.label_noise,
        )
        test_texts, test_labels = make_synthetic(
            args.test_per_class, seed=args.seed + 7000 + trial,
        )
        config = ReferenceModelConfig(
            n_features=1 << 14, epochs=args.epochs,
            seed=args.seed + 100 * trial,
        )
        ensemble = train_ensemble(
            train_texts, train_labels, config, member_count=args.members
        )
        single_f1 = macro_f1(
            test_labels, predict_proba(ensemble.members[0], test_texts)
        )
        ens_f1 = macro_f1(test_labels, ensemble_proba(ensemble, test_texts))
        single_scores.append(single_f1)
        ensemble_scores.append(ens_f1)
        wins += ens_f1 >= single_f1
        print(
            f"trial {trial:02d}: single {single_f1:.4f} "
            f"ensemble {ens_f1:.4f}", file=sys.stderr,
        )

    print(json.dumps({
        "trials": args.trials,
        "members": args.members,
        "label_noise": args.label_noise,
        "single_macro_f1": run_summary(single_scores),
        "ensemble_macro_f1": run_summary(ensemble_scores),
        "ensemble_matched_or_beat_single": wins,
    }, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
