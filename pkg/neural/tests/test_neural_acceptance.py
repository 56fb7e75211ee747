"""Acceptance criteria for the transformer scorer.

Each test prints one pass/fail line. The cross-component checks drive
the sibling extraction package only through its public file formats:
the dataset TSV in, the member-prediction JSONL out.
"""

from __future__ import annotations

import time

import numpy as np

from neuralscorer import (
    export_predictions,
    fine_tune,
    load_members,
    member_probabilities,
    read_dataset_tsv,
    rows_for_split,
)
from neuralscorer.config import config_from_json
from tinybase import quick_config


def test_secondary_01_finetune_budget_and_validation_loss(
    tmp_path, tiny_base, dataset_path
):
    """2 members, 1 epoch: finishes on a CPU budget and learns something."""
    started = time.perf_counter()
    manifest = fine_tune(
        dataset_path, quick_config(tiny_base), tmp_path / "models"
    )
    elapsed = time.perf_counter() - started
    assert elapsed < 600.0, f"fine-tuning took {elapsed:.1f}s"

    assert len(manifest["members"]) == 2
    for member in manifest["members"]:
        untrained = member["untrained_val_loss"]
        trained = member["val_loss"]
        assert untrained is not None and trained is not None
        assert trained < untrained, (
            f"{member['model_id']}: validation loss {trained:.4f} did not"
            f" drop below the untrained checkpoint's {untrained:.4f}"
        )
    losses = ", ".join(
        f"{m['model_id']} {m['untrained_val_loss']:.3f}->{m['val_loss']:.3f}"
        for m in manifest["members"]
    )
    print(f"secondary 01 PASS: 2-member 1-epoch fine-tune in {elapsed:.1f}s "
          f"with validation loss dropping for every member ({losses})")


def test_secondary_02_wire_conformance_and_cross_component_means(
    tmp_path, trained_pair, dataset_path
):
    """The extraction package parses every exported line and agrees on means."""
    from typedppi.records import SkipReport
    from typedppi.wire import (
        aggregate_groups,
        group_member_rows,
        read_member_predictions,
    )

    models_dir, manifest = trained_pair
    rows = rows_for_split(read_dataset_tsv(dataset_path), "test")
    out = tmp_path / "members.jsonl"
    summary = export_predictions(models_dir, rows, out)
    assert summary["lines"] == len(rows) * 2

    report = SkipReport()
    parsed, model_ids = read_member_predictions(out, report=report)
    assert report.total() == 0, report.as_dict()
    assert len(parsed) == len(rows) * 2
    assert model_ids == ["member-00", "member-01"]
    for row in parsed:
        assert abs(sum(row.probs) - 1.0) <= 1e-6

    groups = group_member_rows(parsed)
    assert len(groups) == len(rows)
    file_means = dict(aggregate_groups(groups))

    loaded_manifest, tokenizer, members = load_members(models_dir)
    probs = member_probabilities(
        members, tokenizer, rows, config_from_json(loaded_manifest["config"])
    )
    internal_means = probs.mean(axis=0)

    worst = 0.0
    for i, row in enumerate(rows):
        key = (row.pmid, row.participant1, row.participant2)
        diff = np.max(np.abs(file_means[key] - internal_means[i]))
        worst = max(worst, float(diff))
        assert diff <= 1e-6, (key, diff)
    print("secondary 02 PASS: zero skipped lines and per-class ensemble "
          f"means agree across components within 1e-6 (worst {worst:.2e})")
