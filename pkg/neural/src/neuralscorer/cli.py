"""Command-line entry points: finetune and export."""

from __future__ import annotations

import argparse
import json
import sys

from .config import FineTuneConfig
from .data import read_dataset_tsv, rows_for_split
from .export import export_predictions
from .finetune import fine_tune


def _add_finetune(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("finetune", help="train an ensemble of members")
    p.add_argument("--dataset", required=True, help="labeled-sample TSV")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--ensemble", type=int, default=None, metavar="M",
                   help="member count (default: config default)")
    p.add_argument("--pretrained", default=None,
                   help="base model id or local checkpoint path")
    p.add_argument("--max-seq-length", type=int, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--dropout", type=float, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="base seed")


def _add_export(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("export", help="write per-member predictions")
    p.add_argument("--models", required=True, help="finetune output directory")
    p.add_argument("--in", dest="in_path", required=True,
                   help="labeled-sample TSV to score")
    p.add_argument("--out", required=True, help="JSONL output path")
    p.add_argument("--split", default=None,
                   help="score only this split (default: every row)")


def _build_config(args: argparse.Namespace) -> FineTuneConfig:
    overrides = {
        "pretrained_model": args.pretrained,
        "max_seq_length": args.max_seq_length,
        "learning_rate": args.lr,
        "epochs": args.epochs,
        "dropout": args.dropout,
        "member_count": args.ensemble,
        "base_seed": args.seed,
        "batch_size": args.batch_size,
    }
    return FineTuneConfig(
        **{k: v for k, v in overrides.items() if v is not None}
    )


def cmd_finetune(args: argparse.Namespace) -> int:
    config = _build_config(args)
    manifest = fine_tune(
        args.dataset, config, args.out,
        progress_fn=lambda msg: print(msg, file=sys.stderr),
    )
    print(json.dumps(
        {
            "out": args.out,
            "members": [m["model_id"] for m in manifest["members"]],
            "val_losses": [m["val_loss"] for m in manifest["members"]],
            "counts": manifest["counts"],
        },
        indent=2, sort_keys=True,
    ))
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    rows = read_dataset_tsv(args.in_path)
    if args.split is not None:
        rows = rows_for_split(rows, args.split)
        if not rows:
            print(f"no rows in split {args.split!r}", file=sys.stderr)
            return 1
    summary = export_predictions(args.models, rows, args.out)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        from transformers.utils import logging as hf_logging
        hf_logging.disable_progress_bar()
    except ImportError:
        pass
    parser = argparse.ArgumentParser(
        prog="neuralscorer",
        description="fine-tune and export a transformer ensemble",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_finetune(sub)
    _add_export(sub)
    args = parser.parse_args(argv)
    if args.command == "finetune":
        return cmd_finetune(args)
    return cmd_export(args)


if __name__ == "__main__":
    sys.exit(main())
