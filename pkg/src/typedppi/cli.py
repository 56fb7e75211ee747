"""Command-line interface.

Subcommands cover the full path from raw source files to reviewed
extractions: ingest, build-dataset, train, predict, eval, scan,
threshold, calibrate, review.
"""

from __future__ import annotations

import argparse
import gzip
import json
import sys
from pathlib import Path
from typing import IO

from . import dataset as ds
from . import pipeline, scorer, wire
from .ingest import (
    dedupe_abstracts,
    dedupe_interactions,
    default_type_map,
    filter_binary,
    load_id_map,
    load_type_map,
    parse_medline,
    parse_mitab,
    parse_pubtator,
    read_corpus,
    write_corpus,
)
from .labels import NEGATIVE_LABEL, POSITIVE_LABEL
from .records import SkipReport


def _open_binary(path: str) -> IO[bytes]:
    if path.endswith(".gz"):
        return gzip.open(path, "rb")
    return open(path, "rb")


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_ingest(args: argparse.Namespace) -> int:
    report = SkipReport()
    type_map = load_type_map(args.type_map) if args.type_map else default_type_map()
    id_map = load_id_map(args.id_map) if args.id_map else None

    with _open_binary(args.medline) as fh:
        abstracts = dedupe_abstracts(parse_medline(fh, report=report), report)
    mentions = []
    with _open_binary(args.pubtator) as fh:
        for _, block_mentions in parse_pubtator(fh, id_map=id_map, report=report):
            mentions.extend(block_mentions)
    with _open_binary(args.mitab) as fh:
        raw = list(parse_mitab(fh, type_map, report=report))
    binary = list(filter_binary(raw))
    if len(binary) != len(raw):
        report.add("mitab_non_binary", len(raw) - len(binary))
    interactions, duplicates = dedupe_interactions(binary)
    if duplicates:
        report.add("mitab_duplicate_row", duplicates)

    write_corpus(args.out, abstracts, mentions, interactions, report)
    summary = {
        "abstracts": len(abstracts),
        "mentions": len(mentions),
        "interactions": len(interactions),
        "skips": report.as_dict(),
    }
    _write_json(None, summary)
    return 0


def _parse_ratios(text: str) -> tuple[float, float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated ratios")
    return tuple(parts)  # type: ignore[return-value]


def cmd_build_dataset(args: argparse.Namespace) -> int:
    report = SkipReport()
    abstracts, mentions, interactions = read_corpus(args.corpus)
    normalized = ds.normalize_corpus(abstracts, mentions, report)
    samples = ds.build_dataset(normalized, interactions, report)
    samples = ds.split_dataset(samples, ratios=args.ratios, seed=args.seed)
    samples = ds.sort_samples(samples)
    ds.write_dataset_tsv(args.out, samples)
    if args.binary_out:
        ds.write_dataset_tsv(args.binary_out, ds.derive_untyped(samples))
    stats = ds.compute_stats(samples)
    _write_json(args.stats, {"stats": stats.to_json(), "report": report.as_dict()})
    return 0


def _model_config(args: argparse.Namespace) -> scorer.ReferenceModelConfig:
    return scorer.ReferenceModelConfig(
        ngram_orders=tuple(int(k) for k in args.ngram_orders.split(",")),
        n_features=args.n_features,
        learning_rate=args.learning_rate,
        lr_decay=args.lr_decay,
        epochs=args.epochs,
        p_drop=args.p_drop,
        batch_size=args.batch_size,
        seed=args.seed,
    )


def _load_split(path: str, split: str) -> list:
    samples = ds.read_dataset_tsv(path)
    if split != "all":
        samples = [s for s in samples if s.split == split]
    if not samples:
        raise SystemExit(f"no samples with split {split!r} in {path}")
    return samples


def cmd_train(args: argparse.Namespace) -> int:
    report = SkipReport()
    samples = ds.dedupe_for_training(_load_split(args.dataset, args.split), report)
    texts = [s.masked_text for s in samples]
    labels = [s.label for s in samples]
    config = _model_config(args)
    ensemble = scorer.train_ensemble(texts, labels, config, member_count=args.members)
    scorer.save_ensemble(args.out, ensemble)
    _write_json(
        None,
        {
            "trained_on": len(samples),
            "members": args.members,
            "skips": report.as_dict(),
            "model_dir": str(args.out),
        },
    )
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    ensemble = scorer.load_ensemble(args.model)
    samples = _load_split(args.dataset, args.split)
    seen = set()
    unique = []
    for s in samples:
        key = (s.pmid, s.participant1, s.participant2)
        if key not in seen:
            seen.add(key)
            unique.append(s)
    texts = [s.masked_text for s in unique]
    model_ids = [f"member_{i:02d}" for i in range(len(ensemble.members))]
    rows = []
    for mid, member in zip(model_ids, ensemble.members):
        probs = scorer.predict_proba(member, texts)
        for s, p in zip(unique, probs):
            rows.append(
                wire.MemberPrediction(
                    pmid=s.pmid,
                    participant1=s.participant1,
                    participant2=s.participant2,
                    model_id=mid,
                    probs=tuple(float(v) for v in p),
                )
            )
    rows.sort(key=lambda r: (r.pmid, r.participant1, r.participant2, r.model_id))
    wire.write_member_predictions(
        args.out, rows, class_order=ensemble.class_order, model_ids=model_ids
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    from .metrics import evaluate

    ensemble = scorer.load_ensemble(args.model)
    samples = _load_split(args.dataset, args.split)
    texts = [s.masked_text for s in samples]
    probs = scorer.ensemble_proba(ensemble, texts)
    predicted = [scorer.decide(row, ensemble.class_order).label for row in probs]
    gold = [s.label for s in samples]
    if args.binary:
        to_binary = lambda l: NEGATIVE_LABEL if l == NEGATIVE_LABEL else POSITIVE_LABEL
        gold = [to_binary(l) for l in gold]
        predicted = [to_binary(l) for l in predicted]
        cm, report = evaluate(
            gold, predicted, classes=(POSITIVE_LABEL, NEGATIVE_LABEL)
        )
    else:
        cm, report = evaluate(gold, predicted)
    _write_json(args.out, {"confusion": cm.to_json(), "metrics": report.to_json()})
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    report = SkipReport()
    ensemble = scorer.load_ensemble(args.model)
    abstracts, mentions, _ = read_corpus(args.corpus)
    normalized = ds.normalize_corpus(abstracts, mentions, report)
    predictions = pipeline.scan_corpus(
        normalized.values(), ensemble, workers=args.workers, report=report
    )
    wire.write_scan_predictions(args.out, predictions)
    if args.report:
        _write_json(args.report, {"predictions": len(predictions), "skips": report.as_dict()})
    return 0


def _load_thresholds(args: argparse.Namespace) -> pipeline.ThresholdConfig:
    if args.defaults:
        return pipeline.default_thresholds()
    if not args.thresholds:
        raise SystemExit("pass --thresholds PATH or --defaults")
    return pipeline.ThresholdConfig(wire.read_thresholds(args.thresholds))


def cmd_threshold(args: argparse.Namespace) -> int:
    thresholds = _load_thresholds(args)
    predictions = wire.read_scan_predictions(args.predictions)
    kept, dropped = pipeline.apply_thresholds(predictions, thresholds)
    wire.write_scan_predictions(args.out, kept)
    if args.dropped:
        wire.write_scan_predictions(args.dropped, dropped)
    _write_json(
        None,
        {
            "input": len(predictions),
            "kept": len(kept),
            "dropped_typed": len(dropped),
        },
    )
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    report = SkipReport()
    rows, _ = wire.read_member_predictions(args.predictions, report=report)
    groups = wire.group_member_rows(rows)
    aggregated = wire.aggregate_groups(groups)
    gold_by_key = ds.pair_gold(_load_split(args.dataset, args.split))
    gold = []
    decisions = []
    for key, probs in aggregated:
        g = gold_by_key.get(key)
        if g is None:
            report.add("calibrate_missing_gold")
            continue
        gold.append(g)
        decisions.append(scorer.decide(probs))
    result = pipeline.calibrate_thresholds(gold, decisions, args.target)
    wire.write_thresholds(args.out, result.thresholds.cutoffs)
    payload = result.to_json()
    payload["skips"] = report.as_dict()
    _write_json(args.report, payload)
    return 0


def cmd_review(args: argparse.Namespace) -> int:
    state = Path(args.state)
    if state.exists():
        session = pipeline.ReviewSession.load(state)
    else:
        predictions = wire.read_scan_predictions(args.predictions)
        sampled = pipeline.sample_for_review(
            predictions, per_type=args.sample, seed=args.seed
        )
        texts = {}
        if args.corpus:
            abstracts, mentions, _ = read_corpus(args.corpus)
            normalized = ds.normalize_corpus(abstracts, mentions)
            texts = {pmid: norm.text for pmid, norm in normalized.items()}
        session = pipeline.ReviewSession.new(sampled, texts)
        session.save(state)
    pipeline.run_review(session, state)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typedppi",
        description="Typed protein-interaction extraction from abstracts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse raw sources into a corpus directory")
    p.add_argument("--medline", required=True, help="citation XML (.gz supported)")
    p.add_argument("--mitab", required=True, help="tab-separated interaction table")
    p.add_argument("--pubtator", required=True, help="entity annotation blocks")
    p.add_argument("--id-map", help="annotator gene id to protein id TSV")
    p.add_argument("--type-map", help="interaction type term map TSV")
    p.add_argument("--out", required=True, help="corpus output directory")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build-dataset", help="build the weakly labeled dataset")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="dataset TSV path")
    p.add_argument("--binary-out", help="also write the collapsed binary view")
    p.add_argument("--ratios", type=_parse_ratios, default=ds.DEFAULT_SPLIT_RATIOS,
                   help="train,val,test ratios (default %(default)s)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stats", help="write stats JSON here instead of stdout")
    p.set_defaults(func=cmd_build_dataset)

    p = sub.add_parser("train", help="train an ensemble on the train split")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True, help="model output directory")
    p.add_argument("--split", default="train")
    p.add_argument("--members", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=6)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--lr-decay", type=float, default=0.9)
    p.add_argument("--p-drop", type=float, default=0.1)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--n-features", type=int, default=1 << 16)
    p.add_argument("--ngram-orders", default="1,2")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="write per-member pair predictions")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--split", default="val")
    p.add_argument("--out", required=True, help="member predictions JSONL")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="score a split and report metrics")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--split", default="test")
    p.add_argument("--binary", action="store_true",
                   help="collapse typed labels into positive/negative")
    p.add_argument("--out", help="metrics JSON path (default stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", help="score every co-mentioned pair in a corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="pair decisions JSONL")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", help="skip-count JSON path")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("threshold", help="filter scan output by per-type cutoffs")
    p.add_argument("--predictions", required=True, help="scan JSONL")
    p.add_argument("--thresholds", help="cutoff TSV from calibrate")
    p.add_argument("--defaults", action="store_true", help="use the shipped cutoffs")
    p.add_argument("--out", required=True, help="kept predictions JSONL")
    p.add_argument("--dropped", help="also write dropped typed calls")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("calibrate", help="fit per-type cutoffs to a precision target")
    p.add_argument("--predictions", required=True, help="member predictions JSONL")
    p.add_argument("--dataset", required=True, help="dataset TSV with gold labels")
    p.add_argument("--split", default="val")
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--out", required=True, help="thresholds TSV path")
    p.add_argument("--report", help="calibration report JSON path")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("review", help="manually review sampled extractions")
    p.add_argument("--predictions", help="kept predictions JSONL")
    p.add_argument("--corpus", help="corpus directory for display text")
    p.add_argument("--sample", type=int, default=10, help="calls per type")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--state", required=True, help="session state JSON (resumable)")
    p.set_defaults(func=cmd_review)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "review" and not Path(args.state).exists() and not args.predictions:
        parser.error("review needs --predictions when starting a new session")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
