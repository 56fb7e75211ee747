"""Shared fixtures: the parsed fixture corpus and small trained models."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from typedppi.dataset import build_dataset, normalize_corpus, split_dataset
from typedppi.ingest import (
    dedupe_abstracts,
    dedupe_interactions,
    filter_binary,
    load_id_map,
    load_type_map,
    parse_medline,
    parse_mitab,
    parse_pubtator,
)
from typedppi.records import SkipReport
from typedppi.scorer import train_ensemble
from typedppi.synthetic import make_synthetic

from toyconfig import TOY_CONFIG

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return FIXTURES / "golden"


@pytest.fixture(scope="session")
def ground_truth(corpus_dir) -> dict:
    with open(corpus_dir / "ground_truth.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def parsed_corpus(corpus_dir):
    """Fixture corpus parsed and assembled, with the skip report."""
    report = SkipReport()
    id_map = load_id_map(corpus_dir / "id_map.tsv")
    type_map = load_type_map(corpus_dir / "type_map.tsv")
    with open(corpus_dir / "medline.xml", "rb") as fh:
        abstracts = dedupe_abstracts(parse_medline(fh, report=report), report)
    mentions = []
    with open(corpus_dir / "pubtator.txt", "rb") as fh:
        for _, block_mentions in parse_pubtator(fh, id_map=id_map, report=report):
            mentions.extend(block_mentions)
    with open(corpus_dir / "mitab.tsv", "rb") as fh:
        raw = list(parse_mitab(fh, type_map, report=report))
    binary = list(filter_binary(raw))
    if len(binary) != len(raw):
        report.add("mitab_non_binary", len(raw) - len(binary))
    interactions, duplicates = dedupe_interactions(binary)
    if duplicates:
        report.add("mitab_duplicate_row", duplicates)
    return abstracts, mentions, interactions, report


@pytest.fixture(scope="session")
def fixture_normalized(parsed_corpus):
    abstracts, mentions, _, _ = parsed_corpus
    return normalize_corpus(abstracts, mentions)


@pytest.fixture(scope="session")
def fixture_samples(parsed_corpus, fixture_normalized):
    _, _, interactions, _ = parsed_corpus
    report = SkipReport()
    samples = build_dataset(fixture_normalized, interactions, report)
    return samples, report


@pytest.fixture(scope="session")
def fixture_split_samples(fixture_samples):
    samples, _ = fixture_samples
    with pytest.warns(UserWarning):
        return split_dataset(samples, seed=0)


@pytest.fixture(scope="session")
def toy_ensemble():
    """A small but accurate ensemble trained on synthetic text."""
    texts, labels = make_synthetic(60, seed=5)
    return train_ensemble(texts, labels, TOY_CONFIG, member_count=3)
