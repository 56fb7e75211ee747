"""Session fixtures: the tiny base model and a trained ensemble."""

from __future__ import annotations

import pytest
from transformers.utils import logging as hf_logging

from neuralscorer import fine_tune
from tinybase import FIXTURES, build_tiny_base, quick_config

hf_logging.disable_progress_bar()
hf_logging.set_verbosity_error()


@pytest.fixture(scope="session")
def tiny_base(tmp_path_factory) -> str:
    out = tmp_path_factory.mktemp("base") / "tiny"
    return str(build_tiny_base(out, FIXTURES / "vocab.txt"))


@pytest.fixture(scope="session")
def dataset_path() -> str:
    return str(FIXTURES / "dataset.tsv")


@pytest.fixture(scope="session")
def trained_pair(tmp_path_factory, tiny_base, dataset_path):
    """A finished 2-member, 1-epoch run shared by read-only tests."""
    out = tmp_path_factory.mktemp("models") / "pair"
    manifest = fine_tune(dataset_path, quick_config(tiny_base), out)
    return str(out), manifest
