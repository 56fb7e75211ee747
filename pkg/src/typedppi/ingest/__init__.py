"""Streaming parsers and corpus assembly for the three source formats."""

from .corpus_io import dedupe_abstracts, read_corpus, write_corpus
from .mappings import default_type_map, load_id_map, load_type_map
from .medline import MedlineParseError, parse_medline
from .mitab import dedupe_interactions, filter_binary, parse_mitab
from .pubtator import parse_pubtator

__all__ = [
    "MedlineParseError",
    "parse_medline",
    "parse_mitab",
    "filter_binary",
    "dedupe_interactions",
    "parse_pubtator",
    "load_type_map",
    "load_id_map",
    "default_type_map",
    "write_corpus",
    "read_corpus",
    "dedupe_abstracts",
]
