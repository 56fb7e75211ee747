"""Two-column TSV mapping tables: type-term map and gene-id map."""

from __future__ import annotations

import importlib.resources
from pathlib import Path

from ..labels import INTERACTION_TYPES


def load_two_column_tsv(path: str | Path) -> dict[str, str]:
    """Read ``key<TAB>value`` lines; ``#`` comments and blanks ignored."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ValueError(f"{path}:{lineno}: expected two tab-separated columns")
            table[parts[0]] = parts[1]
    return table


def load_type_map(path: str | Path) -> dict[str, str]:
    """Load an interaction-type term map, validating the target classes."""
    table = load_two_column_tsv(path)
    bad = {v for v in table.values() if v not in INTERACTION_TYPES}
    if bad:
        raise ValueError(f"type map {path} targets unknown classes: {sorted(bad)}")
    return table


def default_type_map() -> dict[str, str]:
    """The bundled default term map (controlled-vocabulary codes + labels)."""
    resource = importlib.resources.files("typedppi.data") / "type_map_default.tsv"
    with importlib.resources.as_file(resource) as path:
        return load_type_map(path)


def load_id_map(path: str | Path) -> dict[str, str]:
    """Load the annotator-gene-id to protein-id table."""
    return load_two_column_tsv(path)
