"""Access to the data files shipped with the package."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .newforms import NewformStore, load as load_newforms


def _data(name: str):
    return resources.files("galoisfinder") / "data" / name


@lru_cache(maxsize=None)
def golden_tables() -> dict:
    """The published result tables (levels 1..18), in normalized JSON form."""
    return json.loads(_data("golden_tables.json").read_text())


@lru_cache(maxsize=None)
def newform_store() -> NewformStore:
    """Store over the bundled newform fixture."""
    return NewformStore(load_newforms(json.loads(_data("newforms.json").read_text())))


def golden_tables_text() -> str:
    """The normalized text rendering fixture of the result tables."""
    return _data("golden_tables.txt").read_text()
