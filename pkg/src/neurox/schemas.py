"""Access to the shipped JSON schemas and validation helpers."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    ref = resources.files("neurox") / "schemas" / f"{name}.schema.json"
    return json.loads(ref.read_text(encoding="utf-8"))


def validate(payload: dict, schema_name: str) -> None:
    """Raise jsonschema.ValidationError when the payload violates the schema."""
    jsonschema.validate(payload, load_schema(schema_name))


def schema_names() -> list[str]:
    root = resources.files("neurox") / "schemas"
    return sorted(p.name[: -len(".schema.json")] for p in root.iterdir()
                  if p.name.endswith(".schema.json"))
