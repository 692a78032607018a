"""Published JSON schemas for every file the command-line tool writes."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

SCHEMA_NAMES = (
    "cyclotomic",
    "rep_matrix",
    "rep_report",
    "surjectivity_certificate",
    "involvement_certificate",
    "group_input",
)


def load_schema(name: str) -> dict:
    text = resources.files(__name__).joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    pairs = []
    for name in SCHEMA_NAMES:
        schema = load_schema(name)
        pairs.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(pairs)


@lru_cache(maxsize=None)
def validator(name: str) -> Draft202012Validator:
    return Draft202012Validator(load_schema(name), registry=_registry())


def validate(doc, name: str) -> None:
    """Raise jsonschema.ValidationError if ``doc`` does not match the named schema."""
    validator(name).validate(doc)
