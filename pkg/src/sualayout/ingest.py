"""Instance and publication files, and group derivation from co-authorship."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import jsonschema

from .exceptions import EmptyInput, InstanceSyntaxError, Issue, SchemaError
from .model import Actor, Group, StorylineInstance, TimeAxis, validate_instance

FORMAT_VERSION = 1

INSTANCE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["time_labels", "actors", "groups"],
    "properties": {
        "format": {"const": FORMAT_VERSION},
        "time_labels": {"type": "array", "items": {"type": "string"}},
        "actors": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id"],
                "properties": {
                    "id": {"type": "string"},
                    "name": {"type": "string"},
                    "color": {"type": "string"},
                },
            },
        },
        "groups": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "members", "begin", "end"],
                "properties": {
                    "id": {"type": "string"},
                    "members": {"type": "array", "items": {"type": "string"}},
                    "begin": {"type": "integer"},
                    "end": {"type": "integer"},
                },
            },
        },
    },
}

PUBLICATIONS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["records"],
    "properties": {
        "format": {"const": FORMAT_VERSION},
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["year", "authors"],
                "properties": {
                    "year": {"type": "integer"},
                    "authors": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "title": {"type": "string"},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class PublicationRecord:
    year: int
    authors: frozenset
    title: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "authors", frozenset(self.authors))


def _load(text, schema):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    validator = jsonschema.Draft7Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        raise SchemaError([
            Issue("SchemaError", "/" + "/".join(map(str, e.absolute_path)), e.message) for e in errors
        ])
    return doc


def parse_instance(text):
    doc = _load(text, INSTANCE_SCHEMA)
    instance = StorylineInstance(
        TimeAxis(doc["time_labels"]),
        [Actor(a["id"], a.get("name", ""), a.get("color")) for a in doc["actors"]],
        [Group(g["id"], g["members"], g["begin"], g["end"]) for g in doc["groups"]],
    )
    return validate_instance(instance)


def instance_to_dict(instance):
    actors = []
    for a in instance.actors:
        d = {"id": a.id, "name": a.display_name}
        if a.color is not None:
            d["color"] = a.color
        actors.append(d)
    return {
        "format": FORMAT_VERSION,
        "time_labels": list(instance.time_axis.labels),
        "actors": actors,
        "groups": [
            {"id": g.id, "members": sorted(g.members), "begin": g.begin, "end": g.end}
            for g in instance.groups
        ],
    }


def serialize_instance(instance):
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True) + "\n"


def parse_publications(text):
    doc = _load(text, PUBLICATIONS_SCHEMA)
    return [PublicationRecord(r["year"], r["authors"], r.get("title")) for r in doc["records"]]


def derive_groups(records, actors=None):
    """Instance whose groups are maximal runs of years an author set co-published.

    ``actors`` optionally supplies :class:`Actor` objects (names, colors) for
    the author ids; otherwise bare actors are created, sorted by id.
    """
    records = list(records)
    if not records:
        raise EmptyInput([Issue("EmptyInput", "records", "no publication records")])
    first = min(r.year for r in records)
    last = max(r.year for r in records)
    years = {}
    for r in records:
        years.setdefault(r.authors, set()).add(r.year)

    runs = []
    for authors, present in years.items():
        ys = sorted(present)
        start = prev = ys[0]
        for y in ys[1:] + [None]:
            if y is not None and y == prev + 1:
                prev = y
                continue
            runs.append((start - first, prev - first, tuple(sorted(authors))))
            if y is not None:
                start = prev = y
    runs.sort()

    known = {a.id: a for a in actors or ()}
    ids = sorted({a for r in records for a in r.authors} | set(known))
    instance = StorylineInstance(
        TimeAxis(str(y) for y in range(first, last + 1)),
        [known.get(i, Actor(i)) for i in ids],
        [Group(f"G{k + 1}", members, b, e) for k, (b, e, members) in enumerate(runs)],
    )
    return validate_instance(instance)
