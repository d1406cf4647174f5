"""Streaming parser for entity dumps.

The canonical dump format is UTF-8, one record per newline-terminated line.
Each record is a JSON object with exactly two keys:

    {"id": "Q42", "claims": {"P31": ["Q5"], "P106": ["Q36180", "Q4964182"]}}

``id`` is the item identifier, ``claims`` maps a property id (``P`` followed
by digits) to a non-empty array of value strings. Duplicate property keys
within one record are merged by set union. Unknown top-level keys are
rejected in strict mode and ignored otherwise.

A secondary adapter reduces full Wikidata-style entity records (nested
mainsnak/datavalue statements) to the same shape, keeping only truthy
statement values and dropping qualifiers, references and deprecated ranks.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .errors import ParseError

ITEM_ID_RE = re.compile(r"^\S+$")
PROPERTY_ID_RE = re.compile(r"^P[0-9]+$")


def property_sort_key(pid: str) -> int:
    """Numeric part of a property id, for deterministic ordering."""
    return int(pid[1:])


@dataclass
class Entity:
    """An item: an identifier plus a property -> set-of-values association."""

    id: str
    claims: dict[str, set[str]] = field(default_factory=dict)

    def has(self, prop: str) -> bool:
        return prop in self.claims

    def add_claim(self, prop: str, value: str) -> None:
        self.claims.setdefault(prop, set()).add(value)

    def copy(self) -> "Entity":
        return Entity(self.id, {p: set(vs) for p, vs in self.claims.items()})


@dataclass
class EntityStore:
    """Immutable-after-load collection of entities keyed by id."""

    entities: dict[str, Entity] = field(default_factory=dict)
    skipped: int = 0
    duplicates: int = 0

    @property
    def count(self) -> int:
        return len(self.entities)

    def get(self, item_id: str) -> Entity | None:
        return self.entities.get(item_id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntityStore):
            return NotImplemented
        return self.entities == other.entities


class _Pairs(list):
    """Marker for decoded JSON objects, preserving duplicate keys."""


def parse_entity(line: str | bytes, strict: bool = False) -> Entity:
    """Parse one dump record into an Entity.

    Duplicate property keys in ``claims`` are merged by set union. Properties
    whose value array is empty are dropped (a claim without values carries no
    statement). Raises ParseError with the byte offset of the problem.
    """
    if isinstance(line, bytes):
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"invalid UTF-8: {exc.reason}", offset=exc.start) from exc
    else:
        text = line

    def byte_offset(char_pos: int) -> int:
        return len(text[:char_pos].encode("utf-8"))

    try:
        top = json.loads(text, object_pairs_hook=_Pairs)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, offset=byte_offset(exc.pos)) from exc

    if not isinstance(top, _Pairs):
        raise ParseError("record is not a JSON object")

    item_id: str | None = None
    claim_pairs = None
    for key, value in top:
        if key == "id":
            if item_id is not None:
                raise ParseError("duplicate 'id' key")
            item_id = value
        elif key == "claims":
            if claim_pairs is not None:
                raise ParseError("duplicate 'claims' key")
            claim_pairs = value
        elif strict:
            raise ParseError(f"unknown key {key!r}")

    if item_id is None:
        raise ParseError("missing 'id' key")
    if claim_pairs is None:
        raise ParseError("missing 'claims' key")
    if not isinstance(item_id, str) or not ITEM_ID_RE.match(item_id):
        raise ParseError(f"invalid item id {item_id!r}")
    if not isinstance(claim_pairs, _Pairs):
        raise ParseError("'claims' is not a JSON object")

    claims: dict[str, set[str]] = {}
    for prop, values in claim_pairs:
        if not PROPERTY_ID_RE.match(prop):
            raise ParseError(f"invalid property id {prop!r}")
        if not isinstance(values, list):
            raise ParseError(f"values of {prop} are not an array")
        for v in values:
            if not isinstance(v, str):
                raise ParseError(f"non-string value in {prop}")
        if values:
            claims.setdefault(prop, set()).update(values)

    return Entity(item_id, claims)


def entity_to_line(entity: Entity) -> str:
    """Canonical single-line serialization; inverse of parse_entity.

    Properties are ordered by numeric id, values lexicographically, so the
    output is byte-stable for any equal Entity.
    """
    claims = {
        p: sorted(entity.claims[p])
        for p in sorted(entity.claims, key=property_sort_key)
    }
    return json.dumps({"id": entity.id, "claims": claims},
                      separators=(",", ":"), ensure_ascii=False)


def store_fingerprint(store: EntityStore) -> str:
    """Order-insensitive content hash of a store (16 hex chars)."""
    digest = hashlib.sha256()
    for item_id in sorted(store.entities):
        digest.update(entity_to_line(store.entities[item_id]).encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()[:16]


def _iter_lines(source: IO[bytes] | Iterable[bytes]) -> Iterator[bytes]:
    for raw in source:
        yield raw


def load_dump(source: IO[bytes] | Iterable[bytes], strict: bool = False) -> EntityStore:
    """Stream newline-delimited records into an EntityStore.

    Lenient mode counts malformed lines in ``store.skipped``; strict mode
    raises ParseError naming the line. Later records for an already-seen id
    win, counted in ``store.duplicates``. Raw lines are discarded as parsing
    proceeds, so memory tracks the store, not the input size.
    """
    store = EntityStore()
    for line_no, raw in enumerate(_iter_lines(source), start=1):
        if not raw.strip():
            continue
        try:
            entity = parse_entity(raw, strict=strict)
        except ParseError as exc:
            if strict:
                raise ParseError(exc.reason, offset=exc.offset, line=line_no) from exc
            store.skipped += 1
            continue
        if entity.id in store.entities:
            store.duplicates += 1
        store.entities[entity.id] = entity
    return store


def load_dump_path(path: str, strict: bool = False) -> EntityStore:
    with open(path, "rb") as fh:
        return load_dump(fh, strict=strict)


def dump_store(store: EntityStore) -> str:
    """Serialize a store back to the canonical dump format, sorted by id."""
    return "".join(entity_to_line(store.entities[i]) + "\n"
                   for i in sorted(store.entities))


# --- Wikidata full-format adapter ---------------------------------------

def _reduce_datavalue(datavalue: dict) -> str | None:
    kind = datavalue.get("type")
    value = datavalue.get("value")
    if kind == "wikibase-entityid":
        if isinstance(value, dict):
            if "id" in value:
                return value["id"]
            if "numeric-id" in value:
                return f"Q{value['numeric-id']}"
        return None
    if kind == "string":
        return value if isinstance(value, str) else None
    if kind == "monolingualtext":
        return value.get("text") if isinstance(value, dict) else None
    if kind == "time":
        return value.get("time") if isinstance(value, dict) else None
    if kind == "quantity":
        return value.get("amount") if isinstance(value, dict) else None
    if kind == "globecoordinate":
        if isinstance(value, dict):
            return f"{value.get('latitude')},{value.get('longitude')}"
        return None
    return None


def reduce_wikidata_record(record: dict) -> Entity:
    """Reduce a full Wikidata entity record to the simplified form.

    Keeps one value string per truthy statement (deprecated ranks and
    somevalue/novalue snaks are dropped); qualifiers and references are
    ignored entirely.
    """
    item_id = record.get("id")
    if not isinstance(item_id, str) or not ITEM_ID_RE.match(item_id):
        raise ParseError(f"invalid item id {item_id!r}")
    claims: dict[str, set[str]] = {}
    for prop, statements in (record.get("claims") or {}).items():
        if not PROPERTY_ID_RE.match(prop) or not isinstance(statements, list):
            continue
        values: set[str] = set()
        for statement in statements:
            if not isinstance(statement, dict):
                continue
            if statement.get("rank") == "deprecated":
                continue
            snak = statement.get("mainsnak") or {}
            if snak.get("snaktype") != "value":
                continue
            reduced = _reduce_datavalue(snak.get("datavalue") or {})
            if reduced is not None:
                values.add(reduced)
        if values:
            claims[prop] = values
    return Entity(item_id, claims)


def load_wikidata_dump(source: IO[bytes] | Iterable[bytes]) -> EntityStore:
    """Stream a Wikidata-style JSON dump (one entity per line).

    Tolerates the array framing of official dumps: bare ``[`` / ``]`` lines
    and trailing commas. Unparseable lines are counted as skipped.
    """
    store = EntityStore()
    for raw in _iter_lines(source):
        stripped = raw.strip()
        if stripped in (b"", b"[", b"]"):
            continue
        if stripped.endswith(b","):
            stripped = stripped[:-1]
        try:
            record = json.loads(stripped)
            entity = reduce_wikidata_record(record)
        except (json.JSONDecodeError, ParseError):
            store.skipped += 1
            continue
        if entity.id in store.entities:
            store.duplicates += 1
        store.entities[entity.id] = entity
    return store
