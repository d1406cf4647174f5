"""Class -> property frequency statistics and the index snapshot format.

The relatedness rule: two items are similar when they share a class. The
class of an item is the value set of its instance-of property, except for
instances of human, where the occupation values are used instead. The three
identifiers involved are configuration; defaults match Wikidata.

An index snapshot is a versioned, diffable flat text file:

    recoin-index 1
    checksum <sha256 hex of everything after this line>
    fingerprint <store content hash>
    config instance_of=P31 human=Q5 occupation=P106
    classes <n>
    <class id> <size>                 # sorted by class id
    properties <m>
    <class id> <property id> <count>  # sorted by class id, numeric property
    entities <k>
    <canonical entity record>         # sorted by item id

The entities section carries the store the index was built from, so query
and serve runs need only the snapshot file.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .errors import NotFoundError, SnapshotError
from .ingest import (
    Entity,
    EntityStore,
    entity_to_line,
    parse_entity,
    property_sort_key,
    store_fingerprint,
)

SNAPSHOT_MAGIC = "recoin-index"
SNAPSHOT_VERSION = 1


@dataclass(frozen=True)
class IndexConfig:
    """Identifiers driving the class-assignment rule."""

    instance_of: str = "P31"
    human: str = "Q5"
    occupation: str = "P106"


DEFAULT_CONFIG = IndexConfig()


@dataclass
class ClassAssignment:
    item_id: str
    classes: set[str]
    via_occupation: bool


def class_of(entity: Entity, config: IndexConfig = DEFAULT_CONFIG) -> ClassAssignment:
    """Classes an entity belongs to for similarity purposes.

    Instances of human are classed by their occupation values (possibly
    none); everything else by its instance-of values.
    """
    instance_values = entity.claims.get(config.instance_of, set())
    if config.human in instance_values:
        return ClassAssignment(entity.id, set(entity.claims.get(config.occupation, set())), True)
    return ClassAssignment(entity.id, set(instance_values), False)


@dataclass
class ClassIndex:
    """Per-class member counts and per-(class, property) occurrence counts."""

    class_sizes: dict[str, int] = field(default_factory=dict)
    property_counts: dict[str, dict[str, int]] = field(default_factory=dict)
    config: IndexConfig = DEFAULT_CONFIG
    built_from: str = ""

    def has_class(self, class_id: str) -> bool:
        return class_id in self.class_sizes

    def count(self, class_id: str, prop: str) -> int:
        return self.property_counts.get(class_id, {}).get(prop, 0)

    def size(self, class_id: str) -> int:
        return self.class_sizes[class_id]


def build_index(store: EntityStore, config: IndexConfig = DEFAULT_CONFIG) -> ClassIndex:
    """Single pass over the store counting members and property holders.

    Each entity contributes one increment to every class it belongs to, and
    one increment per (class, held property) pair; the entity is included in
    its own class census.
    """
    sizes: dict[str, int] = {}
    counts: dict[str, dict[str, int]] = {}
    for entity in store.entities.values():
        assignment = class_of(entity, config)
        for cls in assignment.classes:
            sizes[cls] = sizes.get(cls, 0) + 1
            per_class = counts.setdefault(cls, {})
            for prop in entity.claims:
                per_class[prop] = per_class.get(prop, 0) + 1
    return ClassIndex(sizes, counts, config, store_fingerprint(store))


def frequency(index: ClassIndex, class_id: str, prop: str) -> float:
    """Fraction of class members holding the property; 0 if none do."""
    if class_id not in index.class_sizes:
        raise NotFoundError(f"unknown class {class_id!r}")
    return index.count(class_id, prop) / index.class_sizes[class_id]


def percent_display(count: int, size: int) -> str:
    """Exact percentage of count/size rendered half-up to 2 decimals."""
    value = Decimal(count * 100) / Decimal(size)
    return f"{value.quantize(Decimal('0.01'), rounding=ROUND_HALF_UP)}%"


def round_half_up(value: float, places: int = 2) -> str:
    """Decimal string of ``value`` rounded half-up to ``places`` decimals."""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


# --- snapshot persistence ------------------------------------------------

def _snapshot_body(index: ClassIndex, store: EntityStore) -> str:
    cfg = index.config
    lines = [
        f"fingerprint {index.built_from}",
        f"config instance_of={cfg.instance_of} human={cfg.human} occupation={cfg.occupation}",
        f"classes {len(index.class_sizes)}",
    ]
    for cls in sorted(index.class_sizes):
        lines.append(f"{cls} {index.class_sizes[cls]}")
    triples = [
        (cls, prop, count)
        for cls in sorted(index.property_counts)
        for prop, count in sorted(index.property_counts[cls].items(),
                                  key=lambda item: property_sort_key(item[0]))
    ]
    lines.append(f"properties {len(triples)}")
    lines.extend(f"{cls} {prop} {count}" for cls, prop, count in triples)
    lines.append(f"entities {len(store.entities)}")
    lines.extend(entity_to_line(store.entities[i]) for i in sorted(store.entities))
    return "\n".join(lines) + "\n"


def write_snapshot(path: str, index: ClassIndex, store: EntityStore) -> None:
    body = _snapshot_body(index, store)
    checksum = hashlib.sha256(body.encode("utf-8")).hexdigest()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION}\n")
        fh.write(f"checksum {checksum}\n")
        fh.write(body)


def read_snapshot(path: str) -> tuple[ClassIndex, EntityStore]:
    """Load and verify a snapshot; raises SnapshotError on any defect."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            checksum_line = fh.readline().rstrip("\n")
            body = fh.read()
    except OSError as exc:
        raise SnapshotError(f"cannot read snapshot: {exc}") from exc

    if header.split() != [SNAPSHOT_MAGIC, str(SNAPSHOT_VERSION)]:
        raise SnapshotError(f"unrecognized snapshot header {header!r}")
    if not checksum_line.startswith("checksum "):
        raise SnapshotError("missing checksum line")
    expected = checksum_line.split(" ", 1)[1]
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if actual != expected:
        raise SnapshotError("checksum mismatch, snapshot is corrupt")

    lines = body.split("\n")
    pos = 0

    def next_line() -> str:
        nonlocal pos
        if pos >= len(lines):
            raise SnapshotError("snapshot truncated")
        line = lines[pos]
        pos += 1
        return line

    def section(name: str) -> int:
        line = next_line()
        parts = line.split()
        if len(parts) != 2 or parts[0] != name:
            raise SnapshotError(f"expected '{name} <n>' line, got {line!r}")
        return int(parts[1])

    fp_line = next_line()
    if not fp_line.startswith("fingerprint "):
        raise SnapshotError("missing fingerprint line")
    fingerprint = fp_line.split(" ", 1)[1]

    cfg_line = next_line()
    if not cfg_line.startswith("config "):
        raise SnapshotError("missing config line")
    cfg_fields = dict(part.split("=", 1) for part in cfg_line.split()[1:])
    try:
        config = IndexConfig(cfg_fields["instance_of"], cfg_fields["human"],
                             cfg_fields["occupation"])
    except KeyError as exc:
        raise SnapshotError(f"config missing field {exc}") from exc

    sizes: dict[str, int] = {}
    for _ in range(section("classes")):
        cls, size = next_line().split()
        sizes[cls] = int(size)
        if sizes[cls] < 1:
            raise SnapshotError(f"class {cls} has non-positive size")

    counts: dict[str, dict[str, int]] = {}
    for _ in range(section("properties")):
        cls, prop, count_s = next_line().split()
        count = int(count_s)
        if cls not in sizes:
            raise SnapshotError(f"property row references unknown class {cls}")
        if not 1 <= count <= sizes[cls]:
            raise SnapshotError(f"count {count} for ({cls}, {prop}) out of range")
        counts.setdefault(cls, {})[prop] = count

    store = EntityStore()
    for _ in range(section("entities")):
        entity = parse_entity(next_line())
        store.entities[entity.id] = entity

    if any(line.strip() for line in lines[pos:]):
        raise SnapshotError("trailing data after entities section")
    if store_fingerprint(store) != fingerprint:
        raise SnapshotError("fingerprint does not match embedded entities")

    return ClassIndex(sizes, counts, config, fingerprint), store
