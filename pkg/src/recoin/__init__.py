"""Relative-completeness recommender for entity/property knowledge bases."""

from .errors import (
    DegenerateDataError,
    FingerprintMismatchError,
    NotFoundError,
    ParseError,
    RecoinError,
    SnapshotError,
    StateError,
    TimeLimitError,
    ValidationError,
)
from .index import (
    ClassIndex,
    IndexConfig,
    build_index,
    class_of,
    frequency,
    percent_display,
    read_snapshot,
    write_snapshot,
)
from .ingest import (
    Entity,
    EntityStore,
    dump_store,
    entity_to_line,
    load_dump,
    load_dump_path,
    load_wikidata_dump,
    parse_entity,
    store_fingerprint,
)
from .recommender import (
    CompletenessReport,
    Grade,
    Recommendation,
    WhatIfQuery,
    completeness,
    grade,
    missing_properties,
    recommend,
    relevance_delta,
)
from .session import (
    Condition,
    EditSession,
    SelfReport,
    SessionManager,
    TaskResult,
)

__version__ = "0.1.0"

__all__ = [
    "ClassIndex", "CompletenessReport", "Condition", "DegenerateDataError",
    "EditSession", "Entity", "EntityStore", "FingerprintMismatchError",
    "Grade", "IndexConfig", "NotFoundError", "ParseError", "Recommendation",
    "RecoinError", "SelfReport", "SessionManager", "SnapshotError",
    "StateError", "TaskResult", "TimeLimitError", "ValidationError",
    "WhatIfQuery", "build_index", "class_of", "completeness", "dump_store",
    "entity_to_line", "frequency", "grade", "load_dump", "load_dump_path",
    "load_wikidata_dump", "missing_properties", "parse_entity",
    "percent_display", "read_snapshot", "recommend", "relevance_delta",
    "store_fingerprint", "write_snapshot",
]
