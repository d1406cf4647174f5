"""Missing-property recommendations, completeness scoring and grading.

A property is recommended for an item when members of the item's class hold
it but the item does not. Its relevance is the share of class members
holding it, as a percentage. The completeness score is 100 minus the mean
relevance of the up-to-five most relevant missing properties; that mean also
drives the five-level indicator.

What-if queries support the interactive redesign: deselected properties are
removed from scoring, and occurrence bounds filter the displayed list
without touching the score.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FingerprintMismatchError, ValidationError
from .index import ClassIndex, class_of, percent_display
from .ingest import Entity, property_sort_key

# Indicator bands over avg_top5_missing: upper bound (exclusive; None = no
# bound), level, label. The published anchor points are the first two bands;
# the rest continue the 5-point spacing.
LEVEL_BANDS: tuple[tuple[float | None, int, str], ...] = (
    (5.0, 5, "most complete"),
    (10.0, 4, "quite complete"),
    (15.0, 3, "somewhat complete"),
    (20.0, 2, "rather incomplete"),
    (None, 1, "least complete"),
)

# Grade bands over the before/after score delta, left-closed.
GRADE_BANDS: tuple[tuple[float | None, str], ...] = (
    (5.0, "F"),
    (10.0, "D"),
    (20.0, "C"),
    (30.0, "B"),
    (None, "A"),
)

GRADE_ORDER = {"F": 0, "D": 1, "C": 2, "B": 3, "A": 4}

DEFAULT_RECOMMENDATION_LIMIT = 10

# The indicator statistic always averages over five slots; when fewer than
# five properties are missing the empty slots contribute zero. This keeps the
# score monotone under adding recommended properties and under deselection.
TOP_SLOTS = 5


@dataclass(frozen=True)
class Recommendation:
    """A missing property with its occurrence statistics."""

    property_id: str
    count: int
    class_size: int
    relevance: float
    class_id: str

    @property
    def display(self) -> str:
        return percent_display(self.count, self.class_size)


@dataclass(frozen=True)
class WhatIfQuery:
    """Interactive reconfiguration of a completeness computation.

    ``deselected`` properties are ignored by scoring; the count bounds only
    filter which recommendations are displayed.
    """

    deselected: frozenset[str] = frozenset()
    min_count: int | None = None
    max_count: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "deselected", frozenset(self.deselected))

    def validate(self) -> None:
        for bound in (self.min_count, self.max_count):
            if bound is not None and bound < 0:
                raise ValidationError("count bounds must be non-negative")
        if (self.min_count is not None and self.max_count is not None
                and self.min_count > self.max_count):
            raise ValidationError(
                f"min_count {self.min_count} exceeds max_count {self.max_count}")

    def admits(self, count: int) -> bool:
        if self.min_count is not None and count < self.min_count:
            return False
        if self.max_count is not None and count > self.max_count:
            return False
        return True

    @property
    def is_neutral(self) -> bool:
        return not self.deselected and self.min_count is None and self.max_count is None


NEUTRAL_QUERY = WhatIfQuery()


@dataclass(frozen=True)
class CompletenessReport:
    level: int
    level_label: str
    score: float
    avg_top5_missing: float
    missing: tuple[Recommendation, ...]
    classes_used: tuple[str, ...]
    fingerprint: str
    query: WhatIfQuery = NEUTRAL_QUERY


@dataclass(frozen=True)
class Grade:
    letter: str
    delta: float


def level_of(avg_top5_missing: float,
             bands: tuple = LEVEL_BANDS) -> tuple[int, str]:
    for upper, level, label in bands:
        if upper is None or avg_top5_missing < upper:
            return level, label
    raise ValidationError("level bands do not cover the value")  # pragma: no cover


def missing_properties(entity: Entity, index: ClassIndex) -> list[Recommendation]:
    """All properties expected for the entity's classes that it lacks.

    The instance-of and occupation properties are not candidates (every
    class member holds them by construction). A property expected by several
    of the entity's classes keeps its maximum relevance; among equal
    relevances the larger class wins, then the smaller class id. The result
    is sorted by relevance descending, ties by ascending numeric property id.
    """
    assignment = class_of(entity, index.config)
    excluded = {index.config.instance_of, index.config.occupation}
    best: dict[str, Recommendation] = {}
    for cls in sorted(assignment.classes):
        if cls not in index.class_sizes:
            continue
        size = index.class_sizes[cls]
        for prop, count in index.property_counts.get(cls, {}).items():
            if prop in excluded or prop in entity.claims:
                continue
            candidate = Recommendation(prop, count, size, 100.0 * count / size, cls)
            current = best.get(prop)
            if current is None or _prefer(candidate, current):
                best[prop] = candidate
    return sorted(best.values(),
                  key=lambda r: (-r.relevance, property_sort_key(r.property_id)))


def _prefer(a: Recommendation, b: Recommendation) -> bool:
    if a.relevance != b.relevance:
        return a.relevance > b.relevance
    if a.class_size != b.class_size:
        return a.class_size > b.class_size
    return a.class_id < b.class_id


def recommend(entity: Entity, index: ClassIndex,
              limit: int = DEFAULT_RECOMMENDATION_LIMIT) -> list[Recommendation]:
    """The first ``limit`` missing properties (default cap: ten)."""
    if limit < 1:
        raise ValidationError("limit must be a positive integer")
    return missing_properties(entity, index)[:limit]


def completeness(entity: Entity, index: ClassIndex,
                 query: WhatIfQuery = NEUTRAL_QUERY) -> CompletenessReport:
    """Score an entity against its class profile.

    Deselected properties are dropped from the scoring candidates before the
    five-slot mean is taken; the count bounds filter only the report's
    displayed list. With nothing missing the average is 0 and the score 100.
    """
    query.validate()
    missing = missing_properties(entity, index)
    scoring = [r for r in missing if r.property_id not in query.deselected]
    avg = sum(r.relevance for r in scoring[:TOP_SLOTS]) / TOP_SLOTS
    level, label = level_of(avg)
    assignment = class_of(entity, index.config)
    return CompletenessReport(
        level=level,
        level_label=label,
        score=100.0 - avg,
        avg_top5_missing=avg,
        missing=tuple(r for r in missing if query.admits(r.count)),
        classes_used=tuple(sorted(c for c in assignment.classes
                                  if c in index.class_sizes)),
        fingerprint=index.built_from,
        query=query,
    )


def relevance_delta(before: CompletenessReport, after: CompletenessReport) -> float:
    """Score difference after minus before; both reports must share an index."""
    if before.fingerprint != after.fingerprint:
        raise FingerprintMismatchError(
            f"reports were computed against different indexes "
            f"({before.fingerprint} vs {after.fingerprint})")
    return after.score - before.score


def grade(delta: float, bands: tuple = GRADE_BANDS) -> Grade:
    """Letter grade for a completeness delta, per the left-closed bands."""
    for upper, letter in bands:
        if upper is None or delta < upper:
            return Grade(letter, delta)
    raise ValidationError("grade bands do not cover the value")  # pragma: no cover
