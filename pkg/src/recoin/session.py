"""Timed, condition-tagged editing sessions with an append-only log.

A session freezes a completeness report for its target item at start, then
accepts edits against a private working copy until the time limit runs out.
Finalizing recomputes completeness from scratch on the edited copy and
grades the score delta. The shared store and index are never mutated.

Every state change is appended as one JSON line to ``sessions.log`` in the
data directory, so a manager can be rebuilt from the log alone (given the
same index snapshot) and self-reports can be exported as CSV for analysis.
"""

from __future__ import annotations

import csv
import io
import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable

from .errors import (
    NotFoundError,
    StateError,
    TimeLimitError,
    ValidationError,
)
from .index import ClassIndex
from .ingest import Entity, EntityStore, PROPERTY_ID_RE
from .recommender import (
    CompletenessReport,
    Grade,
    completeness,
    grade,
    relevance_delta,
)

DEFAULT_LIMIT_SECONDS = 600

MEASURE_NAMES = ("comprehension", "fairness", "accuracy", "trust")

CSV_COLUMNS = ("condition", "grade", "relevance", "usage",
               "comprehension", "fairness", "accuracy", "trust")


class Condition(str, Enum):
    """Experimental condition; fixes the UI variant and onboarding content."""

    BASELINE = "BASELINE"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"

    @property
    def ui_variant(self) -> str:
        return {"BASELINE": "none", "C1": "R1", "C2": "R1",
                "C3": "RX", "C4": "RIX"}[self.value]

    @property
    def onboarding_mentions_recoin(self) -> bool:
        return self not in (Condition.BASELINE, Condition.C1)


@dataclass(frozen=True)
class Edit:
    property_id: str
    value: str
    via_recoin: bool
    at: datetime


@dataclass(frozen=True)
class TaskResult:
    relevance: float
    usage: int
    grade: Grade
    edit_count: int


@dataclass(frozen=True)
class SelfReport:
    comprehension: int
    fairness: int
    accuracy: int
    trust: int
    free_text: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        if not 1 <= self.comprehension <= 5:
            raise ValidationError("comprehension must be in 1..5")
        for name in ("fairness", "accuracy", "trust"):
            if not 1 <= getattr(self, name) <= 7:
                raise ValidationError(f"{name} must be in 1..7")
        unknown = set(self.free_text) - set(MEASURE_NAMES)
        if unknown:
            raise ValidationError(f"free_text keys must be measure names, got {unknown}")


@dataclass
class EditSession:
    session_id: str
    condition: Condition
    item_id: str
    start: datetime
    limit_seconds: int
    before_report: CompletenessReport
    working: Entity
    index: ClassIndex = field(repr=False, default=None)  # index at start, kept for finalize
    edits: list[Edit] = field(default_factory=list)
    finalized: bool = False
    result: TaskResult | None = None
    after_score: float | None = None
    self_report: SelfReport | None = None
    report_superseded: int = 0

    def deadline(self) -> datetime:
        from datetime import timedelta
        return self.start + timedelta(seconds=self.limit_seconds)

    @property
    def usage(self) -> int:
        return sum(1 for e in self.edits if e.via_recoin)


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _rfc3339(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat()


class SessionManager:
    """Runs sessions against one immutable store/index pair.

    ``data_dir`` enables the append-only log; without it sessions are
    memory-only. ``clock`` is injectable for deterministic timing in tests.
    """

    def __init__(self, store: EntityStore, index: ClassIndex,
                 data_dir: str | Path | None = None,
                 clock: Callable[[], datetime] = _utc_now):
        self.store = store
        self.index = index
        self.clock = clock
        self.sessions: dict[str, EditSession] = {}
        self._completed: list[str] = []
        self.log_path: Path | None = None
        if data_dir is not None:
            directory = Path(data_dir)
            directory.mkdir(parents=True, exist_ok=True)
            self.log_path = directory / "sessions.log"

    # -- log plumbing ----------------------------------------------------

    def _append(self, record: dict) -> None:
        if self.log_path is None:
            return
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, separators=(",", ":"), sort_keys=True) + "\n")

    # -- operations ------------------------------------------------------

    def start_session(self, condition: Condition | str, item_id: str,
                      limit_seconds: int = DEFAULT_LIMIT_SECONDS) -> EditSession:
        try:
            condition = Condition(condition)
        except ValueError:
            raise ValidationError(f"unknown condition {condition!r}") from None
        if limit_seconds < 1:
            raise ValidationError("limit_seconds must be positive")
        entity = self.store.get(item_id)
        if entity is None:
            raise NotFoundError(f"unknown item {item_id!r}")
        before = completeness(entity, self.index)
        session = EditSession(
            session_id=uuid.uuid4().hex,
            condition=condition,
            item_id=item_id,
            start=self.clock(),
            limit_seconds=limit_seconds,
            before_report=before,
            working=entity.copy(),
            index=self.index,
        )
        self.sessions[session.session_id] = session
        self._append({
            "event": "start",
            "session_id": session.session_id,
            "condition": condition.value,
            "item_id": item_id,
            "ts": _rfc3339(session.start),
            "limit_seconds": limit_seconds,
            "before_score": before.score,
            "fingerprint": before.fingerprint,
        })
        return session

    def _get(self, session_id: str) -> EditSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise NotFoundError(f"unknown session {session_id!r}")
        return session

    def apply_edit(self, session_id: str, property_id: str, value: str,
                   via_recoin: bool) -> EditSession:
        session = self._get(session_id)
        if session.finalized:
            raise StateError("session is finalized")
        now = self.clock()
        if not now < session.deadline():
            raise TimeLimitError("time is up, no further edits accepted")
        if not PROPERTY_ID_RE.match(property_id):
            raise ValidationError(f"invalid property id {property_id!r}")
        if not value:
            raise ValidationError("value must be a non-empty string")
        if via_recoin and session.condition is Condition.BASELINE:
            raise ValidationError("the baseline condition has no recommender to edit through")
        edit = Edit(property_id, value, via_recoin, now)
        session.edits.append(edit)
        session.working.add_claim(property_id, value)
        self._append({
            "event": "edit",
            "session_id": session_id,
            "property": property_id,
            "value": value,
            "via_recoin": via_recoin,
            "ts": _rfc3339(now),
        })
        return session

    def finalize(self, session_id: str) -> TaskResult:
        session = self._get(session_id)
        if session.finalized:
            raise StateError("session already finalized")
        after = completeness(session.working, session.index)
        delta = relevance_delta(session.before_report, after)
        result = TaskResult(
            relevance=delta,
            usage=session.usage,
            grade=grade(delta),
            edit_count=len(session.edits),
        )
        session.finalized = True
        session.result = result
        session.after_score = after.score
        self._completed.append(session_id)
        self._append({
            "event": "finalize",
            "session_id": session_id,
            "ts": _rfc3339(self.clock()),
            "relevance": delta,
            "grade": result.grade.letter,
            "usage": result.usage,
            "edit_count": result.edit_count,
            "after_score": after.score,
        })
        return result

    def record_self_report(self, session_id: str, report: SelfReport) -> dict:
        session = self._get(session_id)
        if not session.finalized:
            raise StateError("self-report requires a finalized session")
        report.validate()
        superseded = session.self_report is not None
        if superseded:
            session.report_superseded += 1
        session.self_report = report
        self._append({
            "event": "self_report",
            "session_id": session_id,
            "ts": _rfc3339(self.clock()),
            "comprehension": report.comprehension,
            "fairness": report.fairness,
            "accuracy": report.accuracy,
            "trust": report.trust,
            "free_text": report.free_text,
            "superseded": superseded,
        })
        if self.log_path is not None:
            csv_path = self.log_path.with_name("sessions.csv")
            csv_path.write_text(self.export_csv(), encoding="utf-8")
        return {"session_id": session_id, "superseded": superseded}

    # -- export and reload -------------------------------------------------

    def export_csv(self) -> str:
        """Rows for every finalized session with a self-report, in finalize order."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for session_id in self._completed:
            session = self.sessions[session_id]
            if session.result is None or session.self_report is None:
                continue
            r, sr = session.result, session.self_report
            writer.writerow([
                session.condition.value, r.grade.letter, r.relevance, r.usage,
                sr.comprehension, sr.fairness, sr.accuracy, sr.trust,
            ])
        return buf.getvalue()

    @classmethod
    def replay(cls, store: EntityStore, index: ClassIndex,
               data_dir: str | Path,
               clock: Callable[[], datetime] = _utc_now) -> "SessionManager":
        """Rebuild a manager from its log; requires the original snapshot."""
        manager = cls(store, index, data_dir=None, clock=clock)
        manager.log_path = Path(data_dir) / "sessions.log"
        if not manager.log_path.exists():
            return manager
        with open(manager.log_path, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    manager._replay_event(json.loads(line))
        return manager

    def _replay_event(self, record: dict) -> None:
        event = record["event"]
        if event == "start":
            if record["fingerprint"] != self.index.built_from:
                raise StateError(
                    f"log was recorded against index {record['fingerprint']}, "
                    f"loaded index is {self.index.built_from}")
            entity = self.store.get(record["item_id"])
            if entity is None:
                raise StateError(f"logged item {record['item_id']!r} not in store")
            before = completeness(entity, self.index)
            self.sessions[record["session_id"]] = EditSession(
                session_id=record["session_id"],
                condition=Condition(record["condition"]),
                item_id=record["item_id"],
                start=datetime.fromisoformat(record["ts"]),
                limit_seconds=record["limit_seconds"],
                before_report=before,
                working=entity.copy(),
                index=self.index,
            )
        elif event == "edit":
            session = self._get(record["session_id"])
            edit = Edit(record["property"], record["value"], record["via_recoin"],
                        datetime.fromisoformat(record["ts"]))
            session.edits.append(edit)
            session.working.add_claim(edit.property_id, edit.value)
        elif event == "finalize":
            session = self._get(record["session_id"])
            session.finalized = True
            session.after_score = record["after_score"]
            session.result = TaskResult(
                relevance=record["relevance"],
                usage=record["usage"],
                grade=Grade(record["grade"], record["relevance"]),
                edit_count=record["edit_count"],
            )
            self._completed.append(session.session_id)
        elif event == "self_report":
            session = self._get(record["session_id"])
            if record.get("superseded"):
                session.report_superseded += 1
            session.self_report = SelfReport(
                comprehension=record["comprehension"],
                fairness=record["fairness"],
                accuracy=record["accuracy"],
                trust=record["trust"],
                free_text=record.get("free_text", {}),
            )
        else:
            raise StateError(f"unknown log event {event!r}")
