"""HTTP/JSON API over the engine.

Handlers are thin adapters over the library operations. Read endpoints work
against an immutable (index, store) pair swapped atomically on reload, so
identical requests against one fingerprint return identical bytes. Session
endpoints are serialized per session id.

Error mapping: validation 400, unknown id 404, state conflicts 409, elapsed
time limit 410, corrupt snapshot on reload 422.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..analytics import condition_summary, read_session_csv
from ..errors import (
    FingerprintMismatchError,
    NotFoundError,
    ParseError,
    RecoinError,
    SnapshotError,
    StateError,
    TimeLimitError,
    ValidationError,
)
from ..index import ClassIndex, read_snapshot
from ..ingest import EntityStore
from ..recommender import WhatIfQuery, completeness, recommend
from ..serialize import recommendation_dict, report_dict, result_dict, session_dict
from ..session import Condition, SelfReport, SessionManager
from . import schemas

STATUS_BY_ERROR = (
    (ValidationError, 400),
    (ParseError, 400),
    (NotFoundError, 404),
    (TimeLimitError, 410),
    (StateError, 409),
    (FingerprintMismatchError, 409),
    (SnapshotError, 422),
)


@dataclass
class ApiConfig:
    snapshot_path: str
    host: str = "127.0.0.1"
    port: int = 8080
    data_dir: str | None = None
    default_condition: str = "C4"
    cors_origins: list[str] = field(default_factory=list)
    ui_dir: str | None = None

    def validate(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ValidationError(f"port {self.port} outside 1..65535")
        try:
            Condition(self.default_condition)
        except ValueError:
            raise ValidationError(
                f"unknown default condition {self.default_condition!r}") from None
        if self.data_dir is not None:
            directory = Path(self.data_dir)
            directory.mkdir(parents=True, exist_ok=True)
            probe = directory / ".writable"
            try:
                probe.touch()
                probe.unlink()
            except OSError as exc:
                raise ValidationError(f"data directory not writable: {exc}") from exc


class Engine:
    """Mutable holder for the immutable (index, store) pair plus sessions."""

    def __init__(self, index: ClassIndex, store: EntityStore,
                 config: ApiConfig, clock=None):
        self.config = config
        self._pair = (index, store)
        self._swap_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        kwargs = {} if clock is None else {"clock": clock}
        self.sessions = SessionManager(store, index, data_dir=config.data_dir, **kwargs)

    def current(self) -> tuple[ClassIndex, EntityStore]:
        return self._pair

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._swap_lock:
            return self._session_locks.setdefault(session_id, threading.Lock())

    def reload(self, path: str | None) -> tuple[str, bool]:
        snapshot = path or self.config.snapshot_path
        index, store = read_snapshot(snapshot)
        with self._swap_lock:
            if index.built_from == self._pair[0].built_from:
                return index.built_from, True
            self._pair = (index, store)
            self.sessions.index = index
            self.sessions.store = store
            return index.built_from, False


def build_app(index: ClassIndex, store: EntityStore, config: ApiConfig,
              clock=None) -> FastAPI:
    config.validate()
    engine = Engine(index, store, config, clock=clock)
    app = FastAPI(title="recoin", version="0.1.0")
    app.state.engine = engine

    if config.cors_origins:
        from fastapi.middleware.cors import CORSMiddleware
        app.add_middleware(CORSMiddleware, allow_origins=config.cors_origins,
                           allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RecoinError)
    async def domain_error(_request: Request, exc: RecoinError):
        for err_type, status in STATUS_BY_ERROR:
            if isinstance(exc, err_type):
                return JSONResponse({"detail": str(exc)}, status_code=status)
        return JSONResponse({"detail": str(exc)}, status_code=500)

    @app.exception_handler(RequestValidationError)
    async def body_error(_request: Request, exc: RequestValidationError):
        return JSONResponse({"detail": str(exc.errors())}, status_code=400)

    def get_entity(item_id: str, store: EntityStore):
        entity = store.get(item_id)
        if entity is None:
            raise NotFoundError(f"unknown item {item_id!r}")
        return entity

    @app.get("/api/entity/{item_id}", response_model=schemas.EntityModel)
    def entity_endpoint(item_id: str):
        index, store = engine.current()
        entity = get_entity(item_id, store)
        claims = {p: sorted(vs) for p, vs in sorted(entity.claims.items())}
        return {"id": entity.id, "claims": claims, "fingerprint": index.built_from}

    @app.get("/api/entity/{item_id}/completeness",
             response_model=schemas.CompletenessModel)
    def completeness_endpoint(item_id: str):
        index, store = engine.current()
        entity = get_entity(item_id, store)
        return report_dict(completeness(entity, index))

    @app.get("/api/entity/{item_id}/recommendations",
             response_model=schemas.RecommendationsModel)
    def recommendations_endpoint(item_id: str, limit: int = 10,
                                 min_count: int | None = None,
                                 max_count: int | None = None):
        index, store = engine.current()
        entity = get_entity(item_id, store)
        bounds = WhatIfQuery(min_count=min_count, max_count=max_count)
        bounds.validate()
        recs = [r for r in recommend(entity, index, limit=limit)
                if bounds.admits(r.count)]
        return {
            "item_id": item_id,
            "recommendations": [recommendation_dict(r) for r in recs],
            "fingerprint": index.built_from,
        }

    @app.post("/api/entity/{item_id}/whatif",
              response_model=schemas.CompletenessModel)
    def whatif_endpoint(item_id: str, body: schemas.WhatIfRequest):
        index, store = engine.current()
        entity = get_entity(item_id, store)
        query = WhatIfQuery(deselected=frozenset(body.deselected),
                            min_count=body.min_count, max_count=body.max_count)
        return report_dict(completeness(entity, index, query))

    @app.post("/api/session", response_model=schemas.SessionModel)
    def create_session(body: schemas.SessionCreateRequest):
        condition = body.condition or config.default_condition
        session = engine.sessions.start_session(condition, body.item_id,
                                                limit_seconds=body.limit_seconds)
        return session_dict(session)

    @app.post("/api/session/{session_id}/edit", response_model=schemas.EditResponse)
    def edit_session(session_id: str, body: schemas.EditRequest):
        with engine.session_lock(session_id):
            session = engine.sessions.apply_edit(
                session_id, body.property, body.value, body.via_recoin)
            remaining = (session.deadline() - engine.sessions.clock()).total_seconds()
        return {
            "session_id": session_id,
            "edit_count": len(session.edits),
            "usage": session.usage,
            "remaining_seconds": max(remaining, 0.0),
        }

    @app.post("/api/session/{session_id}/finalize",
              response_model=schemas.FinalizeResponse)
    def finalize_session(session_id: str):
        with engine.session_lock(session_id):
            result = engine.sessions.finalize(session_id)
            session = engine.sessions.sessions[session_id]
        return result_dict(session, result)

    @app.post("/api/session/{session_id}/report",
              response_model=schemas.SelfReportResponse)
    def report_session(session_id: str, body: schemas.SelfReportRequest):
        report = SelfReport(body.comprehension, body.fairness, body.accuracy,
                            body.trust, body.free_text)
        with engine.session_lock(session_id):
            ack = engine.sessions.record_self_report(session_id, report)
        return {"session_id": session_id, "stored": True,
                "superseded": ack["superseded"]}

    @app.get("/api/analytics/summary", response_model=schemas.SummaryResponse)
    def analytics_summary():
        rows = read_session_csv(engine.sessions.export_csv())
        if not rows:
            return {"conditions": [], "sessions_reported": 0}
        medians = condition_summary(rows)
        return {
            "conditions": [vars(m) for m in medians],
            "sessions_reported": len(rows),
        }

    @app.post("/api/index/reload", response_model=schemas.ReloadResponse)
    def reload_index(body: schemas.ReloadRequest):
        fingerprint, noop = engine.reload(body.path)
        return {"fingerprint": fingerprint, "noop": noop}

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def create_app(config: ApiConfig) -> FastAPI:
    """Load the configured snapshot and build the application."""
    index, store = read_snapshot(config.snapshot_path)
    return build_app(index, store, config)
