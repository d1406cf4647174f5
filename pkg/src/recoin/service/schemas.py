"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class RecommendationModel(BaseModel):
    property_id: str
    count: int
    class_size: int
    relevance: float
    display: str
    class_id: str


class CompletenessModel(BaseModel):
    level: int
    level_label: str
    score: float
    score_display: str
    avg_top5_missing: float
    avg_top5_display: str
    missing: list[RecommendationModel]
    classes_used: list[str]
    fingerprint: str


class EntityModel(BaseModel):
    id: str
    claims: dict[str, list[str]]
    fingerprint: str


class RecommendationsModel(BaseModel):
    item_id: str
    recommendations: list[RecommendationModel]
    fingerprint: str


class WhatIfRequest(BaseModel):
    deselected: list[str] = Field(default_factory=list)
    min_count: int | None = None
    max_count: int | None = None


class SessionCreateRequest(BaseModel):
    item_id: str
    condition: str | None = None  # falls back to the server's default
    limit_seconds: int = 600


class SessionModel(BaseModel):
    session_id: str
    condition: str
    ui_variant: str
    item_id: str
    start: str
    limit_seconds: int
    before: CompletenessModel
    fingerprint: str


class EditRequest(BaseModel):
    property: str
    value: str
    via_recoin: bool = False


class EditResponse(BaseModel):
    session_id: str
    edit_count: int
    usage: int
    remaining_seconds: float


class FinalizeResponse(BaseModel):
    session_id: str
    relevance: float
    grade: str
    usage: int
    edit_count: int
    before_score: float
    after_score: float
    fingerprint: str


class SelfReportRequest(BaseModel):
    comprehension: int
    fairness: int
    accuracy: int
    trust: int
    free_text: dict[str, str] = Field(default_factory=dict)


class SelfReportResponse(BaseModel):
    session_id: str
    stored: bool
    superseded: bool


class SummaryRow(BaseModel):
    condition: str
    n: int
    grade: str
    relevance: float
    comprehension: int
    fairness: int
    accuracy: int
    trust: int


class SummaryResponse(BaseModel):
    conditions: list[SummaryRow]
    sessions_reported: int


class ReloadRequest(BaseModel):
    path: str | None = None


class ReloadResponse(BaseModel):
    fingerprint: str
    noop: bool


class ErrorResponse(BaseModel):
    detail: str
