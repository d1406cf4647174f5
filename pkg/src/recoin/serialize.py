"""JSON-shaped dict views of the domain types.

Keys are snake_case and mirror the domain fields; percentages appear both at
full precision and as a pre-rounded display string; timestamps are RFC 3339.
Shared by the HTTP service and the CLI's machine-readable output.
"""

from __future__ import annotations

from datetime import timezone

from .index import round_half_up
from .recommender import CompletenessReport, Recommendation
from .session import EditSession, TaskResult


def recommendation_dict(rec: Recommendation) -> dict:
    return {
        "property_id": rec.property_id,
        "count": rec.count,
        "class_size": rec.class_size,
        "relevance": rec.relevance,
        "display": rec.display,
        "class_id": rec.class_id,
    }


def report_dict(report: CompletenessReport) -> dict:
    return {
        "level": report.level,
        "level_label": report.level_label,
        "score": report.score,
        "score_display": round_half_up(report.score),
        "avg_top5_missing": report.avg_top5_missing,
        "avg_top5_display": round_half_up(report.avg_top5_missing),
        "missing": [recommendation_dict(r) for r in report.missing],
        "classes_used": list(report.classes_used),
        "fingerprint": report.fingerprint,
    }


def session_dict(session: EditSession) -> dict:
    return {
        "session_id": session.session_id,
        "condition": session.condition.value,
        "ui_variant": session.condition.ui_variant,
        "item_id": session.item_id,
        "start": session.start.astimezone(timezone.utc).isoformat(),
        "limit_seconds": session.limit_seconds,
        "before": report_dict(session.before_report),
        "fingerprint": session.before_report.fingerprint,
    }


def result_dict(session: EditSession, result: TaskResult) -> dict:
    return {
        "session_id": session.session_id,
        "relevance": result.relevance,
        "grade": result.grade.letter,
        "usage": result.usage,
        "edit_count": result.edit_count,
        "before_score": session.before_report.score,
        "after_score": session.after_score,
        "fingerprint": session.before_report.fingerprint,
    }
