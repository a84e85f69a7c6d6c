"""Survey application: CLI, HTTP service, and session persistence."""

from .sessions import (
    DEFAULT_ITEMS,
    AnswerError,
    ExportBundle,
    Item,
    Phase,
    SessionState,
    SurveyService,
    export_bundle,
    session_to_record,
)
from .store import RecordLog, StoreCorruptionError

__all__ = [
    "DEFAULT_ITEMS",
    "AnswerError",
    "ExportBundle",
    "Item",
    "Phase",
    "SessionState",
    "SurveyService",
    "export_bundle",
    "session_to_record",
    "RecordLog",
    "StoreCorruptionError",
]
