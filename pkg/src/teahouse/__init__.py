"""Deterministic teahouse-themed cognitive-motor task engine.

Three everyday-task games (item selection, steam timing, change counting)
driven by grasp gestures, with synchronized scent cueing, automatic
performance logging, a usability/statistics analysis pipeline, and a live
session service.
"""

from .core import (
    AgeGroup,
    DifficultyParams,
    EducationBand,
    EventKind,
    GameEvent,
    GameId,
    Gender,
    ParticipantProfile,
    TASK_ORDER,
    TechBackground,
    derive_age_group,
    validate_profile,
)
from .gesture import GestureEvent, GestureKind, InputFrame, InputScript, recognize
from .metrics import TaskMetrics, compute_metrics
from .questionnaires import (
    QuestionnaireBundle,
    SusResponse,
    SusResult,
    TlxResponse,
    UsabilityBand,
    band_sus,
    likert_frequencies,
    score_sus,
    summarize_tlx,
)
from .session import (
    Dataset,
    SessionEngine,
    SessionRecord,
    StateSnapshot,
    load_dataset,
    load_record,
    replay_record,
    run_session,
    save_record,
    verify_record,
)
from .stats import describe, kruskal_wallis, shapiro_wilk

__version__ = "0.1.0"

__all__ = [
    "AgeGroup",
    "DifficultyParams",
    "Dataset",
    "EducationBand",
    "EventKind",
    "GameEvent",
    "GameId",
    "Gender",
    "GestureEvent",
    "GestureKind",
    "InputFrame",
    "InputScript",
    "ParticipantProfile",
    "QuestionnaireBundle",
    "SessionEngine",
    "SessionRecord",
    "StateSnapshot",
    "SusResponse",
    "SusResult",
    "TASK_ORDER",
    "TaskMetrics",
    "TechBackground",
    "TlxResponse",
    "UsabilityBand",
    "band_sus",
    "compute_metrics",
    "derive_age_group",
    "describe",
    "kruskal_wallis",
    "likert_frequencies",
    "load_dataset",
    "load_record",
    "recognize",
    "replay_record",
    "run_session",
    "save_record",
    "score_sus",
    "shapiro_wilk",
    "summarize_tlx",
    "validate_profile",
    "verify_record",
]
