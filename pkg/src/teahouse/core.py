"""Shared vocabulary types: participants, tasks, difficulty, game events.

No game logic lives here; the game state machines are in ``teahouse.games``
and the session orchestration in ``teahouse.session``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any

# Sanity cap used when validating ages; rejects data-entry errors.
MAX_AGE = 200

# Inclusion boundary: the engine is built for older adults.
MIN_AGE = 60


class TeahouseError(Exception):
    pass


class DomainError(TeahouseError):
    pass


class ValidationError(TeahouseError):
    """Carries one message per failed field so callers can report all of them."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ConfigError(TeahouseError):
    pass


class StateError(TeahouseError):
    pass


class Gender(Enum):
    MALE = "male"
    FEMALE = "female"
    OTHER = "other"


class EducationBand(Enum):
    Y0_3 = "0-3y"
    Y4_6 = "4-6y"
    Y7_9 = "7-9y"
    Y10_12 = "10-12y"
    Y12_PLUS = ">12y"


class AgeGroup(Enum):
    G60_69 = "60-69"
    G70_79 = "70-79"
    G80_PLUS = "80+"


class GameId(Enum):
    DIMSUM = "dimsum"
    STEAMER = "steamer"
    CASHIER = "cashier"


# Sessions always run the tasks in this order.
TASK_ORDER = (GameId.DIMSUM, GameId.STEAMER, GameId.CASHIER)


def derive_age_group(age: int) -> AgeGroup:
    """Map an age in years to its group; ages below 60 are out of scope."""
    if age < MIN_AGE:
        raise DomainError(f"age {age} is below the inclusion boundary of {MIN_AGE}")
    if age > MAX_AGE:
        raise DomainError(f"age {age} exceeds the sanity cap of {MAX_AGE}")
    if age <= 69:
        return AgeGroup.G60_69
    if age <= 79:
        return AgeGroup.G70_79
    return AgeGroup.G80_PLUS


@dataclass(frozen=True)
class TechBackground:
    """Self-reported technology experience items from the intake questionnaire."""

    gaming_frequency: int = 1  # 1 = never .. 5 = daily
    computer_proficiency: int = 1  # 1 = none .. 5 = advanced
    prior_vr: bool = False
    prior_motion_capture: bool = False
    sensory_impairment: bool = False

    def problems(self) -> list[str]:
        out = []
        if not 1 <= self.gaming_frequency <= 5:
            out.append(f"gaming_frequency {self.gaming_frequency} outside 1..5")
        if not 1 <= self.computer_proficiency <= 5:
            out.append(f"computer_proficiency {self.computer_proficiency} outside 1..5")
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "gaming_frequency": self.gaming_frequency,
            "computer_proficiency": self.computer_proficiency,
            "prior_vr": self.prior_vr,
            "prior_motion_capture": self.prior_motion_capture,
            "sensory_impairment": self.sensory_impairment,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TechBackground":
        return cls(**d)


@dataclass(frozen=True)
class ParticipantProfile:
    participant_id: str
    age: int
    gender: Gender
    education_band: EducationBand
    moca_score: int
    tech: TechBackground = field(default_factory=TechBackground)

    @property
    def age_group(self) -> AgeGroup:
        return derive_age_group(self.age)

    def to_dict(self) -> dict[str, Any]:
        return {
            "participant_id": self.participant_id,
            "age": self.age,
            "gender": self.gender.value,
            "education_band": self.education_band.value,
            "moca_score": self.moca_score,
            "tech": self.tech.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ParticipantProfile":
        return validate_profile(
            participant_id=d["participant_id"],
            age=d["age"],
            gender=d["gender"],
            education_band=d["education_band"],
            moca_score=d["moca_score"],
            tech=TechBackground.from_dict(d["tech"]) if "tech" in d else TechBackground(),
        )


def validate_profile(
    participant_id: str,
    age: int,
    gender: Gender | str,
    education_band: EducationBand | str,
    moca_score: int,
    tech: TechBackground | None = None,
) -> ParticipantProfile:
    """Check every profile invariant and return a normalized profile.

    All failures are collected so the caller sees the complete list, not just
    the first one.
    """
    problems: list[str] = []
    if not participant_id or not str(participant_id).strip():
        problems.append("participant_id must be non-empty")
    if not isinstance(age, int) or isinstance(age, bool):
        problems.append(f"age must be an integer, got {age!r}")
    elif age < MIN_AGE:
        problems.append(f"age {age} below inclusion boundary {MIN_AGE}")
    elif age > MAX_AGE:
        problems.append(f"age {age} above sanity cap {MAX_AGE}")
    if isinstance(gender, str):
        try:
            gender = Gender(gender)
        except ValueError:
            problems.append(f"unknown gender {gender!r}")
    if isinstance(education_band, str):
        try:
            education_band = EducationBand(education_band)
        except ValueError:
            problems.append(f"unknown education_band {education_band!r}")
    if not isinstance(moca_score, int) or isinstance(moca_score, bool):
        problems.append(f"moca_score must be an integer, got {moca_score!r}")
    elif not 0 <= moca_score <= 30:
        problems.append(f"moca_score {moca_score} outside 0..30")
    tech = tech or TechBackground()
    problems.extend(tech.problems())
    if problems:
        raise ValidationError(problems)
    assert isinstance(gender, Gender) and isinstance(education_band, EducationBand)
    return ParticipantProfile(
        participant_id=str(participant_id),
        age=age,
        gender=gender,
        education_band=education_band,
        moca_score=moca_score,
        tech=tech,
    )


@dataclass(frozen=True)
class DifficultyParams:
    """Researcher-adjustable task parameters.

    Durations are seconds; currency is integer deci-units (one unit = 10 cents),
    see ``teahouse.games.cashier``.
    """

    dimsum_item_count: int = 6
    memorize_duration_s: float = 10.0
    dimsum_time_limit_s: float = 120.0
    steamer_item_count: int = 4
    cook_time_s: float = 20.0
    overcook_time_s: float = 35.0
    steamer_time_limit_s: float = 300.0
    cashier_trial_count: int = 5
    cashier_time_limit_s: float = 90.0
    max_change_amount: int = 100

    def problems(self) -> list[str]:
        out = []
        if self.dimsum_item_count < 1:
            out.append("dimsum_item_count must be >= 1")
        if self.memorize_duration_s <= 0:
            out.append("memorize_duration_s must be > 0")
        if self.dimsum_time_limit_s <= 0:
            out.append("dimsum_time_limit_s must be > 0")
        if self.steamer_item_count < 1:
            out.append("steamer_item_count must be >= 1")
        if self.cook_time_s <= 0:
            out.append("cook_time_s must be > 0")
        if self.overcook_time_s <= self.cook_time_s:
            out.append("overcook_time_s must be > cook_time_s")
        if self.steamer_time_limit_s <= 0:
            out.append("steamer_time_limit_s must be > 0")
        if self.cashier_trial_count < 1:
            out.append("cashier_trial_count must be >= 1")
        if self.cashier_time_limit_s <= 0:
            out.append("cashier_time_limit_s must be > 0")
        if self.max_change_amount <= 0:
            out.append("max_change_amount must be > 0")
        return out

    def validated(self) -> "DifficultyParams":
        problems = self.problems()
        if problems:
            raise ValidationError(problems)
        return self

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "DifficultyParams":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValidationError([f"unknown difficulty field {k!r}" for k in sorted(unknown)])
        return cls(**d).validated()


class EventKind(str, Enum):
    """Kinds of entries in the append-only game event log."""

    GAME_START = "game_start"
    TUTORIAL_START = "tutorial_start"
    PLAY_START = "play_start"
    PHASE = "phase"
    GRASP = "grasp"
    MOVE = "move"
    RELEASE = "release"
    HAND_LOST = "hand_lost"
    CORRECT = "correct"
    INACCURACY = "inaccuracy"
    OMISSION = "omission"
    START_STEAM = "start_steam"
    CUE_GREEN = "cue_green"
    OVERCOOK = "overcook"
    TRIAL_START = "trial_start"
    PLACE = "place"
    COMPLETE = "complete"


@dataclass(frozen=True)
class GameEvent:
    """One timestamped, task-relevant action or state transition."""

    t: float  # seconds since session start
    game: GameId
    kind: EventKind
    payload: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"t": self.t, "game": self.game.value, "kind": self.kind.value, "payload": self.payload}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GameEvent":
        return cls(t=d["t"], game=GameId(d["game"]), kind=EventKind(d["kind"]), payload=d.get("payload", {}))
