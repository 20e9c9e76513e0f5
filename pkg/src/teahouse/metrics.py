"""Per-task performance indicators computed from the event log: percentage of
incorrect actions, percentage of missed required actions, and total task time.

The required-action denominator is task-specific and is stamped into each
game's ``game_start`` event: target placements for Dim Sum, steam-in plus
transfer per item for Steamer, one exact-change return per trial for Cashier.
Repetition is deliberately not recorded.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .core import AgeGroup, EventKind, GameEvent, GameId, TeahouseError

INDICATORS = ("inaccuracy_pct", "omission_pct", "total_time_s")


class IncompleteTaskError(TeahouseError):
    pass


@dataclass(frozen=True)
class TaskMetrics:
    game: GameId
    required_actions: int
    incorrect_actions: int
    missed_actions: int
    total_time_s: float
    inaccuracy_pct: float
    omission_pct: float

    def __post_init__(self):
        assert self.required_actions >= 1
        assert abs(self.inaccuracy_pct - 100.0 * self.incorrect_actions / self.required_actions) < 1e-9
        assert abs(self.omission_pct - 100.0 * self.missed_actions / self.required_actions) < 1e-9
        assert self.missed_actions <= self.required_actions

    @classmethod
    def from_counts(
        cls, game: GameId, required: int, incorrect: int, missed: int, total_time_s: float
    ) -> "TaskMetrics":
        return cls(
            game=game,
            required_actions=required,
            incorrect_actions=incorrect,
            missed_actions=missed,
            total_time_s=total_time_s,
            inaccuracy_pct=100.0 * incorrect / required,
            omission_pct=100.0 * missed / required,
        )

    def indicator(self, name: str) -> float:
        return {
            "inaccuracy_pct": self.inaccuracy_pct,
            "omission_pct": self.omission_pct,
            "total_time_s": self.total_time_s,
        }[name]

    def to_dict(self) -> dict[str, Any]:
        return {
            "game": self.game.value,
            "required_actions": self.required_actions,
            "incorrect_actions": self.incorrect_actions,
            "missed_actions": self.missed_actions,
            "total_time_s": self.total_time_s,
            "inaccuracy_pct": self.inaccuracy_pct,
            "omission_pct": self.omission_pct,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TaskMetrics":
        return cls(
            game=GameId(d["game"]),
            required_actions=d["required_actions"],
            incorrect_actions=d["incorrect_actions"],
            missed_actions=d["missed_actions"],
            total_time_s=d["total_time_s"],
            inaccuracy_pct=d["inaccuracy_pct"],
            omission_pct=d["omission_pct"],
        )


def compute_metrics(events: Iterable[GameEvent], game: GameId) -> TaskMetrics:
    """Count scoring events for one game and derive the three indicators.

    Tutorial time never contributes: the clock runs from the play-start event
    to the terminal event.
    """
    required = None
    play_start_t = None
    complete_t = None
    incorrect = 0
    missed = 0
    for ev in events:
        if ev.game != game:
            continue
        if ev.kind == EventKind.GAME_START:
            required = ev.payload.get("required_actions")
        elif ev.kind == EventKind.PLAY_START and play_start_t is None:
            play_start_t = ev.t
        elif ev.kind == EventKind.INACCURACY:
            incorrect += 1
        elif ev.kind == EventKind.OMISSION:
            missed += 1
        elif ev.kind == EventKind.COMPLETE:
            complete_t = ev.t
    if required is None:
        raise IncompleteTaskError(f"no game_start event for {game.value}")
    if complete_t is None:
        raise IncompleteTaskError(f"{game.value} has no terminal event; task incomplete")
    if play_start_t is None:
        raise IncompleteTaskError(f"{game.value} never left the tutorial")
    return TaskMetrics.from_counts(
        game, required, incorrect, missed, total_time_s=complete_t - play_start_t
    )


# -- cohort summary table ----------------------------------------------------


@dataclass(frozen=True)
class GroupCell:
    n: int
    mean: float

    @property
    def display(self) -> str:
        return f"{self.mean:.1f}"


def metrics_table(
    rows: Sequence[Any],
) -> dict[tuple[GameId, str], dict[AgeGroup, GroupCell | None]]:
    """Group means for each (game, indicator) pair in the three-age-group
    layout. Empty groups are reported as missing, never as zero. Display
    rounding is one decimal place; stored means keep full precision.

    Accepts session records or pre-extracted (age_group, metrics) pairs.
    """
    rows = [
        r if isinstance(r, tuple) else (r.profile.age_group, r.metrics) for r in rows
    ]
    table: dict[tuple[GameId, str], dict[AgeGroup, GroupCell | None]] = {}
    for game in GameId:
        for ind in INDICATORS:
            cells: dict[AgeGroup, GroupCell | None] = {}
            for group in AgeGroup:
                values = [
                    m[game].indicator(ind)
                    for g, m in rows
                    if g == group and game in m
                ]
                cells[group] = GroupCell(len(values), sum(values) / len(values)) if values else None
            table[(game, ind)] = cells
    return table
