"""Shared machinery for the three task state machines.

All machines advance on integer-millisecond clocks so phase boundaries are
exact and runs are reproducible; timestamps only become float seconds when an
event is logged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from ..core import DifficultyParams, EventKind, GameEvent, GameId
from ..gesture import GestureEvent, GestureKind
from ..scent import ScentCommand

DEFAULT_TUTORIAL_MS = 30_000

# Radius within which a grasp binds to an object; forgiving on purpose for
# older players with reduced fine motor control.
PICKUP_RADIUS = 0.15

PHASE_TUTORIAL = "tutorial"
PHASE_COMPLETE = "complete"


def ms(seconds: float) -> int:
    return round(seconds * 1000)


@dataclass(frozen=True)
class Zone:
    """Axis-aligned box in normalized interaction coordinates."""

    x0: float
    y0: float
    x1: float
    y1: float

    def contains(self, pos: tuple[float, ...]) -> bool:
        return self.x0 <= pos[0] <= self.x1 and self.y0 <= pos[1] <= self.y1

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    def as_list(self) -> list[float]:
        return [self.x0, self.y0, self.x1, self.y1]


def slot_positions(n: int, zone: Zone, ncols: int | None = None) -> list[tuple[float, float]]:
    """Evenly spaced cell centers for n objects inside a zone, row-major."""
    if n <= 0:
        return []
    w = zone.x1 - zone.x0
    h = zone.y1 - zone.y0
    if ncols is None:
        ncols = max(1, min(n, round(math.sqrt(n * (w / h if h else 1.0)))))
    nrows = math.ceil(n / ncols)
    out = []
    for i in range(n):
        r, c = divmod(i, ncols)
        x = zone.x0 + w * (c + 0.5) / ncols
        y = zone.y1 - h * (r + 0.5) / nrows
        out.append((round(x, 6), round(y, 6)))
    return out


def dist2d(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


class GameMachine:
    """Base for the task state machines: millisecond clock, event log, phases.

    Subclasses implement ``_next_boundary_local`` (next timed transition, in
    local ms), ``_on_boundary`` (apply every transition due at the current
    local time) and ``_apply_play`` (react to a gesture during play).
    """

    game: GameId

    def __init__(
        self,
        params: DifficultyParams,
        seed: int,
        t0_ms: int = 0,
        tutorial_ms: int = DEFAULT_TUTORIAL_MS,
    ):
        self.params = params.validated()
        self.seed = seed
        self.t0_ms = int(t0_ms)
        self.tutorial_ms = int(tutorial_ms)
        self.local_ms = 0
        self.play_start_local: int | None = None
        self.phase = PHASE_TUTORIAL
        self.events: list[GameEvent] = []
        self.scent_out: list[ScentCommand] = []

    # -- clock / logging ------------------------------------------------

    @property
    def now_s(self) -> float:
        return (self.t0_ms + self.local_ms) / 1000.0

    @property
    def complete(self) -> bool:
        return self.phase == PHASE_COMPLETE

    def log(self, kind: EventKind, payload: dict[str, Any] | None = None) -> GameEvent:
        ev = GameEvent(t=self.now_s, game=self.game, kind=kind, payload=payload or {})
        self.events.append(ev)
        return ev

    # -- time advance ----------------------------------------------------

    def tick(self, dt_ms: int) -> None:
        """Advance the machine; ticking a terminal machine is a no-op."""
        if self.complete or dt_ms <= 0:
            return
        target = self.local_ms + int(dt_ms)
        while not self.complete:
            nb = self._next_boundary_local()
            if nb is None or nb > target:
                break
            self.local_ms = max(self.local_ms, nb)
            self._on_boundary()
        if not self.complete:
            self.local_ms = target

    def _start_play(self, skipped: bool = False) -> None:
        self.play_start_local = self.local_ms
        payload: dict[str, Any] = {"phase": self._initial_play_phase()}
        if skipped:
            payload["skipped_tutorial"] = True
        self.phase = self._initial_play_phase()
        self.log(EventKind.PLAY_START, payload)
        self._on_play_started()

    def _initial_play_phase(self) -> str:
        raise NotImplementedError

    def _on_play_started(self) -> None:
        pass

    def _next_boundary_local(self) -> int | None:
        raise NotImplementedError

    def _on_boundary(self) -> None:
        raise NotImplementedError

    # -- gestures ----------------------------------------------------------

    def apply(self, ev: GestureEvent) -> None:
        """Feed one recognized gesture. Gestures are always logged; outside
        play phases they have no game effect (except that a grasp skips the
        tutorial)."""
        if self.complete:
            return
        kind = {
            GestureKind.GRASP_START: EventKind.GRASP,
            GestureKind.MOVE: EventKind.MOVE,
            GestureKind.RELEASE: EventKind.RELEASE,
            GestureKind.HAND_LOST: EventKind.HAND_LOST,
        }[ev.kind]
        payload: dict[str, Any] = {"pos": [ev.pos[0], ev.pos[1], ev.pos[2]]}
        extra = self._gesture_annotation(ev)
        if extra:
            payload.update(extra)
        self.events.append(GameEvent(t=ev.t, game=self.game, kind=kind, payload=payload))
        if self.phase == PHASE_TUTORIAL:
            if ev.kind == GestureKind.GRASP_START:
                self._start_play(skipped=True)
            return
        self._apply_play(ev)

    def _gesture_annotation(self, ev: GestureEvent) -> dict[str, Any] | None:
        return None

    def _apply_play(self, ev: GestureEvent) -> None:
        raise NotImplementedError

    # -- views -------------------------------------------------------------

    def snapshot(self) -> dict[str, Any]:
        snap = {
            "game": self.game.value,
            "phase": self.phase,
            "clock_s": self.local_ms / 1000.0,
        }
        snap.update(self._snapshot_state())
        return snap

    def _snapshot_state(self) -> dict[str, Any]:
        raise NotImplementedError
