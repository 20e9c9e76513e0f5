"""Cashier task: return exact change by grasping denominations from the
register into the holder. All currency is integer deci-units (10 cents), so no
floating point ever touches money."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable

from ..core import DifficultyParams, EventKind, GameId, StateError
from ..gesture import GestureEvent, GestureKind
from .base import (
    DEFAULT_TUTORIAL_MS,
    PICKUP_RADIUS,
    PHASE_COMPLETE,
    PHASE_TUTORIAL,
    GameMachine,
    Zone,
    dist2d,
    ms,
    slot_positions,
)

PHASE_PLAY = "play"

REGISTER_ZONE = Zone(-0.95, 0.15, 0.95, 0.85)
HOLDER_ZONE = Zone(-0.45, -0.9, 0.45, -0.35)

STATUS_ACTIVE = "active"
STATUS_COMPLETED = "completed"
STATUS_TIMED_OUT = "timed_out"


@dataclass(frozen=True)
class Denomination:
    value: int  # deci-units
    kind: str  # "coin" | "note"

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("denomination value must be positive")
        if self.kind not in ("coin", "note"):
            raise ValueError(f"unknown denomination kind {self.kind!r}")


# Hong Kong-like teahouse till; configuration data, not behavior.
DEFAULT_DENOMINATIONS: tuple[Denomination, ...] = tuple(
    [Denomination(v, "coin") for v in (1, 2, 5, 10, 20, 50, 100)]
    + [Denomination(v, "note") for v in (100, 200, 500, 1000, 5000, 10000)]
)


def denomination_values(denoms: Iterable[Denomination] = DEFAULT_DENOMINATIONS) -> list[int]:
    return sorted({d.value for d in denoms}, reverse=True)


def minimal_change(change: int, values: list[int] | None = None) -> Counter:
    """Largest-first greedy change set; for the default (canonical) value set
    this equals the true minimum-cardinality solution."""
    if change < 0:
        raise ValueError("change must be non-negative")
    values = values if values is not None else denomination_values()
    out: Counter = Counter()
    rest = change
    for v in values:
        if rest <= 0:
            break
        q, rest = divmod(rest, v)
        if q:
            out[v] = q
    if rest:
        raise ValueError(f"change {change} not representable with values {values}")
    return out


@dataclass
class CashierTrial:
    index: int
    bill: int
    payment: int
    time_limit_ms: int
    started_local: int
    placed: list[int] = field(default_factory=list)
    status: str = STATUS_ACTIVE

    @property
    def change(self) -> int:
        return self.payment - self.bill

    @property
    def placed_sum(self) -> int:
        return sum(self.placed)

    def deadline_local(self) -> int:
        return self.started_local + self.time_limit_ms


def gen_trial(params: DifficultyParams, seed: int, index: int) -> tuple[int, int]:
    """Deterministic (bill, payment) for one trial; change is uniform on
    (0, max_change_amount]."""
    rng = random.Random(f"{seed}/cashier/{index}")
    change = rng.randint(1, params.max_change_amount)
    bill = rng.randint(1, 99) * 10
    return bill, bill + change


class CashierGame(GameMachine):
    game = GameId.CASHIER

    def __init__(
        self,
        params: DifficultyParams,
        seed: int,
        t0_ms: int = 0,
        tutorial_ms: int = DEFAULT_TUTORIAL_MS,
        denominations: tuple[Denomination, ...] = DEFAULT_DENOMINATIONS,
    ):
        super().__init__(params, seed, t0_ms, tutorial_ms)
        self.denominations = tuple(denominations)
        slots = slot_positions(len(self.denominations), REGISTER_ZONE, ncols=7)
        self.denom_slots: list[tuple[Denomination, tuple[float, float]]] = list(
            zip(self.denominations, slots)
        )
        self.trial: CashierTrial | None = None
        self.trials_done = 0
        self.held: Denomination | None = None
        self.held_pos: tuple[float, float, float] | None = None
        self._pending_params: DifficultyParams | None = None
        self._trial_count = params.cashier_trial_count

        self.log(
            EventKind.GAME_START,
            {
                "required_actions": self._trial_count,
                "denominations": [
                    {"value": d.value, "kind": d.kind, "x": p[0], "y": p[1]}
                    for d, p in self.denom_slots
                ],
                "zones": {"register": REGISTER_ZONE.as_list(), "holder": HOLDER_ZONE.as_list()},
                "tutorial_ms": self.tutorial_ms,
                "seed": seed,
            },
        )
        self.log(EventKind.TUTORIAL_START, {"duration_ms": self.tutorial_ms})
        if self.tutorial_ms <= 0:
            self._start_play()

    # -- difficulty -----------------------------------------------------------

    def set_params(self, params: DifficultyParams) -> None:
        """Researcher difficulty change; applies from the next trial."""
        if self.complete:
            raise StateError("cannot change difficulty after completion")
        self._pending_params = params.validated()

    # -- trial flow -----------------------------------------------------------

    def _initial_play_phase(self) -> str:
        return PHASE_PLAY

    def _on_play_started(self) -> None:
        self._start_trial(0)

    def _start_trial(self, index: int) -> None:
        if self._pending_params is not None:
            self.params = self._pending_params
            self._pending_params = None
        bill, payment = gen_trial(self.params, self.seed, index)
        trial = CashierTrial(
            index=index,
            bill=bill,
            payment=payment,
            time_limit_ms=ms(self.params.cashier_time_limit_s),
            started_local=self.local_ms,
        )
        self.trial = trial
        self.log(EventKind.TRIAL_START, {"trial": index, "bill": bill, "payment": payment})
        if trial.change == 0:
            trial.status = STATUS_COMPLETED
            self.log(EventKind.CORRECT, {"trial": index, "auto": True})
            self._advance_trial()

    def _advance_trial(self) -> None:
        self.trials_done += 1
        self.held = None
        self.held_pos = None
        if self.trials_done >= self._trial_count:
            self.phase = PHASE_COMPLETE
            self.log(EventKind.COMPLETE, {"reason": "all_trials"})
        else:
            self._start_trial(self.trials_done)

    def place(self, denom: Denomination) -> None:
        """Drop one denomination into the holder; overshoots are rejected and
        scored, never stored."""
        trial = self.trial
        if trial is None or trial.status != STATUS_ACTIVE:
            raise StateError("no active trial to place into")
        if trial.placed_sum + denom.value > trial.change:
            self.log(
                EventKind.INACCURACY,
                {"trial": trial.index, "denom": denom.value, "sum": trial.placed_sum},
            )
            return
        trial.placed.append(denom.value)
        self.log(
            EventKind.PLACE,
            {"trial": trial.index, "denom": denom.value, "sum": trial.placed_sum},
        )
        if trial.placed_sum == trial.change:
            trial.status = STATUS_COMPLETED
            self.log(EventKind.CORRECT, {"trial": trial.index})
            self._advance_trial()

    # -- timers ---------------------------------------------------------------

    def _next_boundary_local(self) -> int | None:
        if self.phase == PHASE_TUTORIAL:
            return self.tutorial_ms
        if self.phase != PHASE_PLAY or self.trial is None:
            return None
        if self.trial.status != STATUS_ACTIVE:
            return None
        return self.trial.deadline_local()

    def _on_boundary(self) -> None:
        if self.phase == PHASE_TUTORIAL:
            self._start_play()
            return
        trial = self.trial
        assert trial is not None
        if trial.status == STATUS_ACTIVE and self.local_ms >= trial.deadline_local():
            trial.status = STATUS_TIMED_OUT
            self.log(EventKind.OMISSION, {"trial": trial.index, "sum": trial.placed_sum})
            self._advance_trial()

    # -- gestures ---------------------------------------------------------------

    def _gesture_annotation(self, ev: GestureEvent) -> dict[str, Any] | None:
        if self.held is not None:
            return {"denom": self.held.value, "denom_kind": self.held.kind}
        return None

    def _apply_play(self, ev: GestureEvent) -> None:
        if self.phase != PHASE_PLAY or self.trial is None or self.trial.status != STATUS_ACTIVE:
            return
        if ev.kind == GestureKind.GRASP_START and self.held is None:
            near = [
                (d, p) for d, p in self.denom_slots if dist2d(ev.pos, p) <= PICKUP_RADIUS
            ]
            if near:
                denom, _ = min(near, key=lambda dp: (dist2d(ev.pos, dp[1]), -dp[0].value))
                self.held = denom
                self.held_pos = ev.pos
                self.events[-1].payload["denom"] = denom.value
                self.events[-1].payload["denom_kind"] = denom.kind
        elif ev.kind == GestureKind.MOVE and self.held is not None:
            self.held_pos = ev.pos
        elif ev.kind in (GestureKind.RELEASE, GestureKind.HAND_LOST) and self.held is not None:
            denom = self.held
            self.held = None
            self.held_pos = None
            if HOLDER_ZONE.contains(ev.pos):
                self.place(denom)
            # A release anywhere else returns the denomination to the register.

    # -- views --------------------------------------------------------------------

    def _snapshot_state(self) -> dict[str, Any]:
        trial = self.trial
        trial_state: dict[str, Any] | None = None
        if trial is not None:
            remaining_ms = max(0, trial.deadline_local() - self.local_ms)
            trial_state = {
                "index": trial.index,
                "bill": trial.bill,
                "payment": trial.payment,
                "placed": list(trial.placed),
                "placed_sum": trial.placed_sum,
                "status": trial.status,
                "remaining_s": remaining_ms / 1000.0 if trial.status == STATUS_ACTIVE else 0.0,
            }
        return {
            "trial": trial_state,
            "trials_done": self.trials_done,
            "trial_count": self._trial_count,
            "held": {"value": self.held.value, "kind": self.held.kind} if self.held else None,
            "held_pos": list(self.held_pos) if self.held_pos else None,
            "denominations": [
                {"value": d.value, "kind": d.kind, "x": p[0], "y": p[1]}
                for d, p in self.denom_slots
            ],
            "zones": {"register": REGISTER_ZONE.as_list(), "holder": HOLDER_ZONE.as_list()},
        }
