"""Steamer task: steam items, watch the green/red timer cues, transfer during
the green window. Scent pulses are emitted at steam-in and at overcook."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any

from ..core import ConfigError, DifficultyParams, EventKind, GameId
from ..gesture import GestureEvent, GestureKind
from ..scent import ScentCommand
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
from .dimsum import DEFAULT_CATALOG

PHASE_PLAY = "play"

CART_ZONE = Zone(-0.95, -0.75, -0.45, 0.75)
STEAMER_ZONE = Zone(-0.25, -0.35, 0.25, 0.35)
SERVING_ZONE = Zone(0.45, -0.75, 0.95, 0.75)

STAGE_IN_CART = "in_cart"
STAGE_IN_STEAMER = "in_steamer"
STAGE_READY = "ready"
STAGE_OVERCOOKED = "overcooked"
STAGE_SERVED = "served"
STAGE_MISSED = "missed"

TERMINAL_STAGES = {STAGE_SERVED, STAGE_MISSED}

BURNT_SCENT_ID = "burnt"
BURNT_SCENT_MS = 2000


def cue_for_stage(stage: str) -> str:
    """Cue color is a pure function of the item stage."""
    if stage == STAGE_READY:
        return "green"
    if stage == STAGE_OVERCOOKED:
        return "red"
    return "none"


@dataclass
class SteamerItem:
    item_id: str
    cart_slot: tuple[float, float]
    steam_slot: tuple[float, float]
    stage: str = STAGE_IN_CART
    pos: tuple[float, float] = (0.0, 0.0)
    steam_start_local: int | None = None
    served_state: str | None = None  # ok | undercooked | burnt

    def steam_clock_ms(self, local_ms: int) -> int | None:
        if self.steam_start_local is None:
            return None
        return local_ms - self.steam_start_local


class SteamerGame(GameMachine):
    game = GameId.STEAMER

    def __init__(
        self,
        params: DifficultyParams,
        seed: int,
        t0_ms: int = 0,
        tutorial_ms: int = DEFAULT_TUTORIAL_MS,
        catalog: tuple[str, ...] = DEFAULT_CATALOG,
    ):
        super().__init__(params, seed, t0_ms, tutorial_ms)
        n = params.steamer_item_count
        if n > len(catalog):
            raise ConfigError(f"steamer_item_count {n} exceeds catalog size {len(catalog)}")
        rng = random.Random(f"{seed}/steamer")
        chosen = rng.sample(list(catalog), n)
        cart_slots = slot_positions(n, CART_ZONE, ncols=1)
        steam_slots = slot_positions(n, STEAMER_ZONE, ncols=2)
        self.order = list(chosen)
        self.items: dict[str, SteamerItem] = {}
        for i, item_id in enumerate(chosen):
            it = SteamerItem(item_id, cart_slots[i], steam_slots[i])
            it.pos = cart_slots[i]
            self.items[item_id] = it
        self.held: str | None = None
        self.held_pos: tuple[float, float, float] | None = None
        self._cook_ms = ms(params.cook_time_s)
        self._overcook_ms = ms(params.overcook_time_s)
        self._limit_ms = ms(params.steamer_time_limit_s)

        self.log(
            EventKind.GAME_START,
            {
                "required_actions": 2 * n,
                "items": [
                    {"id": it.item_id, "x": it.cart_slot[0], "y": it.cart_slot[1]}
                    for it in (self.items[i] for i in self.order)
                ],
                "zones": {
                    "cart": CART_ZONE.as_list(),
                    "steamer": STEAMER_ZONE.as_list(),
                    "serving": SERVING_ZONE.as_list(),
                },
                "cook_time_s": params.cook_time_s,
                "overcook_time_s": params.overcook_time_s,
                "tutorial_ms": self.tutorial_ms,
                "seed": seed,
            },
        )
        self.log(EventKind.TUTORIAL_START, {"duration_ms": self.tutorial_ms})
        if self.tutorial_ms <= 0:
            self._start_play()

    # -- phases / timers -----------------------------------------------------

    def _initial_play_phase(self) -> str:
        return PHASE_PLAY

    def _next_boundary_local(self) -> int | None:
        if self.phase == PHASE_TUTORIAL:
            return self.tutorial_ms
        if self.phase != PHASE_PLAY:
            return None
        assert self.play_start_local is not None
        candidates = [self.play_start_local + self._limit_ms]
        for it in self.items.values():
            if it.steam_start_local is None:
                continue
            if it.stage == STAGE_IN_STEAMER:
                candidates.append(it.steam_start_local + self._cook_ms)
            elif it.stage == STAGE_READY:
                candidates.append(it.steam_start_local + self._overcook_ms)
        return min(candidates)

    def _on_boundary(self) -> None:
        if self.phase == PHASE_TUTORIAL:
            self._start_play()
            return
        assert self.play_start_local is not None
        # Item cue transitions due now, in layout order for determinism.
        for item_id in self.order:
            it = self.items[item_id]
            if it.steam_start_local is None:
                continue
            clock = it.steam_clock_ms(self.local_ms)
            assert clock is not None
            if it.stage == STAGE_IN_STEAMER and clock >= self._cook_ms:
                it.stage = STAGE_READY
                self.log(EventKind.CUE_GREEN, {"item": item_id})
            if it.stage == STAGE_READY and clock >= self._overcook_ms:
                it.stage = STAGE_OVERCOOKED
                ev = self.log(EventKind.OVERCOOK, {"item": item_id})
                self.scent_out.append(
                    ScentCommand(
                        t=ev.t,
                        scent_id=BURNT_SCENT_ID,
                        duration_ms=BURNT_SCENT_MS,
                        source={"game": self.game.value, "kind": ev.kind.value, "t": ev.t},
                    )
                )
        if self.local_ms >= self.play_start_local + self._limit_ms and self.phase == PHASE_PLAY:
            self._timeout()

    def _timeout(self) -> None:
        self.held = None
        self.held_pos = None
        for item_id in self.order:
            it = self.items[item_id]
            if it.stage in TERMINAL_STAGES:
                continue
            if it.stage == STAGE_IN_CART:
                self.log(EventKind.OMISSION, {"item": item_id, "action": "steam_in"})
            self.log(EventKind.OMISSION, {"item": item_id, "action": "transfer"})
            it.stage = STAGE_MISSED
        self.phase = PHASE_COMPLETE
        self.log(EventKind.COMPLETE, {"reason": "timeout"})

    # -- gestures ----------------------------------------------------------

    def _gesture_annotation(self, ev: GestureEvent) -> dict[str, Any] | None:
        if self.held is not None:
            return {"item": self.held}
        return None

    def _apply_play(self, ev: GestureEvent) -> None:
        if self.phase != PHASE_PLAY:
            return
        if ev.kind == GestureKind.GRASP_START and self.held is None:
            candidates = [
                it
                for it in self.items.values()
                if it.stage not in TERMINAL_STAGES and dist2d(ev.pos, it.pos) <= PICKUP_RADIUS
            ]
            if candidates:
                picked = min(candidates, key=lambda it: (dist2d(ev.pos, it.pos), it.item_id))
                self.held = picked.item_id
                self.held_pos = ev.pos
                self.events[-1].payload["item"] = picked.item_id
        elif ev.kind == GestureKind.MOVE and self.held is not None:
            self.held_pos = ev.pos
        elif ev.kind in (GestureKind.RELEASE, GestureKind.HAND_LOST) and self.held is not None:
            item = self.items[self.held]
            self.held = None
            self.held_pos = None
            if item.stage == STAGE_IN_CART:
                if STEAMER_ZONE.contains(ev.pos):
                    item.stage = STAGE_IN_STEAMER
                    item.steam_start_local = self.local_ms
                    item.pos = item.steam_slot
                    ev_steam = self.log(EventKind.START_STEAM, {"item": item.item_id})
                    self.log(EventKind.CORRECT, {"item": item.item_id, "action": "steam_in"})
                    self.scent_out.append(
                        ScentCommand(
                            t=ev_steam.t,
                            scent_id=f"food.{item.item_id}",
                            duration_ms=self._cook_ms,
                            source={"game": self.game.value, "kind": ev_steam.kind.value, "t": ev_steam.t},
                        )
                    )
                else:
                    item.pos = item.cart_slot
            else:
                if SERVING_ZONE.contains(ev.pos):
                    if item.stage == STAGE_READY:
                        item.served_state = "ok"
                        self.log(EventKind.CORRECT, {"item": item.item_id, "action": "transfer"})
                    elif item.stage == STAGE_IN_STEAMER:
                        item.served_state = "undercooked"
                        self.log(
                            EventKind.INACCURACY,
                            {"item": item.item_id, "action": "transfer", "state": "undercooked"},
                        )
                    else:  # overcooked
                        item.served_state = "burnt"
                        self.log(
                            EventKind.INACCURACY,
                            {"item": item.item_id, "action": "transfer", "state": "burnt"},
                        )
                    item.stage = STAGE_SERVED
                    item.pos = (ev.pos[0], ev.pos[1])
                else:
                    item.pos = item.steam_slot
            if all(it.stage in TERMINAL_STAGES for it in self.items.values()):
                self.phase = PHASE_COMPLETE
                self.log(EventKind.COMPLETE, {"reason": "cleared"})

    # -- views ----------------------------------------------------------------

    def _snapshot_state(self) -> dict[str, Any]:
        items = []
        for item_id in self.order:
            it = self.items[item_id]
            clock = it.steam_clock_ms(self.local_ms)
            items.append(
                {
                    "id": it.item_id,
                    "x": it.pos[0],
                    "y": it.pos[1],
                    "stage": it.stage,
                    "cue": cue_for_stage(it.stage),
                    "steam_clock_s": None if clock is None else clock / 1000.0,
                    "served_state": it.served_state,
                }
            )
        return {
            "items": items,
            "held": self.held,
            "held_pos": list(self.held_pos) if self.held_pos else None,
            "zones": {
                "cart": CART_ZONE.as_list(),
                "steamer": STEAMER_ZONE.as_list(),
                "serving": SERVING_ZONE.as_list(),
            },
        }
