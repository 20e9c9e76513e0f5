"""Dim Sum task: memorize a target subset, then grasp the right items from the
cart and place them in the table zone."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any

from ..core import ConfigError, DifficultyParams, EventKind, GameId
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

PHASE_MEMORIZE = "memorize"
PHASE_SELECT = "select"

CART_ZONE = Zone(-0.95, -0.75, -0.25, 0.75)
TABLE_ZONE = Zone(0.25, -0.75, 0.95, 0.75)

DEFAULT_CATALOG = (
    "har_gow",
    "siu_mai",
    "char_siu_bao",
    "cheung_fun",
    "lo_mai_gai",
    "egg_tart",
    "turnip_cake",
    "spring_roll",
    "chicken_feet",
    "taro_dumpling",
    "sesame_ball",
    "mango_pudding",
)


@dataclass
class DimSumItem:
    item_id: str
    slot: tuple[float, float]
    is_target: bool
    pos: tuple[float, float]
    placed: bool = False


class DimSumGame(GameMachine):
    game = GameId.DIMSUM

    def __init__(
        self,
        params: DifficultyParams,
        seed: int,
        t0_ms: int = 0,
        tutorial_ms: int = DEFAULT_TUTORIAL_MS,
        catalog: tuple[str, ...] = DEFAULT_CATALOG,
    ):
        super().__init__(params, seed, t0_ms, tutorial_ms)
        if params.dimsum_item_count > len(catalog):
            raise ConfigError(
                f"dimsum_item_count {params.dimsum_item_count} exceeds catalog size {len(catalog)}"
            )
        rng = random.Random(f"{seed}/dimsum")
        order = rng.sample(list(catalog), len(catalog))
        targets = order[: params.dimsum_item_count]
        slots = slot_positions(len(order), CART_ZONE, ncols=3)
        self.order = order
        self.items: dict[str, DimSumItem] = {
            item_id: DimSumItem(item_id, slots[i], item_id in targets, slots[i])
            for i, item_id in enumerate(order)
        }
        self.targets = list(targets)
        self.remaining: set[str] = set(targets)
        self.held: str | None = None
        self.held_pos: tuple[float, float, float] | None = None
        self._memorize_ms = ms(params.memorize_duration_s)
        self._limit_ms = ms(params.dimsum_time_limit_s)

        self.log(
            EventKind.GAME_START,
            {
                "required_actions": params.dimsum_item_count,
                "items": [
                    {"id": it.item_id, "x": it.slot[0], "y": it.slot[1], "target": it.is_target}
                    for it in (self.items[i] for i in order)
                ],
                "targets": self.targets,
                "zones": {"cart": CART_ZONE.as_list(), "table": TABLE_ZONE.as_list()},
                "tutorial_ms": self.tutorial_ms,
                "seed": seed,
            },
        )
        self.log(EventKind.TUTORIAL_START, {"duration_ms": self.tutorial_ms})
        if self.tutorial_ms <= 0:
            self._start_play()

    # -- phases -----------------------------------------------------------

    def _initial_play_phase(self) -> str:
        return PHASE_MEMORIZE

    def _next_boundary_local(self) -> int | None:
        if self.phase == PHASE_TUTORIAL:
            return self.tutorial_ms
        assert self.play_start_local is not None
        if self.phase == PHASE_MEMORIZE:
            return self.play_start_local + self._memorize_ms
        if self.phase == PHASE_SELECT:
            return self.play_start_local + self._memorize_ms + self._limit_ms
        return None

    def _on_boundary(self) -> None:
        if self.phase == PHASE_TUTORIAL:
            self._start_play()
        elif self.phase == PHASE_MEMORIZE:
            self.phase = PHASE_SELECT
            self.log(EventKind.PHASE, {"phase": PHASE_SELECT})
        elif self.phase == PHASE_SELECT:
            for item_id in sorted(self.remaining):
                self.log(EventKind.OMISSION, {"item": item_id})
            self.remaining.clear()
            self.held = None
            self.held_pos = None
            self.phase = PHASE_COMPLETE
            self.log(EventKind.COMPLETE, {"reason": "timeout"})

    # -- gestures -----------------------------------------------------------

    def _gesture_annotation(self, ev: GestureEvent) -> dict[str, Any] | None:
        if self.held is not None:
            return {"item": self.held}
        return None

    def _apply_play(self, ev: GestureEvent) -> None:
        if self.phase != PHASE_SELECT:
            return
        if ev.kind == GestureKind.GRASP_START and self.held is None:
            candidates = [
                it
                for it in self.items.values()
                if not it.placed and dist2d(ev.pos, it.pos) <= PICKUP_RADIUS
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
            if TABLE_ZONE.contains(ev.pos):
                if item.item_id in self.remaining:
                    self.remaining.discard(item.item_id)
                    item.placed = True
                    item.pos = (ev.pos[0], ev.pos[1])
                    self.log(EventKind.CORRECT, {"item": item.item_id})
                else:
                    item.pos = item.slot
                    self.log(EventKind.INACCURACY, {"item": item.item_id})
            else:
                # Motor slip: the item snaps back, no score either way.
                item.pos = item.slot
            if not self.remaining:
                self.phase = PHASE_COMPLETE
                self.log(EventKind.COMPLETE, {"reason": "cleared"})

    # -- views -------------------------------------------------------------

    def _snapshot_state(self) -> dict[str, Any]:
        return {
            "items": [
                {
                    "id": it.item_id,
                    "x": it.pos[0],
                    "y": it.pos[1],
                    "target": it.is_target,
                    "placed": it.placed,
                }
                for it in (self.items[i] for i in self.order)
            ],
            "remaining": sorted(self.remaining),
            "held": self.held,
            "held_pos": list(self.held_pos) if self.held_pos else None,
            "show_targets": self.phase == PHASE_MEMORIZE,
            "zones": {"cart": CART_ZONE.as_list(), "table": TABLE_ZONE.as_list()},
        }
