"""Scripted players: deterministic frame timelines for desk-scale runs.

Builders compute, ahead of time, exactly when each task phase begins under the
session's 50 ms grid, then lay down grasp/carry/release frames. They return
both the frames and the tick at which the game will complete, so multi-game
session scripts can be chained without running the engine first.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .core import DifficultyParams
from .games import cashier as cashier_mod
from .games import dimsum as dimsum_mod
from .games import steamer as steamer_mod
from .games.base import ms, slot_positions
from .games.cashier import CashierGame, gen_trial, minimal_change
from .games.dimsum import DimSumGame
from .games.steamer import SteamerGame
from .gesture import InputFrame, InputScript

TICK_MS = 50

GRAB_ON = 0.9
GRAB_OFF = 0.1


def _grid(t_ms: int) -> int:
    assert t_ms % TICK_MS == 0, f"{t_ms} is off the {TICK_MS} ms grid"
    return t_ms


@dataclass
class FrameBuilder:
    """Lays frames on the tick grid; one frame per tick while acting."""

    t_ms: int = TICK_MS
    frames: list[InputFrame] = field(default_factory=list)

    def at(self, t_ms: int) -> "FrameBuilder":
        t_ms = _grid(t_ms)
        assert t_ms >= self.t_ms, f"cannot rewind builder from {self.t_ms} to {t_ms}"
        self.t_ms = t_ms
        return self

    def wait(self, dur_ms: int) -> "FrameBuilder":
        self.t_ms += _grid(dur_ms)
        return self

    def emit(self, x: float, y: float, grab: float, hand: bool = True) -> int:
        # Frames stay on the 6-decimal grid the recording format uses.
        t = self.t_ms
        self.frames.append(
            InputFrame(t / 1000.0, round(x, 6), round(y, 6), 0.0, round(grab, 6), hand)
        )
        self.t_ms += TICK_MS
        return t

    def pick_place(self, src: tuple[float, float], dst: tuple[float, float]) -> int:
        """Approach, grasp, carry, release. Returns the release frame time (ms)."""
        self.emit(src[0], src[1], 0.0)
        self.emit(src[0], src[1], GRAB_ON)
        self.emit(dst[0], dst[1], GRAB_ON)
        return self.emit(dst[0], dst[1], GRAB_OFF)


# -- Dim Sum -------------------------------------------------------------------


def dimsum_frames(
    params: DifficultyParams,
    seed: int,
    t0_ms: int,
    tutorial_ms: int,
    wrong: int = 0,
    leave: int = 0,
    pace_ms: int = 0,
) -> tuple[list[InputFrame], int]:
    """A player who places `wrong` non-targets in the zone first, then all but
    `leave` targets. Returns (frames, completion tick)."""
    game = DimSumGame(params, seed, t0_ms=t0_ms, tutorial_ms=tutorial_ms)
    select_start = t0_ms + tutorial_ms + ms(params.memorize_duration_s)
    b = FrameBuilder().at(_grid(select_start))
    drops = slot_positions(
        len(game.targets) + wrong, dimsum_mod.TABLE_ZONE, ncols=3
    )
    drop_i = 0
    non_targets = [i for i in game.order if i not in set(game.targets)]
    assert wrong <= len(non_targets), "not enough non-targets for the wrong placements"
    last_release = select_start
    for item_id in non_targets[:wrong]:
        b.wait(_grid(pace_ms))
        last_release = b.pick_place(game.items[item_id].slot, drops[drop_i])
        drop_i += 1
    placed_targets = game.targets[: len(game.targets) - leave]
    for item_id in placed_targets:
        b.wait(_grid(pace_ms))
        last_release = b.pick_place(game.items[item_id].slot, drops[drop_i])
        drop_i += 1
    if leave > 0:
        end = t0_ms + tutorial_ms + ms(params.memorize_duration_s) + ms(params.dimsum_time_limit_s)
    else:
        end = last_release
    assert b.t_ms <= t0_ms + tutorial_ms + ms(params.memorize_duration_s) + ms(
        params.dimsum_time_limit_s
    ), "script overruns the task time limit"
    return b.frames, _grid(end)


# -- Steamer ---------------------------------------------------------------------


def steamer_frames(
    params: DifficultyParams,
    seed: int,
    t0_ms: int,
    tutorial_ms: int,
    steam: int | None = None,
    transfer: int | None = None,
    serve_early: int = 0,
    serve_late: int = 0,
    pace_ms: int = 0,
) -> tuple[list[InputFrame], int]:
    """A player who steams the first `steam` items, then serves `serve_early`
    of them before the green cue (undercooked), `serve_late` after the red cue
    (burnt), and `transfer` of them during the green window. Unserved and
    unsteamed items run out the clock."""
    game = SteamerGame(params, seed, t0_ms=t0_ms, tutorial_ms=tutorial_ms)
    n = params.steamer_item_count
    steam = n if steam is None else steam
    transfer = steam - serve_early - serve_late if transfer is None else transfer
    assert steam <= n and serve_early + serve_late + transfer <= steam
    play_start = t0_ms + tutorial_ms
    cook_ms = ms(params.cook_time_s)
    overcook_ms = ms(params.overcook_time_s)
    limit = play_start + ms(params.steamer_time_limit_s)

    b = FrameBuilder().at(_grid(play_start + TICK_MS))
    serve_spots = slot_positions(n, steamer_mod.SERVING_ZONE, ncols=2)

    steamed = game.order[:steam]
    steam_release: dict[str, int] = {}
    for item_id in steamed:
        b.wait(_grid(pace_ms))
        it = game.items[item_id]
        steam_release[item_id] = b.pick_place(it.cart_slot, steamer_mod.STEAMER_ZONE.center)

    # Serve plan: early ones straight away, green ones just after their cue,
    # late ones just after the red cue.
    plan: list[tuple[int, str]] = []
    early_items = steamed[:serve_early]
    green_items = steamed[serve_early : serve_early + transfer]
    late_items = steamed[serve_early + transfer : serve_early + transfer + serve_late]
    for item_id in early_items:
        plan.append((steam_release[item_id] + 2 * TICK_MS, item_id))
    for item_id in green_items:
        plan.append((steam_release[item_id] + cook_ms + TICK_MS, item_id))
    for item_id in late_items:
        plan.append((steam_release[item_id] + overcook_ms + TICK_MS, item_id))
    plan.sort()

    last_release = play_start
    for i, (not_before, item_id) in enumerate(plan):
        b.at(max(b.t_ms, _grid(not_before)))
        it = game.items[item_id]
        last_release = b.pick_place(it.steam_slot, serve_spots[i])

    all_terminal = steam == n and serve_early + transfer + serve_late == n
    end = last_release if all_terminal else limit
    assert b.t_ms <= limit, "script overruns the steamer time limit"
    return b.frames, _grid(end)


# -- Cashier ----------------------------------------------------------------------


def cashier_frames(
    params: DifficultyParams,
    seed: int,
    t0_ms: int,
    tutorial_ms: int,
    solve_trials: int | None = None,
    overshoots: int = 0,
    pace_ms: int = 0,
) -> tuple[list[InputFrame], int]:
    """A player who solves the first `solve_trials` trials with the minimal
    change set (attempting `overshoots` too-large placements on the first one)
    and lets the rest time out."""
    game = CashierGame(params, seed, t0_ms=t0_ms, tutorial_ms=tutorial_ms)
    n_trials = params.cashier_trial_count
    solve = n_trials if solve_trials is None else solve_trials
    limit_ms = ms(params.cashier_time_limit_s)
    slot_of = {d.value: pos for d, pos in game.denom_slots}
    values_desc = sorted(slot_of, reverse=True)
    holder = cashier_mod.HOLDER_ZONE.center

    b = FrameBuilder().at(_grid(t0_ms + tutorial_ms + TICK_MS))
    trial_start = t0_ms + tutorial_ms
    last_release = trial_start
    for index in range(solve):
        bill, payment = gen_trial(params, seed, index)
        change = payment - bill
        if index == 0:
            too_big = next((v for v in sorted(slot_of) if v > change), None)
            for _ in range(overshoots):
                assert too_big is not None, "no denomination large enough to overshoot"
                b.wait(_grid(pace_ms))
                last_release = b.pick_place(slot_of[too_big], holder)
        units: list[int] = []
        for v, count in sorted(minimal_change(change, values_desc).items(), reverse=True):
            units.extend([v] * count)
        for v in units:
            b.wait(_grid(pace_ms))
            last_release = b.pick_place(slot_of[v], holder)
        assert last_release < trial_start + limit_ms, "trial script overruns its limit"
        trial_start = last_release
    end = trial_start + (n_trials - solve) * limit_ms
    return b.frames, _grid(end)


# -- whole-session plans -------------------------------------------------------------


@dataclass(frozen=True)
class SessionPlan:
    """Planned behavior and planted errors for a scripted session."""

    dimsum_wrong: int = 0
    dimsum_leave: int = 0
    steamer_steam: int | None = None
    steamer_transfer: int | None = None
    steamer_early: int = 0
    steamer_late: int = 0
    cashier_solve: int | None = None
    cashier_overshoots: int = 0
    pace_ms: int = 0


def session_script(
    params: DifficultyParams,
    seed: int,
    tutorial_ms: int = 30_000,
    plan: SessionPlan = SessionPlan(),
    label: str = "",
) -> InputScript:
    """Frames for a full three-task session following the plan."""
    frames: list[InputFrame] = []
    d_frames, d_end = dimsum_frames(
        params,
        seed,
        t0_ms=0,
        tutorial_ms=tutorial_ms,
        wrong=plan.dimsum_wrong,
        leave=plan.dimsum_leave,
        pace_ms=plan.pace_ms,
    )
    frames += d_frames
    s_frames, s_end = steamer_frames(
        params,
        seed,
        t0_ms=d_end,
        tutorial_ms=tutorial_ms,
        steam=plan.steamer_steam,
        transfer=plan.steamer_transfer,
        serve_early=plan.steamer_early,
        serve_late=plan.steamer_late,
        pace_ms=plan.pace_ms,
    )
    frames += s_frames
    c_frames, _ = cashier_frames(
        params,
        seed,
        t0_ms=s_end,
        tutorial_ms=tutorial_ms,
        solve_trials=plan.cashier_solve,
        overshoots=plan.cashier_overshoots,
        pace_ms=plan.pace_ms,
    )
    frames += c_frames
    return InputScript(frames, label=label or "session", seed=seed)


def perfect_session_script(
    params: DifficultyParams, seed: int, tutorial_ms: int = 30_000
) -> InputScript:
    return session_script(params, seed, tutorial_ms, SessionPlan(), label="perfect_session")


def error_session_script(
    params: DifficultyParams, seed: int, tutorial_ms: int = 30_000
) -> InputScript:
    """Planted-error session: one wrong Dim Sum placement in six, five of
    eight Steamer actions missed, four of five Cashier trials timed out."""
    plan = SessionPlan(
        dimsum_wrong=1,
        steamer_steam=2,
        steamer_transfer=1,
        cashier_solve=1,
    )
    return session_script(params, seed, tutorial_ms, plan, label="error_injection")


# -- free-standing gesture exercises -----------------------------------------------


def pick_place_script(pairs: int = 6, seed: int = 0) -> InputScript:
    """Exactly `pairs` grasp/release cycles, with mid-band wobble between them
    that must never trigger the recognizer."""
    rng = random.Random(seed)
    b = FrameBuilder()
    for i in range(pairs):
        x = round(-0.8 + 0.3 * (i % 3), 6)
        y = round(0.5 - 0.4 * (i // 3), 6)
        b.emit(x, y, 0.0)
        b.emit(x, y, round(rng.uniform(0.75, 1.0), 6))
        b.emit(x + 0.5, y, round(rng.uniform(0.75, 1.0), 6))
        b.emit(x + 0.5, y, round(rng.uniform(0.0, 0.25), 6))
        # wobble strictly inside the hysteresis band
        for _ in range(3):
            b.emit(x + 0.5, y, round(rng.uniform(0.35, 0.65), 6))
    return InputScript(b.frames, label=f"pick_place_{pairs}", seed=seed)


def random_frames(seed: int, count: int) -> list[InputFrame]:
    """Seeded random-walk frames for fuzzing and digest pinning."""
    rng = random.Random(seed)
    frames = []
    t_ms = TICK_MS
    x = y = z = 0.0
    for _ in range(count):
        x = max(-1.0, min(1.0, x + rng.uniform(-0.1, 0.1)))
        y = max(-1.0, min(1.0, y + rng.uniform(-0.1, 0.1)))
        z = max(-1.0, min(1.0, z + rng.uniform(-0.05, 0.05)))
        frames.append(
            InputFrame(
                t_ms / 1000.0,
                round(x, 6),
                round(y, 6),
                round(z, 6),
                round(rng.random(), 6),
                rng.random() > 0.02,
            )
        )
        t_ms += TICK_MS
    return frames


def random_activity_frames(
    seed: int,
    anchors: list[tuple[float, float]],
    t_start_ms: int,
    t_end_ms: int,
) -> list[InputFrame]:
    """Random but purposeful play: repeatedly approach an anchor, grab, carry
    toward another anchor, release. Used for randomized simulated sessions."""
    rng = random.Random(seed)
    b = FrameBuilder().at(_grid(t_start_ms))
    while b.t_ms < t_end_ms:
        src = rng.choice(anchors)
        dst = rng.choice(anchors)
        jitter = lambda p: (
            max(-1.0, min(1.0, round(p[0] + rng.uniform(-0.05, 0.05), 6))),
            max(-1.0, min(1.0, round(p[1] + rng.uniform(-0.05, 0.05), 6))),
        )
        src, dst = jitter(src), jitter(dst)
        b.emit(src[0], src[1], round(rng.uniform(0.0, 0.25), 6))
        hold = rng.randint(1, 8)
        b.emit(src[0], src[1], round(rng.uniform(0.75, 1.0), 6))
        for _ in range(hold):
            mid = (
                round(src[0] + (dst[0] - src[0]) * rng.random(), 6),
                round(src[1] + (dst[1] - src[1]) * rng.random(), 6),
            )
            b.emit(mid[0], mid[1], round(rng.uniform(0.75, 1.0), 6))
        b.emit(dst[0], dst[1], round(rng.uniform(0.0, 0.25), 6))
        b.wait(TICK_MS * rng.randint(0, 40))
    return [f for f in b.frames if round(f.t * 1000) <= t_end_ms]
