"""Session orchestration: fixed task order with tutorials, a fixed 50 ms
timestep, record persistence, and event-log replay.

Everything a session does is a pure function of (profile, params, seed, frame
stream): two runs with identical inputs serialize to byte-identical records.
Live play quantizes wall-clock input onto the same 50 ms grid, so online and
offline runs of the same frames produce the same event log.
"""
from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable

from .core import (
    DifficultyParams,
    GameEvent,
    GameId,
    ParticipantProfile,
    StateError,
    TASK_ORDER,
    TeahouseError,
    ValidationError,
)
from .games import CashierGame, DimSumGame, GameMachine, SteamerGame
from .games.cashier import DEFAULT_DENOMINATIONS, Denomination
from .gesture import GestureEvent, GestureRecognizer, InputFrame, InputScript
from .metrics import TaskMetrics, compute_metrics
from .questionnaires import QuestionnaireBundle
from .scent import Emission, MockScentDriver, OlfactoryBridge

TICK_MS = 50
SNAPSHOT_MS = 100
SCHEMA_VERSION = 1

_GAME_CLASSES: dict[GameId, type[GameMachine]] = {
    GameId.DIMSUM: DimSumGame,
    GameId.STEAMER: SteamerGame,
    GameId.CASHIER: CashierGame,
}


class RecordParseError(TeahouseError):
    pass


class SchemaVersionError(TeahouseError):
    pass


@dataclass(frozen=True)
class StateSnapshot:
    session_id: str
    seq: int
    t: float
    game: str
    state: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "snapshot",
            "session_id": self.session_id,
            "seq": self.seq,
            "t": self.t,
            "game": self.game,
            "state": self.state,
        }


@dataclass
class SessionRecord:
    profile: ParticipantProfile
    params: DifficultyParams
    seed: int
    tutorial_ms: int
    events: list[GameEvent]
    metrics: dict[GameId, TaskMetrics]
    questionnaires: QuestionnaireBundle = field(default_factory=QuestionnaireBundle)
    created_at: str | None = None
    denominations: tuple[Denomination, ...] = DEFAULT_DENOMINATIONS
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "created_at": self.created_at,
            "profile": self.profile.to_dict(),
            "params": self.params.to_dict(),
            "seed": self.seed,
            "tutorial_ms": self.tutorial_ms,
            "denominations": [{"value": d.value, "kind": d.kind} for d in self.denominations],
            "events": [e.to_dict() for e in self.events],
            "metrics": {g.value: m.to_dict() for g, m in self.metrics.items()},
            "questionnaires": self.questionnaires.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SessionRecord":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaVersionError(f"record schema version {version!r}, expected {SCHEMA_VERSION}")
        return cls(
            profile=ParticipantProfile.from_dict(d["profile"]),
            params=DifficultyParams.from_dict(d["params"]),
            seed=d["seed"],
            tutorial_ms=d["tutorial_ms"],
            events=[GameEvent.from_dict(e) for e in d["events"]],
            metrics={GameId(g): TaskMetrics.from_dict(m) for g, m in d["metrics"].items()},
            questionnaires=QuestionnaireBundle.from_dict(d["questionnaires"]),
            created_at=d.get("created_at"),
            denominations=parse_denominations(d.get("denominations")),
            schema_version=version,
        )


def parse_denominations(raw: Any) -> tuple[Denomination, ...]:
    if raw is None:
        return DEFAULT_DENOMINATIONS
    try:
        return tuple(Denomination(value=d["value"], kind=d["kind"]) for d in raw)
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError([f"bad denomination set: {e}"]) from None


def record_to_bytes(record: SessionRecord) -> bytes:
    """Canonical serialization; identical records always produce identical bytes."""
    return (json.dumps(record.to_dict(), sort_keys=True, indent=2) + "\n").encode("utf-8")


def record_digest(record: SessionRecord) -> str:
    return hashlib.sha256(record_to_bytes(record)).hexdigest()


def save_record(record: SessionRecord, path: str | Path) -> None:
    Path(path).write_bytes(record_to_bytes(record))


def load_record(path: str | Path) -> SessionRecord:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise RecordParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    try:
        return SessionRecord.from_dict(data)
    except SchemaVersionError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise RecordParseError(f"{path}: {e}") from None


@dataclass
class Dataset:
    records: list[SessionRecord]
    provenance: dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        seen: set[str] = set()
        dupes: set[str] = set()
        for r in self.records:
            pid = r.profile.participant_id
            if pid in seen:
                dupes.add(pid)
            seen.add(pid)
        if dupes:
            raise ValidationError([f"duplicate participant_id {d!r}" for d in sorted(dupes)])


def load_dataset(directory: str | Path) -> Dataset:
    directory = Path(directory)
    paths = sorted(p for p in directory.glob("*.json") if p.name != "dataset.json")
    records = [load_record(p) for p in paths]
    provenance: dict[str, Any] = {"source": str(directory)}
    meta = directory / "dataset.json"
    if meta.exists():
        provenance.update(json.loads(meta.read_text()))
    return Dataset(records=records, provenance=provenance)


def save_dataset(dataset: Dataset, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for r in dataset.records:
        save_record(r, directory / f"{r.profile.participant_id}.json")
    (directory / "dataset.json").write_text(
        json.dumps(
            {"schema_version": dataset.schema_version, **dataset.provenance},
            sort_keys=True,
            indent=2,
        )
        + "\n"
    )


class SessionEngine:
    """Runs one session: Dim Sum, Steamer, Cashier, each preceded by its
    tutorial. Drives games from recognized gestures (or replayed gesture
    events), collects scent pulses, snapshots at a fixed cadence."""

    def __init__(
        self,
        profile: ParticipantProfile,
        params: DifficultyParams,
        seed: int,
        tutorial_ms: int = 30_000,
        session_id: str = "",
        scent_driver=None,
        snapshot_cb: Callable[[StateSnapshot], None] | None = None,
        scent_cb: Callable[[Emission], None] | None = None,
        denominations: tuple[Denomination, ...] = DEFAULT_DENOMINATIONS,
    ):
        self.profile = profile
        self.params = params.validated()
        self.seed = seed
        self.tutorial_ms = int(tutorial_ms)
        self.session_id = session_id
        self.snapshot_cb = snapshot_cb
        self.scent_cb = scent_cb
        self.denominations = tuple(denominations)
        self.recognizer = GestureRecognizer()
        self.bridge = OlfactoryBridge(scent_driver if scent_driver is not None else MockScentDriver())
        self.now_ms = 0
        self.seq = 0
        self._frames: deque[InputFrame] = deque()
        self._gestures: deque[GestureEvent] = deque()
        self._task_idx = 0
        self.current: GameMachine | None = self._make_game(TASK_ORDER[0], t0_ms=0)
        self._finished_games: list[GameMachine] = []
        self.finalized: SessionRecord | None = None
        # Hard cap so an engine bug can never spin forever: every game is
        # bounded by its own time limits.
        self._cap_ms = self._cap_for(params)

    def _cap_for(self, params: DifficultyParams) -> int:
        return (
            3 * self.tutorial_ms
            + round(
                1000
                * (
                    params.memorize_duration_s
                    + params.dimsum_time_limit_s
                    + params.steamer_time_limit_s
                    + params.cashier_trial_count * params.cashier_time_limit_s
                )
            )
            + 60_000
        )

    def _make_game(self, game_id: GameId, t0_ms: int) -> GameMachine:
        if game_id == GameId.CASHIER:
            return CashierGame(
                self.params,
                self.seed,
                t0_ms=t0_ms,
                tutorial_ms=self.tutorial_ms,
                denominations=self.denominations,
            )
        return _GAME_CLASSES[game_id](self.params, self.seed, t0_ms=t0_ms, tutorial_ms=self.tutorial_ms)

    # -- input ----------------------------------------------------------------

    def feed_frame(self, frame: InputFrame) -> None:
        if self._frames and frame.t < self._frames[-1].t:
            raise StateError(f"frame at t={frame.t} regresses behind {self._frames[-1].t}")
        self._frames.append(frame)

    def feed_frames(self, frames: Iterable[InputFrame]) -> None:
        for f in frames:
            self.feed_frame(f)

    def feed_gesture(self, ev: GestureEvent) -> None:
        """Replay path: inject an already-recognized gesture."""
        if self._gestures and ev.t < self._gestures[-1].t:
            raise StateError(f"gesture at t={ev.t} regresses behind {self._gestures[-1].t}")
        self._gestures.append(ev)

    def set_difficulty(self, params: DifficultyParams) -> None:
        """Applies from the next trial: the running Cashier game regenerates
        its next trial with the new parameters; other games pick them up when
        they start."""
        if self.finalized is not None:
            raise StateError("session already finalized")
        self.params = params.validated()
        # Longer limits must also stretch the runaway guard.
        self._cap_ms = max(self._cap_ms, self.now_ms + self._cap_for(params))
        if isinstance(self.current, CashierGame) and not self.current.complete:
            self.current.set_params(params)

    # -- time --------------------------------------------------------------------

    @property
    def done(self) -> bool:
        return self.current is None

    def _step(self) -> None:
        """One fixed 50 ms tick: advance the game, then apply due input."""
        if self.current is None:
            return
        self.now_ms += TICK_MS
        if self.now_ms > self._cap_ms:
            raise RuntimeError("session exceeded its hard time cap; engine bug")
        game = self.current
        game.tick(TICK_MS)
        while self._frames and round(self._frames[0].t * 1000) <= self.now_ms:
            frame = self._frames.popleft()
            for gesture in self.recognizer.feed(frame):
                game.apply(gesture)
        while self._gestures and round(self._gestures[0].t * 1000) <= self.now_ms:
            game.apply(self._gestures.popleft())
        for cmd in game.scent_out:
            self.bridge.enqueue(cmd)
        game.scent_out.clear()
        for emission in self.bridge.drain(self.now_ms):
            if self.scent_cb:
                self.scent_cb(emission)
        if self.now_ms % SNAPSHOT_MS == 0 or game.complete:
            self._emit_snapshot()
        if game.complete:
            self._finished_games.append(game)
            self._task_idx += 1
            if self._task_idx < len(TASK_ORDER):
                self.current = self._make_game(TASK_ORDER[self._task_idx], t0_ms=self.now_ms)
            else:
                self.current = None

    def _emit_snapshot(self) -> None:
        if self.current is None:
            return
        self.seq += 1
        snap = StateSnapshot(
            session_id=self.session_id,
            seq=self.seq,
            t=self.now_ms / 1000.0,
            game=self.current.game.value,
            state=self.current.snapshot(),
        )
        if self.snapshot_cb:
            self.snapshot_cb(snap)

    def advance_to(self, target_ms: int) -> None:
        while not self.done and self.now_ms < target_ms:
            self._step()

    def run_to_completion(self) -> None:
        while not self.done:
            self._step()

    # -- results --------------------------------------------------------------------

    def events(self) -> list[GameEvent]:
        out: list[GameEvent] = []
        for g in self._finished_games:
            out.extend(g.events)
        if self.current is not None:
            out.extend(self.current.events)
        return out

    def completed_metrics(self) -> dict[GameId, TaskMetrics]:
        """Metrics for the tasks that have already reached their terminal state."""
        events = self.events()
        return {g.game: compute_metrics(events, g.game) for g in self._finished_games}

    def live_counts(self) -> dict[str, dict[str, int]]:
        """Running correct/inaccuracy/omission tallies per game, for live panels."""
        counts: dict[str, dict[str, int]] = {}
        for ev in self.events():
            g = counts.setdefault(ev.game.value, {"correct": 0, "inaccuracy": 0, "omission": 0})
            if ev.kind.value in g:
                g[ev.kind.value] += 1
        return counts

    def finalize(
        self,
        questionnaires: QuestionnaireBundle | None = None,
        created_at: str | None = None,
    ) -> SessionRecord:
        if self.finalized is not None:
            return self.finalized
        self.run_to_completion()
        for emission in self.bridge.drain(None):
            if self.scent_cb:
                self.scent_cb(emission)
        events = self.events()
        metrics = {g: compute_metrics(events, g) for g in TASK_ORDER}
        self.finalized = SessionRecord(
            profile=self.profile,
            params=self.params,
            seed=self.seed,
            tutorial_ms=self.tutorial_ms,
            events=events,
            metrics=metrics,
            questionnaires=questionnaires or QuestionnaireBundle(),
            created_at=created_at,
            denominations=self.denominations,
        )
        return self.finalized


def run_session(
    profile: ParticipantProfile,
    params: DifficultyParams,
    seed: int,
    source: InputScript | Iterable[InputFrame],
    questionnaires: QuestionnaireBundle | None = None,
    tutorial_ms: int = 30_000,
    created_at: str | None = None,
    scent_driver=None,
    snapshot_cb: Callable[[StateSnapshot], None] | None = None,
    scent_cb: Callable[[Emission], None] | None = None,
    denominations: tuple[Denomination, ...] = DEFAULT_DENOMINATIONS,
) -> SessionRecord:
    """Execute the full phase plan against a frame source and return the
    finalized record. A source that runs dry simply lets the remaining tasks
    time out; the session still completes."""
    engine = SessionEngine(
        profile,
        params,
        seed,
        tutorial_ms=tutorial_ms,
        scent_driver=scent_driver,
        snapshot_cb=snapshot_cb,
        scent_cb=scent_cb,
        denominations=denominations,
    )
    frames = source.frames if isinstance(source, InputScript) else source
    engine.feed_frames(frames)
    return engine.finalize(questionnaires=questionnaires, created_at=created_at)


GESTURE_EVENT_KINDS = {"grasp", "move", "release", "hand_lost"}


def gesture_events_of(record: SessionRecord) -> list[GestureEvent]:
    """Extract the raw input stream embedded in a record's event log."""
    from .gesture import GestureKind

    kind_map = {
        "grasp": GestureKind.GRASP_START,
        "move": GestureKind.MOVE,
        "release": GestureKind.RELEASE,
        "hand_lost": GestureKind.HAND_LOST,
    }
    out = []
    for ev in record.events:
        if ev.kind.value in GESTURE_EVENT_KINDS:
            pos = ev.payload["pos"]
            out.append(GestureEvent(t=ev.t, kind=kind_map[ev.kind.value], pos=(pos[0], pos[1], pos[2])))
    return out


def replay_record(
    record: SessionRecord,
    snapshot_cb: Callable[[StateSnapshot], None] | None = None,
    scent_cb: Callable[[Emission], None] | None = None,
) -> SessionRecord:
    """Re-run a session purely from its event-log prefix of gestures.

    The regenerated record must equal the stored one event for event; every
    snapshot of the original run is reconstructed along the way.
    """
    engine = SessionEngine(
        profile=record.profile,
        params=record.params,
        seed=record.seed,
        tutorial_ms=record.tutorial_ms,
        snapshot_cb=snapshot_cb,
        scent_cb=scent_cb,
        denominations=record.denominations,
    )
    for gesture in gesture_events_of(record):
        engine.feed_gesture(gesture)
    return engine.finalize(
        questionnaires=record.questionnaires, created_at=record.created_at
    )


def verify_record(record: SessionRecord) -> bool:
    """True when replaying the record regenerates the identical event log."""
    regenerated = replay_record(record)
    return regenerated.events == record.events and regenerated.metrics == record.metrics
