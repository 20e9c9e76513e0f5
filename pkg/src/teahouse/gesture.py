"""Hand-sample stream to semantic gesture events.

The recognizer turns raw frames (position + scalar grab strength) into
grasp/move/release events using hysteresis thresholding, so tremor inside the
dead band never chatters. It is a pure function of the frame stream: one
recognizer instance per session, no hidden clock.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Iterator

from .core import TeahouseError

GRASP_ON = 0.7
GRASP_OFF = 0.3
MOVE_DEADBAND = 0.01


class StreamOrderError(TeahouseError):
    def __init__(self, index: int, t: float, last_t: float):
        self.index = index
        super().__init__(f"frame {index} regresses in time: t={t} after t={last_t}")


class RecordingParseError(TeahouseError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {reason}")


def _clamp(v: float) -> float:
    return -1.0 if v < -1.0 else (1.0 if v > 1.0 else v)


@dataclass(frozen=True)
class InputFrame:
    """One raw hand sample in normalized interaction-box coordinates."""

    t: float  # seconds since session start
    x: float
    y: float
    z: float
    grab: float  # grab strength in [0, 1]
    hand_present: bool = True

    def __post_init__(self):
        object.__setattr__(self, "x", _clamp(self.x))
        object.__setattr__(self, "y", _clamp(self.y))
        object.__setattr__(self, "z", _clamp(self.z))
        g = self.grab
        object.__setattr__(self, "grab", 0.0 if g < 0.0 else (1.0 if g > 1.0 else g))

    @property
    def pos(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


class GestureKind(Enum):
    GRASP_START = "grasp_start"
    MOVE = "move"
    RELEASE = "release"
    HAND_LOST = "hand_lost"


@dataclass(frozen=True)
class GestureEvent:
    t: float
    kind: GestureKind
    pos: tuple[float, float, float]


class GestureRecognizer:
    """Single-consumer stream transformer; feed frames in time order."""

    def __init__(self):
        self._grasped = False
        self._last_t: float | None = None
        self._last_pos: tuple[float, float, float] | None = None
        self._last_emit_pos: tuple[float, float, float] | None = None
        self._index = 0

    @property
    def grasped(self) -> bool:
        return self._grasped

    def feed(self, frame: InputFrame) -> list[GestureEvent]:
        if self._last_t is not None and frame.t < self._last_t:
            raise StreamOrderError(self._index, frame.t, self._last_t)
        self._last_t = frame.t
        self._index += 1

        out: list[GestureEvent] = []
        if not frame.hand_present:
            if self._grasped:
                # Losing the hand mid-grasp releases at the last known position.
                pos = self._last_pos if self._last_pos is not None else frame.pos
                out.append(GestureEvent(frame.t, GestureKind.HAND_LOST, pos))
                self._grasped = False
                self._last_emit_pos = None
            return out

        if not self._grasped and frame.grab >= GRASP_ON:
            self._grasped = True
            self._last_emit_pos = frame.pos
            out.append(GestureEvent(frame.t, GestureKind.GRASP_START, frame.pos))
        elif self._grasped and frame.grab <= GRASP_OFF:
            self._grasped = False
            self._last_emit_pos = None
            out.append(GestureEvent(frame.t, GestureKind.RELEASE, frame.pos))
        elif self._grasped:
            ref = self._last_emit_pos
            assert ref is not None
            if any(abs(a - b) >= MOVE_DEADBAND for a, b in zip(frame.pos, ref)):
                self._last_emit_pos = frame.pos
                out.append(GestureEvent(frame.t, GestureKind.MOVE, frame.pos))

        self._last_pos = frame.pos
        return out


def recognize(frames: Iterable[InputFrame]) -> Iterator[GestureEvent]:
    rec = GestureRecognizer()
    for frame in frames:
        yield from rec.feed(frame)


@dataclass
class InputScript:
    """A pre-built frame timeline used by the simulated player."""

    frames: list[InputFrame] = field(default_factory=list)
    label: str = ""
    seed: int = 0

    def __post_init__(self):
        last = None
        for i, f in enumerate(self.frames):
            if last is not None and f.t < last:
                raise StreamOrderError(i, f.t, last)
            last = f.t


# --- recording files: one frame per line, `t x y z grab hand_present`, 6 dp ---

def _frame_line(f: InputFrame) -> str:
    return "%.6f %.6f %.6f %.6f %.6f %d\n" % (f.t, f.x, f.y, f.z, f.grab, 1 if f.hand_present else 0)


def record(frames: Iterable[InputFrame], sink: IO[str]) -> int:
    """Write frames to a recording; returns the number of frames written."""
    n = 0
    for f in frames:
        sink.write(_frame_line(f))
        n += 1
    return n


def replay(source: IO[str]) -> Iterator[InputFrame]:
    """Stream frames back from a recording produced by :func:`record`."""
    for line_no, line in enumerate(source, start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise RecordingParseError(line_no, f"expected 6 fields, got {len(parts)}")
        try:
            t, x, y, z, grab = (float(p) for p in parts[:5])
            hand = bool(int(parts[5]))
        except ValueError as e:
            raise RecordingParseError(line_no, str(e)) from None
        yield InputFrame(t, x, y, z, grab, hand)


# --- script files: JSONL with a metadata header line ---

def save_script(script: InputScript, sink: IO[str]) -> None:
    sink.write(json.dumps({"label": script.label, "seed": script.seed}) + "\n")
    for f in script.frames:
        sink.write(
            json.dumps(
                {
                    "t": round(f.t, 6),
                    "x": round(f.x, 6),
                    "y": round(f.y, 6),
                    "z": round(f.z, 6),
                    "grab": round(f.grab, 6),
                    "hand": 1 if f.hand_present else 0,
                }
            )
            + "\n"
        )


def load_script(source: IO[str]) -> InputScript:
    header_line = source.readline()
    if not header_line.strip():
        return InputScript([], label="", seed=0)
    try:
        header = json.loads(header_line)
    except json.JSONDecodeError as e:
        raise RecordingParseError(1, f"bad header: {e}") from None
    frames = []
    for line_no, line in enumerate(source, start=2):
        if not line.strip():
            continue
        try:
            d = json.loads(line)
            frames.append(
                InputFrame(d["t"], d["x"], d["y"], d["z"], d["grab"], bool(d.get("hand", 1)))
            )
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise RecordingParseError(line_no, str(e)) from None
    return InputScript(frames, label=header.get("label", ""), seed=header.get("seed", 0))
