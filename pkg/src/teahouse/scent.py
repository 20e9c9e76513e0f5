"""Scent command queue between the games and an olfactory device driver.

Commands are delivered in timestamp order. Same-scent commands that overlap
(or follow within the merge window) extend the running pulse instead of
duplicating it: physical diffusers cannot articulate faster anyway. Driver
failures never block a session; scent is an enhancement channel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Any

from .core import StateError, TeahouseError

# Same-scent commands arriving within this window of the previous pulse's end
# are folded into it.
MERGE_WINDOW_MS = 500


class ScentDriverError(TeahouseError):
    pass


@dataclass(frozen=True)
class ScentCommand:
    t: float  # seconds, session time of the triggering event
    scent_id: str
    duration_ms: int
    source: dict[str, Any] = field(default_factory=dict)  # {game, kind, t} of the trigger

    def __post_init__(self):
        if self.duration_ms <= 0:
            raise ValueError(f"duration_ms must be positive, got {self.duration_ms}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "scent_id": self.scent_id,
            "duration_ms": self.duration_ms,
            "source": self.source,
        }


@dataclass
class Emission:
    """One pulse actually sent to the driver; may represent several merged commands."""

    t: float
    scent_id: str
    duration_ms: int
    merged: int  # number of commands folded into this pulse
    status: str = "pending"  # pending | emitted | failed
    sources: list[dict[str, Any]] = field(default_factory=list)

    @property
    def end_ms(self) -> int:
        return round(self.t * 1000) + self.duration_ms

    def to_dict(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "scent_id": self.scent_id,
            "duration_ms": self.duration_ms,
            "merged": self.merged,
            "status": self.status,
        }


class MockScentDriver:
    """Records the device wire protocol: `EMIT <scent_id> <duration_ms>` and
    `STOP <scent_id>` lines, each prefixed with the session timestamp."""

    def __init__(self, sink: IO[str] | None = None):
        self.sink = sink
        self.lines: list[str] = []

    def _write(self, line: str) -> None:
        self.lines.append(line)
        if self.sink is not None:
            self.sink.write(line + "\n")

    def emit(self, t: float, scent_id: str, duration_ms: int) -> None:
        self._write("%.3f EMIT %s %d" % (t, scent_id, duration_ms))

    def stop(self, t: float, scent_id: str) -> None:
        self._write("%.3f STOP %s" % (t, scent_id))


class FailingScentDriver:
    """Test double: always refuses, to exercise failure handling."""

    def emit(self, t: float, scent_id: str, duration_ms: int) -> None:
        raise ScentDriverError("device unavailable")

    def stop(self, t: float, scent_id: str) -> None:
        raise ScentDriverError("device unavailable")


class OlfactoryBridge:
    """Per-session FIFO of scent pulses with same-scent merging.

    ``enqueue`` may only be called from the session loop; ``drain(now_ms)``
    releases pulses whose merge window has closed, so merging is independent
    of how often the caller drains.
    """

    def __init__(self, driver=None):
        self.driver = driver if driver is not None else MockScentDriver()
        self._pending: list[Emission] = []
        self._done: list[Emission] = []
        self._last_t_ms: int | None = None
        self.commands = 0
        self.merges = 0
        self.failures = 0

    @property
    def emitted(self) -> list[Emission]:
        return [e for e in self._done if e.status == "emitted"]

    @property
    def failed(self) -> list[Emission]:
        return [e for e in self._done if e.status == "failed"]

    def enqueue(self, cmd: ScentCommand) -> bool:
        """Queue a command; returns True when it merged into an open pulse."""
        t_ms = round(cmd.t * 1000)
        if self._last_t_ms is not None and t_ms < self._last_t_ms:
            raise StateError(f"scent command at t={cmd.t} regresses before the last command")
        self._last_t_ms = t_ms
        self.commands += 1

        for pulse in reversed(self._pending):
            if pulse.scent_id != cmd.scent_id:
                continue
            if t_ms <= pulse.end_ms + MERGE_WINDOW_MS:
                new_end = max(pulse.end_ms, t_ms + cmd.duration_ms)
                pulse.duration_ms = new_end - round(pulse.t * 1000)
                pulse.merged += 1
                pulse.sources.append(cmd.source)
                self.merges += 1
                return True
            break
        self._pending.append(
            Emission(t=cmd.t, scent_id=cmd.scent_id, duration_ms=cmd.duration_ms, merged=1, sources=[cmd.source])
        )
        return False

    def drain(self, now_ms: int | None = None) -> list[Emission]:
        """Deliver pulses to the driver in timestamp order (stable for ties).

        With ``now_ms`` given, only pulses whose merge window has closed are
        released; call without it to flush everything at session end.
        """
        released: list[Emission] = []
        keep: list[Emission] = []
        for pulse in self._pending:
            if now_ms is None or pulse.end_ms + MERGE_WINDOW_MS <= now_ms:
                released.append(pulse)
            else:
                keep.append(pulse)
        self._pending = keep
        for pulse in released:
            try:
                self.driver.emit(pulse.t, pulse.scent_id, pulse.duration_ms)
                pulse.status = "emitted"
            except Exception:
                pulse.status = "failed"
                self.failures += 1
            self._done.append(pulse)
        return released

    def stats(self) -> dict[str, int]:
        return {
            "commands": self.commands,
            "merges": self.merges,
            "emissions": len(self.emitted),
            "failures": self.failures,
            "pending": len(self._pending),
        }
