"""Live session service.

Request/response endpoints plus one bidirectional stream per session. Every
message is a JSON object with a ``type`` field:

  create         client -> server   POST /api/sessions
  created        server -> client   response to create
  frame          client -> server   over the stream (raw hand sample)
  snapshot       server -> client   over the stream, at the snapshot cadence
  scent          server -> client   over the stream (device pulse notification)
  set_difficulty client -> server   POST /api/sessions/{id}/difficulty
  metrics        server -> client   GET /api/sessions/{id}/metrics and finalize response
  finalize       client -> server   POST /api/sessions/{id}/finalize
  error          server -> client   any failure

In realtime mode a pacer advances each session's clock at wall speed while a
stream client is connected; frames may omit ``t`` and are quantized onto the
engine's 50 ms grid on arrival. Without realtime, time advances only as far as
the frames' own timestamps, and ``finalize`` fast-forwards the rest, which is
what makes a scripted online run reproduce the offline run exactly.
"""
from __future__ import annotations

import asyncio
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .core import DifficultyParams, StateError, TeahouseError, validate_profile
from .gesture import InputFrame
from .questionnaires import QuestionnaireBundle
from .session import SNAPSHOT_MS, TICK_MS, SessionEngine, parse_denominations

_session_counter = itertools.count(1)


def _error(code: str, message: str, status: int) -> JSONResponse:
    return JSONResponse({"type": "error", "code": code, "message": message}, status_code=status)


@dataclass
class LiveSession:
    session_id: str
    engine: SessionEngine
    realtime: bool
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    outboxes: set[asyncio.Queue] = field(default_factory=set)
    last_snapshot: dict[str, Any] | None = None
    pacer: asyncio.Task | None = None

    def attach_callbacks(self) -> None:
        def on_snapshot(snap):
            msg = snap.to_dict()
            self.last_snapshot = msg
            self._broadcast(msg)

        def on_scent(emission):
            self._broadcast({"type": "scent", "session_id": self.session_id, **emission.to_dict()})

        self.engine.snapshot_cb = on_snapshot
        self.engine.scent_cb = on_scent

    def _broadcast(self, msg: dict[str, Any]) -> None:
        for q in self.outboxes:
            q.put_nowait(msg)

    async def ensure_pacer(self) -> None:
        if not self.realtime or self.pacer is not None:
            return

        async def pace():
            while self.outboxes and self.engine.finalized is None and not self.engine.done:
                await asyncio.sleep(TICK_MS / 1000.0)
                async with self.lock:
                    if self.engine.finalized is None:
                        self.engine.advance_to(self.engine.now_ms + TICK_MS)
            self.pacer = None

        self.pacer = asyncio.create_task(pace())

    def metrics_message(self) -> dict[str, Any]:
        finalized = self.engine.finalized
        if finalized is not None:
            metrics = {g.value: m.to_dict() for g, m in finalized.metrics.items()}
        else:
            metrics = {g.value: m.to_dict() for g, m in self.engine.completed_metrics().items()}
        return {
            "type": "metrics",
            "session_id": self.session_id,
            "finalized": finalized is not None,
            "t": self.engine.now_ms / 1000.0,
            "metrics": metrics,
            "counts": self.engine.live_counts(),
        }


class SessionHub:
    def __init__(self, realtime: bool = False):
        self.realtime = realtime
        self.sessions: dict[str, LiveSession] = {}

    def create(self, body: dict[str, Any]) -> LiveSession:
        profile_d = body.get("profile") or {}
        profile = validate_profile(
            participant_id=profile_d.get("participant_id", ""),
            age=profile_d.get("age", 0),
            gender=profile_d.get("gender", "other"),
            education_band=profile_d.get("education_band", "7-9y"),
            moca_score=profile_d.get("moca_score", 0),
        )
        params = DifficultyParams.from_dict(body.get("params") or {})
        denominations = parse_denominations(body.get("denominations"))
        seed = int(body.get("seed", 0))
        tutorial_ms = int(body.get("tutorial_ms", 30_000))
        session_id = f"s{next(_session_counter):05d}"
        engine = SessionEngine(
            profile,
            params,
            seed,
            tutorial_ms=tutorial_ms,
            session_id=session_id,
            denominations=denominations,
        )
        live = LiveSession(session_id=session_id, engine=engine, realtime=self.realtime)
        live.attach_callbacks()
        self.sessions[session_id] = live
        return live

    def get(self, session_id: str) -> LiveSession | None:
        return self.sessions.get(session_id)


def create_app(realtime: bool = False, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="teahouse live service")
    hub = SessionHub(realtime=realtime)
    app.state.hub = hub

    @app.post("/api/sessions")
    async def create_session(request: Request):
        body = await request.json()
        if body.get("type") != "create":
            return _error("validation", "expected message type 'create'", 422)
        try:
            live = hub.create(body)
        except TeahouseError as e:
            return _error("validation", str(e), 422)
        return {
            "type": "created",
            "session_id": live.session_id,
            "tick_ms": TICK_MS,
            "snapshot_ms": SNAPSHOT_MS,
            "tutorial_ms": live.engine.tutorial_ms,
            "params": live.engine.params.to_dict(),
        }

    @app.post("/api/sessions/{session_id}/difficulty")
    async def set_difficulty(session_id: str, request: Request):
        live = hub.get(session_id)
        if live is None:
            return _error("not_found", f"unknown session {session_id}", 404)
        body = await request.json()
        if body.get("type") != "set_difficulty":
            return _error("validation", "expected message type 'set_difficulty'", 422)
        try:
            params = DifficultyParams.from_dict(body.get("params") or {})
            async with live.lock:
                live.engine.set_difficulty(params)
        except StateError as e:
            return _error("state", str(e), 409)
        except TeahouseError as e:
            return _error("validation", str(e), 422)
        return {
            "type": "set_difficulty",
            "session_id": session_id,
            "ok": True,
            "applies": "next_trial",
            "params": params.to_dict(),
        }

    @app.get("/api/sessions/{session_id}/metrics")
    async def get_metrics(session_id: str):
        live = hub.get(session_id)
        if live is None:
            return _error("not_found", f"unknown session {session_id}", 404)
        async with live.lock:
            return live.metrics_message()

    @app.post("/api/sessions/{session_id}/finalize")
    async def finalize(session_id: str, request: Request):
        live = hub.get(session_id)
        if live is None:
            return _error("not_found", f"unknown session {session_id}", 404)
        body = await request.json() if await request.body() else {}
        if body and body.get("type") not in (None, "finalize"):
            return _error("validation", "expected message type 'finalize'", 422)
        questionnaires = None
        if body.get("questionnaires"):
            try:
                questionnaires = QuestionnaireBundle.from_dict(body["questionnaires"])
            except TeahouseError as e:
                return _error("validation", str(e), 422)
        async with live.lock:
            record = live.engine.finalize(
                questionnaires=questionnaires, created_at=body.get("created_at")
            )
        msg = live.metrics_message()
        msg["record"] = record.to_dict()
        return msg

    @app.websocket("/api/sessions/{session_id}/stream")
    async def stream(ws: WebSocket, session_id: str):
        live = hub.get(session_id)
        await ws.accept()
        if live is None:
            await ws.send_json({"type": "error", "code": "not_found", "message": session_id})
            await ws.close()
            return
        outbox: asyncio.Queue = asyncio.Queue()
        live.outboxes.add(outbox)
        if live.last_snapshot is not None:
            outbox.put_nowait(live.last_snapshot)
        await live.ensure_pacer()

        async def sender():
            while True:
                msg = await outbox.get()
                await ws.send_json(msg)

        send_task = asyncio.create_task(sender())
        try:
            while True:
                msg = await ws.receive_json()
                mtype = msg.get("type")
                if mtype == "frame":
                    try:
                        async with live.lock:
                            if live.engine.finalized is not None:
                                raise StateError("session already finalized")
                            if msg.get("t") is None:
                                t_ms = live.engine.now_ms + TICK_MS
                            else:
                                t_ms = round(float(msg["t"]) * 1000)
                            frame = InputFrame(
                                t_ms / 1000.0,
                                float(msg.get("x", 0.0)),
                                float(msg.get("y", 0.0)),
                                float(msg.get("z", 0.0)),
                                float(msg.get("grab", 0.0)),
                                bool(msg.get("hand", True)),
                            )
                            live.engine.feed_frame(frame)
                            if not live.realtime:
                                target = -(-t_ms // TICK_MS) * TICK_MS
                                live.engine.advance_to(target)
                    except (StateError, ValueError) as e:
                        await ws.send_json({"type": "error", "code": "state", "message": str(e)})
                elif mtype == "finalize":
                    async with live.lock:
                        live.engine.finalize()
                    await ws.send_json(live.metrics_message())
                else:
                    await ws.send_json(
                        {"type": "error", "code": "validation", "message": f"unknown type {mtype!r}"}
                    )
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            live.outboxes.discard(outbox)

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
