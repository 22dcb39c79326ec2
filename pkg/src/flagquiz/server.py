"""Network play service: session API over HTTP plus a per-session stream.

Sessions live in memory and expire after a configurable idle period. Each
session's utterance handling is serialized behind an asyncio lock; the stream
socket receives exactly the records that go to the game log, so a client can
render the whole game from pushed events alone.
"""
from __future__ import annotations

import asyncio
import time
import uuid
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import dialogue, nlg, nlu
from .registry import CountryRegistry, load_default_registry
from .session import GameSession

DEFAULT_SESSION_TTL = 30 * 60.0


class CreateSessionRequest(BaseModel):
    strategy: Literal["procedural", "diarised"] = "procedural"
    threshold: int = Field(default=3, ge=1)
    clue_trigger: int = Field(default=2, ge=1)
    seed: int | None = None
    p_confusion: float = Field(default=0.0, ge=0.0, le=1.0)


class UtteranceRequest(BaseModel):
    speaker: Literal["P1", "P2"]
    text: str = Field(min_length=1)


class _LiveSession:
    def __init__(self, session: GameSession, session_id: str):
        self.session = session
        self.session_id = session_id
        self.lock = asyncio.Lock()
        self.last_activity = time.monotonic()
        self.subscribers: list[asyncio.Queue] = []

    def touch(self) -> None:
        self.last_activity = time.monotonic()

    def broadcast(self, message: dict) -> None:
        for queue in list(self.subscribers):
            queue.put_nowait(message)


def _question_payload(session: GameSession) -> dict:
    state = session.state
    question = state.question
    return {
        "round": state.round,
        "flag": dialogue.flag_glyph(question.target),
        "options": [session.registry.name_of(code) for code in question.options],
        "option_codes": list(question.options),
    }


def _state_payload(session: GameSession) -> dict:
    summary = session.state.summary()
    summary["finished"] = session.finished
    return summary


def create_app(
    registry: CountryRegistry | None = None,
    nlu_config: nlu.NluConfig | None = None,
    pools: dict[str, tuple[str, ...]] | None = None,
    session_ttl: float = DEFAULT_SESSION_TTL,
    log_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    registry = registry if registry is not None else load_default_registry()
    nlu_config = nlu_config or nlu.load_default_nlu_config()
    pools = pools or nlg.load_templates()
    app = FastAPI(title="flagquiz", version="0.1.0")
    sessions: dict[str, _LiveSession] = {}

    def purge_idle() -> None:
        now = time.monotonic()
        expired = [
            sid for sid, live in sessions.items() if now - live.last_activity > session_ttl
        ]
        for sid in expired:
            del sessions[sid]

    def live_session(session_id: str) -> _LiveSession:
        purge_idle()
        live = sessions.get(session_id)
        if live is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return live

    @app.post("/sessions")
    async def create_session(request: CreateSessionRequest) -> dict:
        purge_idle()
        config = dialogue.SessionConfig(
            strategy=request.strategy,
            answer_threshold=request.threshold,
            clue_trigger=request.clue_trigger,
            seed=request.seed,
        )
        session_id = uuid.uuid4().hex
        log_path = Path(log_dir) / f"{session_id}.jsonl" if log_dir else None
        try:
            session = GameSession(
                config,
                registry=registry,
                nlu_config=nlu_config,
                pools=pools,
                speaker_confusion=request.p_confusion,
                log_path=log_path,
            )
        except dialogue.ConfigurationError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        sessions[session_id] = _LiveSession(session, session_id)
        return {
            "session_id": session_id,
            "utterance": session.opening_utterance,
            "question": _question_payload(session),
            "state": _state_payload(session),
        }

    @app.post("/sessions/{session_id}/utterances")
    async def post_utterance(session_id: str, request: UtteranceRequest) -> dict:
        live = live_session(session_id)
        async with live.lock:
            if live.session.finished:
                raise HTTPException(status_code=409, detail="session already finished")
            live.touch()
            outcome = live.session.post(request.speaker, request.text)
        record = outcome.record()
        record["type"] = "turn"
        record["session_id"] = session_id
        record["state"] = _state_payload(live.session)
        record["question"] = _question_payload(live.session)
        live.broadcast(record)
        return {
            "nlu": record["nlu"],
            "actions": record["actions"],
            "state": record["state"],
            "question": record["question"],
        }

    @app.get("/sessions/{session_id}/state")
    async def get_state(session_id: str) -> dict:
        live = live_session(session_id)
        live.touch()
        return {
            "session_id": session_id,
            "state": _state_payload(live.session),
            "question": _question_payload(live.session),
        }

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str) -> None:
        await websocket.accept()
        live = sessions.get(session_id)
        if live is None:
            await websocket.send_json({"type": "error", "detail": "unknown session"})
            await websocket.close(code=4404)
            return
        queue: asyncio.Queue = asyncio.Queue()
        live.subscribers.append(queue)
        await websocket.send_json(
            {
                "type": "state",
                "session_id": session_id,
                "utterance": live.session.opening_utterance,
                "state": _state_payload(live.session),
                "question": _question_payload(live.session),
            }
        )
        # Waiting on the socket as well as the queue notices client
        # disconnects promptly, otherwise dead subscribers pile up.
        receiver = asyncio.ensure_future(websocket.receive_text())
        try:
            while True:
                pusher = asyncio.ensure_future(queue.get())
                done, _ = await asyncio.wait(
                    {receiver, pusher}, return_when=asyncio.FIRST_COMPLETED
                )
                if receiver in done:
                    pusher.cancel()
                    receiver.exception()  # swallow the disconnect
                    break
                await websocket.send_json(pusher.result())
        except WebSocketDisconnect:
            pass
        finally:
            receiver.cancel()
            if queue in live.subscribers:
                live.subscribers.remove(queue)

    if ui_dir:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
