"""HTTP session API for the stone-picking game.

In-memory sessions, one lock per session id, no persistence.  The server
owns every rule decision: clients send raw moves and get either the new
state or a 409 carrying the engine's error code, so a thin client needs
no game logic at all.

POST   /api/sessions                      create (201)
GET    /api/sessions/{id}                 state + legal moves
POST   /api/sessions/{id}/pick            human Player 1 move
POST   /api/sessions/{id}/partition       human Player 2 move
POST   /api/sessions/{id}/engine-step     one engine action
DELETE /api/sessions/{id}                 drop the session (204)
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import game
from .game import GameError, GameState, Roles
from .problems import ConstrainedLongChoiceInstance, LongChoiceInstance
from .serialization import SerializationError, load_instance


class CreateSession(BaseModel):
    n: int
    human_seat: int | str | None = None
    instance: dict | None = None


class PickBody(BaseModel):
    stone: int


class PartitionBody(BaseModel):
    group0: list[int]


@dataclass
class SessionEntry:
    state: GameState
    instance: LongChoiceInstance | ConstrainedLongChoiceInstance | None
    lock: threading.Lock = field(default_factory=threading.Lock)


def state_payload(state: GameState) -> dict:
    pending = None
    if state.pending is not None:
        group0, group1 = state.pending
        pending = {"group0": list(group0), "group1": list(group1)}
    return {
        "n": state.n,
        "round": state.round,
        "phase": state.phase,
        "alive": list(state.alive),
        "picks": list(state.picks),
        "discarded": list(state.discarded),
        "pending": pending,
        "roles": {"player1": state.roles.player1, "player2": state.roles.player2},
        "winner": state.winner,
        "transcript": [[move, list(x) if isinstance(x, tuple) else x]
                       for move, x in state.transcript],
    }


def legal_moves(state: GameState) -> dict:
    if state.phase == game.PHASE_PICK:
        return {"pick": list(state.alive)}
    if state.phase == game.PHASE_PARTITION:
        return {"partition_of": list(state.alive)}
    return {}


def _error(status: int, code: str, detail: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"code": code, "detail": detail or code}},
    )


def create_app() -> FastAPI:
    app = FastAPI(title="stone-picking sessions")
    # the playground page may be opened straight from disk; local tool, no
    # credentials, so any origin may talk to it
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, SessionEntry] = {}
    store_lock = threading.Lock()

    def entry_for(session_id: str) -> SessionEntry | None:
        with store_lock:
            return sessions.get(session_id)

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSession):
        seat = {1: game.PLAYER1, 2: game.PLAYER2}.get(body.human_seat,
                                                      body.human_seat)
        if seat not in (None, game.PLAYER1, game.PLAYER2):
            return _error(409, "bad_seat", f"unknown seat {body.human_seat!r}")
        roles = Roles(
            player1=game.HUMAN if seat == game.PLAYER1 else game.ENGINE,
            player2=game.HUMAN if seat == game.PLAYER2 else game.ENGINE,
        )
        instance = None
        if body.instance is not None:
            try:
                instance = load_instance(body.instance)
            except SerializationError as err:
                return _error(409, "bad_instance", str(err))
            if not isinstance(instance,
                              (LongChoiceInstance, ConstrainedLongChoiceInstance)):
                return _error(409, "bad_instance",
                              "only long-choice instances drive Player 2")
            if instance.n != body.n:
                return _error(409, "bad_width",
                              f"instance width {instance.n} does not match n={body.n}")
        try:
            state = game.new_game(body.n, roles)
        except GameError as err:
            return _error(409, err.code, str(err))
        session_id = uuid.uuid4().hex
        with store_lock:
            sessions[session_id] = SessionEntry(state, instance)
        return {"id": session_id, "state": state_payload(state)}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        entry = entry_for(session_id)
        if entry is None:
            return _error(404, "unknown_session", session_id)
        with entry.lock:
            return {
                "state": state_payload(entry.state),
                "legal_moves": legal_moves(entry.state),
            }

    @app.post("/api/sessions/{session_id}/pick")
    def post_pick(session_id: str, body: PickBody):
        entry = entry_for(session_id)
        if entry is None:
            return _error(404, "unknown_session", session_id)
        with entry.lock:
            if entry.state.roles.player1 != game.HUMAN:
                return _error(409, "engine_seat",
                              "Player 1 is the engine; use engine-step")
            try:
                entry.state = game.apply_pick(entry.state, body.stone)
            except GameError as err:
                return _error(409, err.code, str(err))
            return {"state": state_payload(entry.state)}

    @app.post("/api/sessions/{session_id}/partition")
    def post_partition(session_id: str, body: PartitionBody):
        entry = entry_for(session_id)
        if entry is None:
            return _error(404, "unknown_session", session_id)
        with entry.lock:
            if entry.state.roles.player2 != game.HUMAN:
                return _error(409, "engine_seat",
                              "Player 2 is the engine; use engine-step")
            try:
                entry.state = game.apply_partition(entry.state, body.group0)
            except GameError as err:
                return _error(409, err.code, str(err))
            return {"state": state_payload(entry.state)}

    @app.post("/api/sessions/{session_id}/engine-step")
    def post_engine_step(session_id: str):
        entry = entry_for(session_id)
        if entry is None:
            return _error(404, "unknown_session", session_id)
        with entry.lock:
            state = entry.state
            seat = state.seat_to_move()
            if seat is None:
                return _error(409, "game_over", "no moves left")
            seated = getattr(state.roles, seat)
            if seated != game.ENGINE:
                return _error(409, "human_seat",
                              f"{seat} is human; send the move directly")
            try:
                if seat == game.PLAYER1:
                    forced = getattr(entry.instance, "a0", None)
                    stone = forced if (forced is not None and not state.picks) \
                        else game.engine_pick(state)
                    entry.state = game.apply_pick(state, stone)
                    move = {"type": "pick", "stone": stone}
                else:
                    if entry.instance is not None:
                        group0 = game.partition_from_instance(state, entry.instance)
                    else:
                        group0 = game.balanced_partition(state)
                    entry.state = game.apply_partition(state, group0)
                    move = {"type": "partition", "group0": list(group0)}
            except GameError as err:
                return _error(409, err.code, str(err))
            return {"state": state_payload(entry.state), "move": move}

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        with store_lock:
            entry = sessions.pop(session_id, None)
        if entry is None:
            return _error(404, "unknown_session", session_id)
        return Response(status_code=204)

    return app
