"""HTTP/JSON surface over live combat sessions.

Sessions live in memory.  Each one is mutated under its own lock;
policy tables are immutable and shared.  Probabilities ride through
JSON as shortest round-trip decimals, so every value a client displays
is bit-identical to the solver's.
"""

import threading
from contextlib import contextmanager
from typing import Literal

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .engine import RoundOutcome
from .session import CombatantStats, CombatSession, IllegalTransition
from .solver import TableStore

SCHEMA_VERSION = 1
SERVICE_NAME = "ff-advisor"


class HeroIn(BaseModel):
    skill: int = Field(ge=1)
    stamina: int = Field(ge=1)
    luck: int = Field(ge=0, default=0)


class OpponentIn(BaseModel):
    skill: int = Field(ge=1)
    stamina: int = Field(ge=1)


class CreateSessionIn(BaseModel):
    hero: HeroIn
    opponent: OpponentIn


class RoundIn(BaseModel):
    outcome: Literal["win", "draw", "loss"]
    luck_used: bool = False
    luck_test_success: bool | None = None


def _state_payload(session: CombatSession) -> dict:
    state = session.state
    return {
        "schema_version": SCHEMA_VERSION,
        "session_id": session.session_id,
        "hero": {
            "skill": session.hero.skill,
            "stamina": session.hero.stamina,
            "luck": session.hero.luck,
        },
        "opponent": {
            "skill": session.opponent.skill,
            "stamina": session.opponent.stamina,
        },
        "dk": state.dk,
        "round_count": len(session.rounds),
        "state": {
            "s_h": state.s_h,
            "s_o": state.s_o,
            "l": state.l,
            "ongoing": state.ongoing,
            "hero_won": state.hero_won,
            "hero_lost": state.hero_lost,
        },
    }


def _advice_payload(session: CombatSession) -> dict:
    advice = session.advice()
    return {
        "use_luck_on_win": advice.use_luck_on_win,
        "use_luck_on_loss": advice.use_luck_on_loss,
        "strategy_code": advice.strategy_code,
        "v_p": advice.v_p,
        "v_p_no_luck": advice.v_p_no_luck,
        "what_ifs": [
            {"outcome": w.outcome.value, "use_luck": w.use_luck, "v_p": w.v_p}
            for w in advice.what_ifs
        ],
    }


def _session_response(session: CombatSession) -> dict:
    payload = _state_payload(session)
    payload["advice"] = _advice_payload(session)
    return payload


def create_app(store: TableStore | None = None) -> FastAPI:
    app = FastAPI(title=SERVICE_NAME)
    # Single-user local tool; the browser companion is served as a
    # static page, so cross-origin requests are expected.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store if store is not None else TableStore()
    sessions: dict[str, tuple[CombatSession, threading.Lock]] = {}
    registry_lock = threading.Lock()

    @contextmanager
    def locked_session(session_id: str):
        with registry_lock:
            entry = sessions.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session, lock = entry
        with lock:
            yield session

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(IllegalTransition)
    async def illegal_transition(request: Request, exc: IllegalTransition):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/")
    def service_info():
        return {"schema_version": SCHEMA_VERSION, "service": SERVICE_NAME}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionIn):
        session = CombatSession.start(
            hero=CombatantStats(
                skill=body.hero.skill,
                stamina=body.hero.stamina,
                luck=body.hero.luck,
            ),
            opponent=CombatantStats(
                skill=body.opponent.skill, stamina=body.opponent.stamina
            ),
            store=app.state.store,
        )
        with registry_lock:
            sessions[session.session_id] = (session, threading.Lock())
        return _session_response(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        with locked_session(session_id) as session:
            return _session_response(session)

    @app.get("/sessions/{session_id}/advice")
    def get_advice(session_id: str):
        with locked_session(session_id) as session:
            return _session_response(session)

    @app.post("/sessions/{session_id}/rounds")
    def record_round(session_id: str, body: RoundIn):
        with locked_session(session_id) as session:
            session.record_round(
                RoundOutcome(body.outcome), body.luck_used, body.luck_test_success
            )
            return _session_response(session)

    @app.post("/sessions/{session_id}/undo")
    def undo_round(session_id: str):
        with locked_session(session_id) as session:
            session.undo()
            return _session_response(session)

    @app.get("/sessions/{session_id}/what-if")
    def what_if(
        session_id: str,
        outcome: Literal["win", "draw", "loss"],
        use_luck: bool = False,
    ):
        with locked_session(session_id) as session:
            v_p = session.what_if(RoundOutcome(outcome), use_luck)
            payload = _state_payload(session)
            payload["what_if"] = {
                "outcome": outcome,
                "use_luck": use_luck,
                "v_p": v_p,
            }
            return payload

    @app.get("/sessions/{session_id}/log")
    def export_log(session_id: str):
        with locked_session(session_id) as session:
            payload = _state_payload(session)
            payload["rounds"] = [
                {
                    "outcome": entry.outcome.value,
                    "luck_used": entry.luck_used,
                    "luck_test_success": entry.luck_test_success,
                }
                for entry in session.rounds
            ]
            return payload

    return app


def replay_log(log: dict, store: TableStore | None = None) -> CombatSession:
    """Rebuild a session from an exported log; the result must land on
    the same state the export reported."""
    session = CombatSession.start(
        hero=CombatantStats(**log["hero"]),
        opponent=CombatantStats(**log["opponent"]),
        store=store,
    )
    for entry in log["rounds"]:
        session.record_round(
            RoundOutcome(entry["outcome"]),
            entry["luck_used"],
            entry["luck_test_success"],
        )
    return session
