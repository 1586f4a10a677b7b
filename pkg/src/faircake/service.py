"""Live session service: run the partition protocol with human agents.

One session = one cake run. Guests poll for their pending query and post
answers; when the partition is done the non-queried participant picks a
piece; assignment-phase eval questions are then either routed back to the
guests (live mode) or answered from valuations stored at creation
(scripted mode). The secret participant has a token but no agent id, so
no query can even be addressed to them.

Sessions persist as append-only event logs (one JSONL file per session)
that replay into identical state; polling is the only required transport.
"""

from __future__ import annotations

import json
import os
import secrets as secrets_module
import threading
import uuid
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .allocation import (
    Allocation,
    allocation_table,
    assign_program,
    verify_proportional,
)
from .errors import FairCakeError
from .measures import UNIT, Valuation, format_rational, load_valuation
from .protocol import PartitionTree, dc_secret_program, pieces_of
from .rw import (
    Answer,
    Cut,
    Query,
    Stepper,
    Transcript,
    simulated_endpoints,
)

PHASE_COLLECTING = "collecting-answers"
PHASE_CHOOSING = "awaiting-secret-choice"
PHASE_COMPLETE = "complete"


def parse_human_value(raw: Any) -> Fraction:
    """Exact rational from a human answer: 'p/q', decimal text, or int."""
    if isinstance(raw, bool) or isinstance(raw, float):
        raise HTTPException(
            status_code=422,
            detail="send numbers as strings ('7/12', '0.5') or integers; "
            "binary floats are not exact",
        )
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise HTTPException(status_code=422, detail=f"not a rational value: {raw!r}")


@dataclass
class Guest:
    agent: int
    name: str
    token: str


@dataclass
class Session:
    id: str
    guests: list[Guest]
    secret_name: str
    secret_token: str
    valuations: dict[int, Valuation] | None
    transcript: Transcript
    stepper: Stepper | None
    phase: str = PHASE_COLLECTING
    stage: str = "partition"  # partition | assignment
    tree: PartitionTree | None = None
    pieces: list | None = None
    choice: int | None = None
    allocation: Allocation | None = None
    table: dict[int, Allocation] | None = None
    reports: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def agent_ids(self) -> list[int]:
        return [g.agent for g in self.guests]

    def resolve_agent(self, agent: int | None, token: str | None) -> int | None:
        """Map (agent id | token) to an agent id; None for the secret
        participant's token; 404-equivalent for garbage."""
        if token is not None:
            if token == self.secret_token:
                return None
            for g in self.guests:
                if g.token == token:
                    return g.agent
            raise HTTPException(status_code=404, detail="unknown token")
        if agent is not None:
            if agent in self.agent_ids:
                return agent
            raise HTTPException(status_code=404, detail=f"unknown agent {agent}")
        raise HTTPException(status_code=422, detail="pass ?agent=<id> or ?token=<token>")


class SessionStore:
    """In-memory session registry with optional on-disk event logs."""

    def __init__(self, log_dir: Path | None = None):
        self.sessions: dict[str, Session] = {}
        self.log_dir = Path(log_dir) if log_dir is not None else None
        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            self.replay_all()

    # -- event log ---------------------------------------------------------

    def _log(self, session_id: str, event: dict) -> None:
        if self.log_dir is None:
            return
        path = self.log_dir / f"{session_id}.jsonl"
        with path.open("a") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def replay_all(self) -> None:
        assert self.log_dir is not None
        for path in sorted(self.log_dir.glob("*.jsonl")):
            events = [json.loads(line) for line in path.read_text().splitlines() if line]
            if not events:
                continue
            self._replay(events)

    def _replay(self, events: list[dict]) -> None:
        created = events[0]
        assert created["event"] == "created"
        session = self._build_session(
            session_id=created["id"],
            guest_names=created["guests"],
            secret_name=created["secret"],
            valuations_doc=created.get("valuations"),
            tokens=created["tokens"],
        )
        self.sessions[session.id] = session
        for event in events[1:]:
            if event["event"] == "answered":
                apply_answer(session, event["agent"], Fraction(event["value"]))
            elif event["event"] == "chosen":
                apply_choice(session, event["piece"])

    # -- construction ------------------------------------------------------

    def _build_session(
        self,
        session_id: str,
        guest_names: list[str],
        secret_name: str,
        valuations_doc: list | None,
        tokens: dict[str, str],
    ) -> Session:
        guests = [
            Guest(agent=i + 1, name=name, token=tokens[str(i + 1)])
            for i, name in enumerate(guest_names)
        ]
        valuations = None
        if valuations_doc is not None:
            valuations = {
                i + 1: load_valuation(doc) for i, doc in enumerate(valuations_doc)
            }
        agent_ids = tuple(g.agent for g in guests)
        session = Session(
            id=session_id,
            guests=guests,
            secret_name=secret_name,
            secret_token=tokens["secret"],
            valuations=valuations,
            transcript=Transcript(agent_ids),
            stepper=Stepper(dc_secret_program(UNIT, agent_ids)),
        )
        _advance_if_finished(session)
        return session

    def create(
        self,
        guest_names: list[str],
        secret_name: str,
        valuations_doc: list | None,
    ) -> Session:
        if not guest_names:
            raise HTTPException(status_code=422, detail="need at least 1 guest")
        if valuations_doc is not None and len(valuations_doc) != len(guest_names):
            raise HTTPException(
                status_code=422,
                detail=f"got {len(valuations_doc)} valuations for {len(guest_names)} guests",
            )
        session_id = uuid.uuid4().hex[:12]
        tokens = {str(i + 1): secrets_module.token_hex(8) for i in range(len(guest_names))}
        tokens["secret"] = secrets_module.token_hex(8)
        try:
            session = self._build_session(
                session_id, guest_names, secret_name, valuations_doc, tokens
            )
        except FairCakeError as e:
            raise HTTPException(status_code=422, detail=str(e))
        self.sessions[session_id] = session
        self._log(
            session_id,
            {
                "event": "created",
                "id": session_id,
                "guests": guest_names,
                "secret": secret_name,
                "valuations": valuations_doc,
                "tokens": tokens,
            },
        )
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session


# -- state transitions (pure of HTTP; reused by replay) ---------------------


def _advance_if_finished(session: Session) -> None:
    """Move phases forward when the running stepper has completed."""
    stepper = session.stepper
    if stepper is None or not stepper.finished:
        return
    if session.stage == "partition":
        tree = stepper.result
        session.tree = tree
        session.pieces = pieces_of(tree)
        session.stepper = None
        session.phase = PHASE_CHOOSING
    else:
        assignment = stepper.result
        session.allocation = Allocation(session.choice, assignment)
        session.stepper = None
        session.phase = PHASE_COMPLETE


def apply_answer(session: Session, agent: int, value: Fraction) -> None:
    stepper = session.stepper
    if session.phase != PHASE_COLLECTING or stepper is None:
        raise HTTPException(status_code=409, detail=f"phase is {session.phase}; not accepting answers")
    query = stepper.outstanding
    if query is None or query.agent != agent:
        raise HTTPException(
            status_code=409,
            detail=f"no outstanding query for agent {agent}",
        )
    try:
        answer = Answer(query, value)
    except FairCakeError as e:
        detail = {"error": str(e)}
        if isinstance(query, Cut):
            detail["bounds"] = {
                "lo": format_rational(query.piece.lo),
                "hi": format_rational(query.piece.hi),
            }
        raise HTTPException(status_code=422, detail=detail)
    session.transcript.append(answer)
    stepper.step(answer)
    _advance_if_finished(session)


def apply_choice(session: Session, piece: int) -> None:
    if session.phase != PHASE_CHOOSING:
        raise HTTPException(status_code=409, detail=f"phase is {session.phase}; not accepting a choice")
    assert session.pieces is not None and session.tree is not None
    if not (1 <= piece <= len(session.pieces)):
        raise HTTPException(
            status_code=422,
            detail=f"piece must be in 1..{len(session.pieces)}, got {piece}",
        )
    session.choice = piece
    if session.valuations is not None:
        # scripted: every assignment eval is answered from the stored
        # measures, the full table is built, and each entry is verified
        endpoints = simulated_endpoints(session.valuations)
        table = allocation_table(session.tree, endpoints, session.transcript)
        denom = len(session.pieces)
        reports = {
            j: verify_proportional(session.pieces, alloc, session.valuations, denom)
            for j, alloc in table.items()
        }
        assert all(r.verdict for r in reports.values())
        session.table = table
        session.reports = reports
        session.allocation = table[piece]
        session.phase = PHASE_COMPLETE
    else:
        # live: assignment evals go back to the guests as pending queries
        session.stage = "assignment"
        session.stepper = Stepper(assign_program(session.tree, piece))
        if session.stepper.finished:
            _advance_if_finished(session)
        else:
            session.phase = PHASE_COLLECTING


# -- serialization -----------------------------------------------------------


def query_payload(query: Query) -> dict:
    return query.to_json()


def session_public_state(session: Session) -> dict:
    stepper = session.stepper
    outstanding = stepper.outstanding if stepper is not None else None
    doc = {
        "id": session.id,
        "phase": session.phase,
        "stage": session.stage,
        "scripted": session.valuations is not None,
        "guests": [{"agent": g.agent, "name": g.name} for g in session.guests],
        "secret_name": session.secret_name,
        "piece_count": len(session.pieces) if session.pieces is not None else None,
        "pieces": [p.to_json() for p in session.pieces] if session.pieces is not None else None,
        "choice": session.choice,
        "awaiting_agent": outstanding.agent if outstanding is not None else None,
        "transcript": session.transcript.export_lines()
        if session.phase == PHASE_COMPLETE
        else None,
    }
    return doc


def result_payload(session: Session) -> dict:
    assert session.pieces is not None and session.allocation is not None
    denom = len(session.pieces)
    doc: dict = {
        "pieces": [p.to_json() for p in session.pieces],
        "choice": session.allocation.secret_choice,
        "assignment": {str(a): p for a, p in sorted(session.allocation.assignment.items())},
        "threshold": format_rational(Fraction(1, denom)),
        "report": None,
        "table": None,
    }
    if session.reports is not None:
        report = session.reports[session.allocation.secret_choice]
        doc["report"] = {
            "verdict": report.verdict,
            "rows": [
                {
                    "agent": r.agent,
                    "piece": r.piece,
                    "mass": format_rational(r.mass),
                    "threshold": format_rational(r.threshold),
                    "ok": r.ok,
                }
                for r in report.rows
            ],
        }
    if session.table is not None:
        doc["table"] = {
            str(j): {str(a): p for a, p in sorted(alloc.assignment.items())}
            for j, alloc in sorted(session.table.items())
        }
    return doc


# -- HTTP layer --------------------------------------------------------------


class CreateSessionBody(BaseModel):
    guests: list[str]
    secret: str = "secret"
    valuations: list[dict] | None = None


class AnswerBody(BaseModel):
    agent: int | None = None
    token: str | None = None
    value: Any


class ChoiceBody(BaseModel):
    piece: int
    token: str | None = None


def create_app(log_dir: Path | str | None = None) -> FastAPI:
    store = SessionStore(Path(log_dir) if log_dir is not None else None)
    app = FastAPI(title="faircake session service")
    app.state.store = store

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = store.create(body.guests, body.secret, body.valuations)
        return {
            "id": session.id,
            "guests": [
                {"agent": g.agent, "name": g.name, "token": g.token}
                for g in session.guests
            ],
            "secret": {"name": session.secret_name, "token": session.secret_token},
            "phase": session.phase,
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_public_state(store.get(session_id))

    @app.get("/sessions/{session_id}/queries/next")
    def next_query(session_id: str, agent: int | None = None, token: str | None = None):
        session = store.get(session_id)
        with session.lock:
            resolved = session.resolve_agent(agent, token)
            if resolved is None:  # the secret participant never has queries
                return {"query": None, "phase": session.phase}
            stepper = session.stepper
            outstanding = stepper.outstanding if stepper is not None else None
            if outstanding is not None and outstanding.agent == resolved:
                return {"query": query_payload(outstanding), "phase": session.phase}
            return {"query": None, "phase": session.phase}

    @app.post("/sessions/{session_id}/answers")
    def submit_answer(session_id: str, body: AnswerBody):
        session = store.get(session_id)
        with session.lock:
            resolved = session.resolve_agent(body.agent, body.token)
            if resolved is None:
                raise HTTPException(
                    status_code=409, detail="the secret participant answers no queries"
                )
            value = parse_human_value(body.value)
            apply_answer(session, resolved, value)
            store._log(session.id, {"event": "answered", "agent": resolved,
                                    "value": format_rational(value)})
            return {
                "ok": True,
                "phase": session.phase,
                "transcript_length": len(session.transcript),
            }

    @app.post("/sessions/{session_id}/choice")
    def submit_choice(session_id: str, body: ChoiceBody):
        session = store.get(session_id)
        with session.lock:
            if body.token is not None and body.token != session.secret_token:
                raise HTTPException(status_code=404, detail="unknown token")
            apply_choice(session, body.piece)
            store._log(session.id, {"event": "chosen", "piece": body.piece})
            payload = {"ok": True, "phase": session.phase, "choice": body.piece}
            if session.phase == PHASE_COMPLETE:
                payload["result"] = result_payload(session)
            return payload

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if session.phase != PHASE_COMPLETE:
                raise HTTPException(
                    status_code=409, detail=f"phase is {session.phase}; no result yet"
                )
            return result_payload(session)

    # serve the built browser console when present (FAIRCAKE_CONSOLE_DIR
    # or ../frontend/dist relative to a source checkout)
    console_dir = os.environ.get("FAIRCAKE_CONSOLE_DIR")
    candidates = [Path(console_dir)] if console_dir else [
        Path(__file__).resolve().parents[2] / "frontend" / "dist"
    ]
    for candidate in candidates:
        if candidate.is_dir():
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=candidate, html=True), name="console")
            break

    return app


app = create_app(os.environ.get("FAIRCAKE_SESSION_DIR"))
