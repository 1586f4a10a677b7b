"""Eval/cut query layer: typed queries, transcripts, and a resumable stepper.

The interaction model is sequential and adaptive: a mediator issues one
query at a time and may base the next query on earlier answers. Protocol
code is written once, as a generator that yields `Query` objects and
receives exact rational answers; the same generator is driven either to
completion against simulated endpoints (`run_program`) or query-by-query
by a `Stepper` (live sessions). Both paths produce bit-identical results.

Secrecy is structural: a `Transcript` is created with a fixed roster of
queryable agent ids and rejects entries for anyone else, so a run's record
cannot even represent a query to the non-queried participant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Generator, Iterable, Protocol, Union

from .errors import ProtocolViolation, RoutingError, StepperError
from .measures import (
    Interval,
    Valuation,
    cut_point,
    eval_measure,
    format_rational,
)


@dataclass(frozen=True)
class Eval:
    """Ask `agent` for the exact mass of `interval` under their measure."""

    agent: int
    interval: Interval

    def __post_init__(self) -> None:
        if self.agent < 1:
            raise RoutingError(f"invalid agent id {self.agent}")

    def to_json(self) -> dict:
        return {"agent": self.agent, "kind": "eval", "interval": self.interval.to_json()}


@dataclass(frozen=True)
class Cut:
    """Ask `agent` for the leftmost y in `piece` such that [piece.lo, y]
    is worth `fraction` of their value of the whole `piece`.

    The target is relative: the agent solves the absolute equation against
    their own measure, so the mediator never needs to know the agent's
    value of the current subcake.
    """

    agent: int
    piece: Interval
    fraction: Fraction

    def __post_init__(self) -> None:
        if self.agent < 1:
            raise RoutingError(f"invalid agent id {self.agent}")
        if not (0 <= self.fraction <= 1):
            raise ProtocolViolation(self.agent, f"cut fraction {self.fraction} outside [0,1]")

    def to_json(self) -> dict:
        return {
            "agent": self.agent,
            "kind": "cut",
            "piece": self.piece.to_json(),
            "fraction": format_rational(self.fraction),
        }


Query = Union[Eval, Cut]


def query_from_json(data: dict) -> Query:
    kind = data.get("kind")
    if kind == "eval":
        return Eval(int(data["agent"]), Interval.from_json(data["interval"]))
    if kind == "cut":
        from .measures import parse_rational

        return Cut(
            int(data["agent"]),
            Interval.from_json(data["piece"]),
            parse_rational(data["fraction"]),
        )
    raise RoutingError(f"unknown query kind {kind!r}")


def validate_answer(query: Query, value: Fraction) -> None:
    """Reject answers outside the range the query permits."""
    if isinstance(query, Cut):
        if not (query.piece.lo <= value <= query.piece.hi):
            raise ProtocolViolation(
                query.agent,
                f"cut answer {value} outside subcake "
                f"[{query.piece.lo}, {query.piece.hi}]",
            )
    else:
        if not (0 <= value <= 1):
            raise ProtocolViolation(
                query.agent, f"eval answer {value} outside [0,1]"
            )


@dataclass(frozen=True)
class Answer:
    query: Query
    value: Fraction

    def __post_init__(self) -> None:
        validate_answer(self.query, self.value)

    def export_line(self) -> str:
        q = self.query
        if isinstance(q, Cut):
            args = f"{format_rational(q.piece.lo)}..{format_rational(q.piece.hi)},{format_rational(q.fraction)}"
            kind = "cut"
        else:
            args = f"{format_rational(q.interval.lo)}..{format_rational(q.interval.hi)}"
            kind = "eval"
        return f"agent={q.agent} kind={kind} args={args} answer={format_rational(self.value)}"


class Transcript:
    """Append-only record of answered queries for one run.

    The roster fixes which agent ids may ever appear; counters are kept
    per (agent, kind) and always equal a recount of the entries.
    """

    def __init__(self, agents: Iterable[int]):
        self.roster: frozenset[int] = frozenset(agents)
        self.entries: list[Answer] = []
        self.counters: dict[tuple[int, str], int] = {}

    def append(self, answer: Answer) -> None:
        agent = answer.query.agent
        if agent not in self.roster:
            raise RoutingError(
                f"agent {agent} is not in this run's roster {sorted(self.roster)}"
            )
        self.entries.append(answer)
        kind = "cut" if isinstance(answer.query, Cut) else "eval"
        self.counters[(agent, kind)] = self.counters.get((agent, kind), 0) + 1

    def __len__(self) -> int:
        return len(self.entries)

    def count(self, kind: str | None = None) -> int:
        """Total queries, optionally restricted to 'cut' or 'eval'."""
        if kind is None:
            return len(self.entries)
        return sum(v for (_, k), v in self.counters.items() if k == kind)

    def export_lines(self) -> list[str]:
        return [a.export_line() for a in self.entries]


def queries_to(t: Transcript, agent: int) -> int:
    """How many transcript entries are addressed to `agent`."""
    return sum(1 for a in t.entries if a.query.agent == agent)


class AgentEndpoint(Protocol):
    """Anything that can answer a query: a simulated measure or a human."""

    def answer(self, query: Query) -> Fraction: ...


class SimulatedAgent:
    """Endpoint backed by a Valuation; pure, shareable, and exact."""

    def __init__(self, valuation: Valuation):
        self.valuation = valuation

    def answer(self, query: Query) -> Fraction:
        if isinstance(query, Eval):
            return eval_measure(self.valuation, query.interval)
        subcake_mass = eval_measure(self.valuation, query.piece)
        return cut_point(self.valuation, query.piece.lo, query.fraction * subcake_mass)


def simulated_endpoints(valuations: dict[int, Valuation]) -> dict[int, SimulatedAgent]:
    return {agent: SimulatedAgent(v) for agent, v in valuations.items()}


def dispatch(
    query: Query, endpoints: dict[int, AgentEndpoint], transcript: Transcript
) -> Answer:
    """Route one query to its endpoint, record the answer, return it."""
    endpoint = endpoints.get(query.agent)
    if endpoint is None:
        raise RoutingError(f"no endpoint for agent {query.agent}")
    value = endpoint.answer(query)
    answer = Answer(query, value)  # validates range, names the agent on failure
    transcript.append(answer)
    return answer


# A protocol program yields queries and receives exact answers.
Program = Generator[Query, Fraction, object]


@dataclass(frozen=True)
class AwaitingAnswer:
    query: Query


@dataclass(frozen=True)
class Finished:
    result: object


class Stepper:
    """Drives a protocol program one query at a time.

    Exactly one query is outstanding while running. Feeding an answer that
    does not match the outstanding query raises and leaves the state
    unchanged; so does feeding anything once finished.
    """

    def __init__(self, program: Program):
        self._program = program
        try:
            query = next(program)
        except StopIteration as stop:
            self.status: AwaitingAnswer | Finished = Finished(stop.value)
        else:
            self.status = AwaitingAnswer(query)

    @property
    def finished(self) -> bool:
        return isinstance(self.status, Finished)

    @property
    def outstanding(self) -> Query | None:
        return self.status.query if isinstance(self.status, AwaitingAnswer) else None

    @property
    def result(self) -> object:
        if not isinstance(self.status, Finished):
            raise StepperError("protocol still running")
        return self.status.result

    def step(self, answer: Answer) -> None:
        if isinstance(self.status, Finished):
            raise StepperError("protocol already finished; no answer expected")
        # identity fast path: answers built from the outstanding query
        # object skip the structural comparison
        if answer.query is not self.status.query and answer.query != self.status.query:
            raise StepperError(
                f"answer is for {answer.query}, but the outstanding query is {self.status.query}"
            )
        try:
            query = self._program.send(answer.value)
        except StopIteration as stop:
            self.status = Finished(stop.value)
        else:
            self.status = AwaitingAnswer(query)


def run_program(
    program: Program,
    endpoints: dict[int, AgentEndpoint],
    transcript: Transcript,
):
    """Run a protocol program to completion against endpoints.

    This is the single driving loop: the direct in-memory path is just a
    stepper fed from `dispatch`, which is why stepper-driven and direct
    runs cannot diverge.
    """
    stepper = Stepper(program)
    while not stepper.finished:
        query = stepper.outstanding
        assert query is not None
        stepper.step(dispatch(query, endpoints, transcript))
    return stepper.result
