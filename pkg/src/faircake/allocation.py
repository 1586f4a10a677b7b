"""Resolve a partition into a proportional assignment for every possible
first pick, verify it exactly, and certify it against independent oracles.

The assignment recursion mirrors the structure that makes the partition
work: whenever the picked piece removes a subtree's worth of cake from an
agent who was promised it (the even-branch cutter, or the odd-branch
median), that agent inherits first-pick rights over the opposite part and
chooses an own-measure-maximal piece there, discovered through explicit
eval queries so the query accounting stays honest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError, ScaleGuardError, StructuralError
from .measures import (
    Interval,
    Valuation,
    eval_measure,
    format_rational,
    parse_rational,
)
from .rw import Eval, Program, Transcript, dispatch, run_program
from .protocol import EvenNode, Leaf1, PartitionTree, pieces_of


@dataclass(frozen=True)
class Allocation:
    """For one first pick, which remaining piece each queried agent gets.

    `assignment` maps agent id -> 1-based piece index and is a bijection
    onto all piece indices except `secret_choice`.
    """

    secret_choice: int
    assignment: dict[int, int]


def _piece_count(tree: PartitionTree) -> int:
    if isinstance(tree, Leaf1):
        return 2
    if isinstance(tree, EvenNode):
        return 1 + _piece_count(tree.child)
    return _piece_count(tree.left) + _piece_count(tree.right)


def _argmax_piece(
    agent: int, pieces: list[Interval], offset: int
) -> Program:
    """Eval each piece for `agent`; return the global index of the largest
    (lowest index wins ties)."""
    best_index = offset
    best_mass: Fraction | None = None
    for i, piece in enumerate(pieces):
        mass = yield Eval(agent, piece)
        if best_mass is None or mass > best_mass:
            best_mass = mass
            best_index = offset + i
    return best_index


def assign_program(
    tree: PartitionTree, chosen: int, offset: int = 1
) -> Program:
    """Assignment recursion; yields eval queries, returns agent -> index."""
    if isinstance(tree, Leaf1):
        # the lone agent takes whichever of its two pieces is left
        return {tree.agent: offset + 1 if chosen == offset else offset}

    if isinstance(tree, EvenNode):
        if chosen == offset:
            # left piece is gone: the cutter picks first in the child
            child_pieces = pieces_of(tree.child)
            pick = yield from _argmax_piece(tree.cutter, child_pieces, offset + 1)
            result = yield from assign_program(tree.child, pick, offset + 1)
            result[tree.cutter] = pick
        else:
            result = yield from assign_program(tree.child, chosen, offset + 1)
            result[tree.cutter] = offset
        return result

    left_count = _piece_count(tree.left)
    right_offset = offset + left_count
    if chosen < right_offset:
        # pick came from the left: the median picks first on the right
        right_pieces = pieces_of(tree.right)
        pick = yield from _argmax_piece(tree.median_agent, right_pieces, right_offset)
        left = yield from assign_program(tree.left, chosen, offset)
        right = yield from assign_program(tree.right, pick, right_offset)
    else:
        left_pieces = pieces_of(tree.left)
        pick = yield from _argmax_piece(tree.median_agent, left_pieces, offset)
        left = yield from assign_program(tree.left, pick, offset)
        right = yield from assign_program(tree.right, chosen, right_offset)
    result = dict(left)
    result.update(right)
    result[tree.median_agent] = pick
    return result


def assign_given_choice(
    tree: PartitionTree, chosen: int, endpoints, transcript: Transcript
) -> Allocation:
    """Resolve the assignment after the non-queried participant picks
    piece `chosen` (1-based)."""
    total = _piece_count(tree)
    if not (1 <= chosen <= total):
        raise DomainError(f"chosen piece {chosen} outside 1..{total}")
    assignment = run_program(assign_program(tree, chosen), endpoints, transcript)
    assert isinstance(assignment, dict)
    return Allocation(chosen, assignment)


def allocation_table(
    tree: PartitionTree, endpoints, transcript: Transcript
) -> dict[int, Allocation]:
    """One Allocation per possible first pick.

    Identical eval queries recur across picks (the same pseudo-secret
    agent scans the same subtree), so answers are cached and each unique
    query hits the transcript once. This is what keeps the table's eval
    count within (pieces) * (tree depth).
    """
    cache: dict[tuple[int, Interval], Fraction] = {}
    table: dict[int, Allocation] = {}
    for chosen in range(1, _piece_count(tree) + 1):
        program = assign_program(tree, chosen)
        try:
            query = next(program)
            while True:
                assert isinstance(query, Eval)
                key = (query.agent, query.interval)
                if key in cache:
                    value = cache[key]
                else:
                    value = dispatch(query, endpoints, transcript).value
                    cache[key] = value
                query = program.send(value)
        except StopIteration as stop:
            table[chosen] = Allocation(chosen, stop.value)
    return table


@dataclass(frozen=True)
class ReportRow:
    agent: int
    piece: int
    mass: Fraction
    threshold: Fraction
    ok: bool


@dataclass(frozen=True)
class ProportionalityReport:
    choice: int
    rows: tuple[ReportRow, ...]
    verdict: bool


def verify_proportional(
    pieces: list[Interval],
    alloc: Allocation,
    valuations: dict[int, Valuation],
    denom: int,
) -> ProportionalityReport:
    """Exact per-agent check: received mass >= own total / denom.

    Structural problems (not a bijection onto the non-chosen pieces, or an
    agent set mismatch) raise before anything is measured.
    """
    expected_targets = set(range(1, len(pieces) + 1)) - {alloc.secret_choice}
    got_targets = list(alloc.assignment.values())
    if set(alloc.assignment.keys()) != set(valuations.keys()):
        raise StructuralError(
            f"allocation covers agents {sorted(alloc.assignment)} "
            f"but valuations cover {sorted(valuations)}"
        )
    if len(set(got_targets)) != len(got_targets) or set(got_targets) != expected_targets:
        raise StructuralError(
            f"assignment {alloc.assignment} is not a bijection onto "
            f"{sorted(expected_targets)}"
        )
    span = Interval(pieces[0].lo, pieces[-1].hi)
    rows = []
    for agent in sorted(alloc.assignment):
        v = valuations[agent]
        piece_index = alloc.assignment[agent]
        mass = eval_measure(v, pieces[piece_index - 1])
        threshold = eval_measure(v, span) / denom
        rows.append(ReportRow(agent, piece_index, mass, threshold, mass >= threshold))
    return ProportionalityReport(alloc.secret_choice, tuple(rows), all(r.ok for r in rows))


def secret_best_piece(pieces: list[Interval], secret_valuation: Valuation) -> int:
    """Index (1-based) of the piece the non-queried participant values
    most; lowest index on ties. Pigeonhole guarantees its mass is at least
    1/(number of pieces) for any probability measure."""
    best_index = 1
    best_mass = eval_measure(secret_valuation, pieces[0])
    for i, piece in enumerate(pieces[1:], start=2):
        mass = eval_measure(secret_valuation, piece)
        if mass > best_mass:
            best_mass = mass
            best_index = i
    return best_index


def _acceptability(
    pieces: list[Interval], valuations: dict[int, Valuation], denom: int
) -> tuple[list[int], dict[int, list[bool]]]:
    """Per agent, which pieces meet the 1/denom threshold."""
    span = Interval(pieces[0].lo, pieces[-1].hi)
    agents = sorted(valuations)
    ok: dict[int, list[bool]] = {}
    for agent in agents:
        v = valuations[agent]
        threshold = eval_measure(v, span) / denom
        ok[agent] = [eval_measure(v, piece) >= threshold for piece in pieces]
    return agents, ok


def enumerate_acceptable_matchings(
    pieces: list[Interval],
    valuations: dict[int, Valuation],
    chosen: int,
    denom: int,
) -> list[dict[int, int]]:
    """Every bijection from agents onto the non-chosen pieces in which all
    agents meet the threshold; exhaustive backtracking, guarded to n <= 10.
    """
    agents = sorted(valuations)
    n = len(agents)
    if n > 10:
        raise ScaleGuardError(f"exhaustive matching enumeration refused for n={n} > 10")
    _, ok = _acceptability(pieces, valuations, denom)
    available = [i for i in range(1, len(pieces) + 1) if i != chosen]

    results: list[dict[int, int]] = []

    def extend(k: int, used: set[int], partial: dict[int, int]) -> None:
        if k == n:
            results.append(dict(partial))
            return
        agent = agents[k]
        for piece in available:
            if piece not in used and ok[agent][piece - 1]:
                used.add(piece)
                partial[agent] = piece
                extend(k + 1, used, partial)
                used.discard(piece)
                del partial[agent]

    extend(0, set(), {})
    return results


def max_matching_allocation(
    pieces: list[Interval],
    valuations: dict[int, Valuation],
    chosen: int,
    denom: int,
) -> dict[int, int] | None:
    """Augmenting-path maximum matching over the acceptability graph;
    returns a full assignment or None when no acceptable bijection exists.

    Independent of the exhaustive oracle so the two can cross-check.
    """
    agents = sorted(valuations)
    _, ok = _acceptability(pieces, valuations, denom)
    available = [i for i in range(1, len(pieces) + 1) if i != chosen]
    owner: dict[int, int] = {}  # piece -> agent

    def try_assign(agent: int, seen: set[int]) -> bool:
        for piece in available:
            if piece in seen or not ok[agent][piece - 1]:
                continue
            seen.add(piece)
            if piece not in owner or try_assign(owner[piece], seen):
                owner[piece] = agent
                return True
        return False

    for agent in agents:
        if not try_assign(agent, set()):
            return None
    return {agent: piece for piece, agent in owner.items()}


def allocation_csv(reports: list[ProportionalityReport]) -> str:
    """Render reports as `choice,agent,piece,mass,threshold,ok` rows."""
    lines = ["choice,agent,piece,mass,threshold,ok"]
    for report in reports:
        for row in report.rows:
            lines.append(
                f"{report.choice},{row.agent},{row.piece},"
                f"{format_rational(row.mass)},{format_rational(row.threshold)},"
                f"{'true' if row.ok else 'false'}"
            )
    return "\n".join(lines) + "\n"


def parse_allocation_csv(text: str) -> dict[int, dict[int, int]]:
    """Read assignments back out of an exported table: choice -> agent -> piece."""
    lines = [line for line in text.strip().splitlines() if line]
    if not lines or lines[0] != "choice,agent,piece,mass,threshold,ok":
        raise DomainError("allocation file missing expected header")
    out: dict[int, dict[int, int]] = {}
    for line in lines[1:]:
        fields = line.split(",")
        if len(fields) != 6:
            raise DomainError(f"malformed allocation row: {line!r}")
        choice, agent, piece = int(fields[0]), int(fields[1]), int(fields[2])
        parse_rational(fields[3]), parse_rational(fields[4])  # must round-trip
        out.setdefault(choice, {})[agent] = piece
    return out


def acceptable_iter(
    pieces: list[Interval],
    valuations: dict[int, Valuation],
    chosen: int,
    denom: int,
) -> Iterator[dict[int, int]]:
    """Permutation-based second exhaustive route, used only in tests to
    sanity-check the backtracking enumerator on small instances."""
    agents = sorted(valuations)
    _, ok = _acceptability(pieces, valuations, denom)
    available = [i for i in range(1, len(pieces) + 1) if i != chosen]
    for perm in itertools.permutations(available, len(agents)):
        if all(ok[a][p - 1] for a, p in zip(agents, perm)):
            yield dict(zip(agents, perm))
