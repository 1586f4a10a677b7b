"""Divide-and-conquer partition protocols over eval/cut queries.

`dc_secret` partitions a cake among n queried agents into n+1 connected
pieces so that an extra, never-queried participant can take any piece
first and the rest can still be assigned proportionally (each queried
agent ends with at least 1/(n+1) of the whole cake by their own measure).
`even_paz` is the classic baseline without the extra participant: n agents,
n pieces, everyone gets queried.

Both are written as generator programs over the query layer in `rw`, so
they run identically against simulated measures and live humans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError
from .measures import Interval, format_rational, parse_rational
from .rw import Cut, Program, Transcript, run_program

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Leaf1:
    """Single agent halves the subcake: contributes 2 pieces."""

    cake: Interval
    agent: int
    cut: Fraction


@dataclass(frozen=True)
class EvenNode:
    """Even branch: the minimal cutter peels off the left piece, the
    remaining agents recurse on the rest."""

    cake: Interval
    cutter: int
    left_piece: Interval
    child: "PartitionTree"


@dataclass(frozen=True)
class OddNode:
    """Odd branch: the median cutter is withheld, the strictly-left and
    strictly-right groups recurse on either side of the median cut."""

    cake: Interval
    median_agent: int
    median_cut: Fraction
    left: "PartitionTree"
    right: "PartitionTree"


PartitionTree = Union[Leaf1, EvenNode, OddNode]


def dc_secret_program(cake: Interval, agents: tuple[int, ...]) -> Program:
    """The partition protocol as a resumable query program.

    Every cut target is a fraction of the agent's own value of the current
    subcake: 1/2 in the base and odd cases, 1/(n+1) in the even case. Only
    cut queries are issued here; the assignment phase owns all evals.
    """
    n = len(agents)
    if n == 0:
        raise DomainError("agent list is empty")
    if len(set(agents)) != n:
        raise DomainError(f"duplicate agent ids in {agents}")

    if n == 1:
        agent = agents[0]
        cut = yield Cut(agent, cake, HALF)
        return Leaf1(cake, agent, cut)

    if n % 2 == 1:
        cuts: list[tuple[Fraction, int]] = []
        for agent in agents:
            c = yield Cut(agent, cake, HALF)
            cuts.append((c, agent))
        cuts.sort()  # ties resolve by agent id
        mid = (n + 1) // 2 - 1  # median position, 0-based
        median_cut, median_agent = cuts[mid]
        left_agents = tuple(a for _, a in cuts[:mid])
        right_agents = tuple(a for _, a in cuts[mid + 1:])
        left = yield from dc_secret_program(
            Interval(cake.lo, median_cut), left_agents
        )
        right = yield from dc_secret_program(
            Interval(median_cut, cake.hi), right_agents
        )
        return OddNode(cake, median_agent, median_cut, left, right)

    share = Fraction(1, n + 1)
    cuts = []
    for agent in agents:
        c = yield Cut(agent, cake, share)
        cuts.append((c, agent))
    min_cut, cutter = min(cuts)  # ties resolve by agent id
    rest = tuple(a for a in agents if a != cutter)
    child = yield from dc_secret_program(Interval(min_cut, cake.hi), rest)
    return EvenNode(cake, cutter, Interval(cake.lo, min_cut), child)


def dc_secret(
    cake: Interval,
    agents: tuple[int, ...] | list[int],
    endpoints,
    transcript: Transcript,
) -> PartitionTree:
    """Run the partition protocol to completion against endpoints."""
    tree = run_program(dc_secret_program(cake, tuple(agents)), endpoints, transcript)
    assert isinstance(tree, (Leaf1, EvenNode, OddNode))
    return tree


def pieces_of(tree: PartitionTree) -> list[Interval]:
    """In-order flattening: contiguous pieces covering the tree's cake."""
    if isinstance(tree, Leaf1):
        return [
            Interval(tree.cake.lo, tree.cut),
            Interval(tree.cut, tree.cake.hi),
        ]
    if isinstance(tree, EvenNode):
        return [tree.left_piece] + pieces_of(tree.child)
    return pieces_of(tree.left) + pieces_of(tree.right)


def agents_of(tree: PartitionTree) -> list[int]:
    """Every queried agent, each appearing exactly once in the tree."""
    if isinstance(tree, Leaf1):
        return [tree.agent]
    if isinstance(tree, EvenNode):
        return [tree.cutter] + agents_of(tree.child)
    return agents_of(tree.left) + [tree.median_agent] + agents_of(tree.right)


def tree_depth(tree: PartitionTree) -> int:
    if isinstance(tree, Leaf1):
        return 1
    if isinstance(tree, EvenNode):
        return 1 + tree_depth(tree.child)
    return 1 + max(tree_depth(tree.left), tree_depth(tree.right))


def tree_to_json(tree: PartitionTree) -> dict:
    if isinstance(tree, Leaf1):
        return {
            "kind": "leaf",
            "cake": tree.cake.to_json(),
            "agent": tree.agent,
            "cut": format_rational(tree.cut),
        }
    if isinstance(tree, EvenNode):
        return {
            "kind": "even",
            "cake": tree.cake.to_json(),
            "cutter": tree.cutter,
            "left_piece": tree.left_piece.to_json(),
            "child": tree_to_json(tree.child),
        }
    return {
        "kind": "odd",
        "cake": tree.cake.to_json(),
        "median_agent": tree.median_agent,
        "median_cut": format_rational(tree.median_cut),
        "left": tree_to_json(tree.left),
        "right": tree_to_json(tree.right),
    }


def tree_from_json(data: dict) -> PartitionTree:
    kind = data.get("kind")
    if kind == "leaf":
        return Leaf1(
            Interval.from_json(data["cake"]),
            int(data["agent"]),
            parse_rational(data["cut"]),
        )
    if kind == "even":
        return EvenNode(
            Interval.from_json(data["cake"]),
            int(data["cutter"]),
            Interval.from_json(data["left_piece"]),
            tree_from_json(data["child"]),
        )
    if kind == "odd":
        return OddNode(
            Interval.from_json(data["cake"]),
            int(data["median_agent"]),
            parse_rational(data["median_cut"]),
            tree_from_json(data["left"]),
            tree_from_json(data["right"]),
        )
    raise DomainError(f"unknown tree node kind {kind!r}")


def predicted_cut_count(n: int) -> int:
    """Exact number of cut queries the partition protocol issues for n
    agents, independent of the valuations:

        C(1) = 1
        C(n even) = n + C(n-1)
        C(n odd)  = n + 2*C((n-1)/2)
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    counts = {1: 1}

    def c(k: int) -> int:
        if k in counts:
            return counts[k]
        if k % 2 == 0:
            counts[k] = k + c(k - 1)
        else:
            counts[k] = k + 2 * c((k - 1) // 2)
        return counts[k]

    return c(n)


def query_budget(n: int) -> int:
    """Desk-scale ceiling for cuts plus one assignment's evals."""
    return 4 * n * math.ceil(math.log2(n + 2)) + 4


def even_paz_program(
    cake: Interval, agents: tuple[int, ...]
) -> Program:
    """Classic divide-and-conquer baseline: n agents, n pieces, every agent
    queried on every level it participates in; no extra participant.

    Each agent cuts at floor(n/2)/n of their own value of the subcake; the
    agents owning the floor(n/2) smallest cuts recurse left of the
    floor(n/2)-th smallest cut, the rest recurse right. A lone agent takes
    the whole subcake.
    """
    n = len(agents)
    if n == 0:
        raise DomainError("agent list is empty")
    if n == 1:
        return {agents[0]: cake}
    k = n // 2
    cuts: list[tuple[Fraction, int]] = []
    for agent in agents:
        c = yield Cut(agent, cake, Fraction(k, n))
        cuts.append((c, agent))
    cuts.sort()
    split = cuts[k - 1][0]  # k-th smallest cut
    left_agents = tuple(a for _, a in cuts[:k])
    right_agents = tuple(a for _, a in cuts[k:])
    left = yield from even_paz_program(Interval(cake.lo, split), left_agents)
    right = yield from even_paz_program(Interval(split, cake.hi), right_agents)
    merged = dict(left)
    merged.update(right)
    return merged


def even_paz(
    cake: Interval,
    agents: tuple[int, ...] | list[int],
    endpoints,
    transcript: Transcript,
) -> tuple[list[Interval], dict[int, int]]:
    """Run the baseline; returns (pieces left-to-right, agent -> 1-based
    piece index)."""
    by_agent = run_program(
        even_paz_program(cake, tuple(agents)), endpoints, transcript
    )
    assert isinstance(by_agent, dict)
    ordered = sorted(by_agent.items(), key=lambda item: (item[1].lo, item[1].hi))
    pieces = [piece for _, piece in ordered]
    assignment = {agent: i + 1 for i, (agent, _) in enumerate(ordered)}
    return pieces, assignment
