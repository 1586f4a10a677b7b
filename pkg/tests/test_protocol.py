from __future__ import annotations

import json
import math
from fractions import Fraction as F

import pytest

from faircake import (
    DomainError,
    EvenNode,
    Interval,
    Leaf1,
    Transcript,
    UNIT,
    agents_of,
    dc_secret,
    eval_measure,
    even_paz,
    pieces_of,
    predicted_cut_count,
    queries_to,
    simulated_endpoints,
    tree_from_json,
    tree_to_json,
    uniform_valuation,
)
from faircake.protocol import tree_depth

from conftest import run_dc, seeded_valuations


def uniform_run(n: int):
    valuations = {i: uniform_valuation() for i in range(1, n + 1)}
    transcript = Transcript(valuations)
    tree = dc_secret(UNIT, tuple(valuations), simulated_endpoints(valuations), transcript)
    return tree, transcript


class TestDcSecretExamples:
    def test_n1_uniform_halves(self):
        tree, _ = uniform_run(1)
        assert pieces_of(tree) == [
            Interval(F(0), F(1, 2)),
            Interval(F(1, 2), F(1)),
        ]

    def test_n2_uniform_thirds(self):
        tree, _ = uniform_run(2)
        assert pieces_of(tree) == [
            Interval(F(0), F(1, 3)),
            Interval(F(1, 3), F(2, 3)),
            Interval(F(2, 3), F(1)),
        ]

    def test_n3_uniform_quarters(self):
        tree, _ = uniform_run(3)
        assert [p.length for p in pieces_of(tree)] == [F(1, 4)] * 4

    def test_n2_nonuniform_hand_trace(self, left_heavy, uniform):
        # left-heavy agent 1 cuts a 1/3-share at 1/6; uniform agent 2 at
        # 1/3; agent 1 peels [0,1/6]; agent 2 halves [1/6,1] at 7/12
        valuations = {1: left_heavy, 2: uniform}
        transcript = Transcript(valuations)
        tree = dc_secret(UNIT, (1, 2), simulated_endpoints(valuations), transcript)
        assert isinstance(tree, EvenNode)
        assert tree.cutter == 1
        assert tree.left_piece == Interval(F(0), F(1, 6))
        assert isinstance(tree.child, Leaf1)
        assert tree.child.agent == 2 and tree.child.cut == F(7, 12)
        pieces = pieces_of(tree)
        assert pieces == [
            Interval(F(0), F(1, 6)),
            Interval(F(1, 6), F(7, 12)),
            Interval(F(7, 12), F(1)),
        ]
        # cross-check every recorded piece mass against the measures
        assert eval_measure(left_heavy, tree.left_piece) == F(1, 3)
        assert eval_measure(uniform, pieces[1]) == eval_measure(uniform, Interval(F(1, 6), F(1))) / 2

    def test_empty_agent_list_rejected(self):
        with pytest.raises(DomainError):
            dc_secret(UNIT, (), {}, Transcript([]))


class TestTreeInvariants:
    @pytest.mark.parametrize("n", range(1, 17))
    def test_piece_count_and_contiguity(self, n):
        tree, _, _ = run_dc(n, seed=n)
        pieces = pieces_of(tree)
        assert len(pieces) == n + 1
        assert pieces[0].lo == 0 and pieces[-1].hi == 1
        for a, b in zip(pieces, pieces[1:]):
            assert a.hi == b.lo

    @pytest.mark.parametrize("n", range(1, 17))
    def test_each_agent_appears_once(self, n):
        tree, valuations, _ = run_dc(n, seed=100 + n)
        assert sorted(agents_of(tree)) == sorted(valuations)

    def test_left_mass_guarantees_by_construction(self):
        tree, valuations, _ = run_dc(9, seed=5)

        def check(node):
            if isinstance(node, Leaf1):
                v = valuations[node.agent]
                left = eval_measure(v, Interval(node.cake.lo, node.cut))
                assert left * 2 == eval_measure(v, node.cake)
            elif isinstance(node, EvenNode):
                v = valuations[node.cutter]
                k = len(agents_of(node))
                assert eval_measure(v, node.left_piece) * (k + 1) == eval_measure(v, node.cake)
                check(node.child)
            else:
                v = valuations[node.median_agent]
                left_cake = Interval(node.cake.lo, node.median_cut)
                assert eval_measure(v, left_cake) * 2 == eval_measure(v, node.cake)
                check(node.left)
                check(node.right)

        check(tree)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13])
    def test_determinism(self, n):
        first, _, t1 = run_dc(n, seed=77)
        second, _, t2 = run_dc(n, seed=77)
        assert first == second
        assert t1.entries == t2.entries

    def test_json_round_trip(self):
        tree, _, _ = run_dc(6, seed=9)
        encoded = json.dumps(tree_to_json(tree))
        assert tree_from_json(json.loads(encoded)) == tree


class TestPredictedCutCount:
    def test_base_case(self):
        assert predicted_cut_count(1) == 1

    def test_hand_evaluated_small_values(self):
        # C(2)=2+C(1)=3, C(3)=3+2*C(1)=5, C(4)=4+C(3)=9
        assert predicted_cut_count(3) == 5
        assert predicted_cut_count(4) == 9

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            predicted_cut_count(0)

    def test_recurrence_bound_sweep(self):
        for n in range(1, 4097):
            assert predicted_cut_count(n) <= 4 * n * math.ceil(math.log2(n + 1))

    @pytest.mark.parametrize("n", range(1, 21))
    def test_measured_cuts_match_prediction(self, n):
        _, _, transcript = run_dc(n, seed=50 + n)
        assert transcript.count("cut") == predicted_cut_count(n)
        assert transcript.count("eval") == 0

    def test_count_is_input_independent(self):
        for seed in range(5):
            _, _, transcript = run_dc(7, seed=seed, segments=2 + seed)
            assert transcript.count("cut") == predicted_cut_count(7)


class TestEvenPaz:
    def test_n2_uniform_halves(self):
        valuations = {1: uniform_valuation(), 2: uniform_valuation()}
        t = Transcript(valuations)
        pieces, assignment = even_paz(UNIT, (1, 2), simulated_endpoints(valuations), t)
        assert pieces == [Interval(F(0), F(1, 2)), Interval(F(1, 2), F(1))]
        assert sorted(assignment.values()) == [1, 2]

    def test_n4_uniform_quarters(self):
        valuations = {i: uniform_valuation() for i in range(1, 5)}
        t = Transcript(valuations)
        pieces, assignment = even_paz(UNIT, tuple(valuations), simulated_endpoints(valuations), t)
        assert [p.length for p in pieces] == [F(1, 4)] * 4
        assert sorted(assignment.values()) == [1, 2, 3, 4]

    @pytest.mark.parametrize("n", range(2, 11))
    def test_everyone_queried_and_proportional(self, n):
        valuations = seeded_valuations(n, seed=200 + n)
        t = Transcript(valuations)
        pieces, assignment = even_paz(UNIT, tuple(valuations), simulated_endpoints(valuations), t)
        assert len(pieces) == n
        for agent, v in valuations.items():
            assert queries_to(t, agent) >= 1
            received = pieces[assignment[agent] - 1]
            assert eval_measure(v, received) >= F(1, n)


class TestTreeDepth:
    @pytest.mark.parametrize("n,expect", [(1, 1), (2, 2), (3, 2), (4, 3)])
    def test_small_depths(self, n, expect):
        tree, _ = uniform_run(n)
        assert tree_depth(tree) == expect
