import random

import pytest

from helpers import random_generic_walk, random_walk0, replay_matches

from sgraph.expansion import (
    expand_graph,
    expand_operation,
    expansion_size,
    generic_reduction,
    lift_path,
    project_proper,
)
from sgraph.gadgets import dw, make_check_pos, make_copy, make_counter, make_syn
from sgraph.graph0 import Config0, reach_bounded
from sgraph.plans import StdObject
from sgraph.star import check_condition_O
from sgraph.words import LWord


class TestExpandSyn:
    def test_tapes_and_invisible(self):
        syn = make_syn()
        op = syn.obj.operations["syn"]
        exp = expand_operation(op)
        tapes = set(exp.result.graph.hardware.tapes)
        assert tapes == {"a", "a'", "b", "b'", "c", "d'", "d''", "e2.c", "e3.c"}
        assert set(exp.invisible) == {"e2.c", "e3.c"}
        # original states survive, original alphabets unchanged
        assert set(op.graph.states) <= set(exp.result.graph.states)
        for t in op.graph.hardware.tapes:
            assert exp.result.graph.hardware.alphabets[t] == op.graph.hardware.alphabets[t]

    def test_expanded_op_roles(self):
        syn = make_syn()
        op = syn.obj.operations["syn"]
        exp = expand_operation(op)
        assert exp.operation.ext == op.ext
        assert exp.operation.val == op.val
        assert set(exp.operation.int) == set(op.int) | {"e2.c", "e3.c"}

    def test_check_pos_expansion_is_operation(self):
        ck = make_check_pos()
        exp = expand_operation(ck.obj.operations["op"])
        assert not exp.operation.graph.positive_edges()
        assert check_condition_O(exp.operation).ok


class TestReachOnExpansion:
    def test_positive_power_accepted(self):
        ck = make_check_pos()
        exp = expand_operation(ck.obj.operations["op"])
        g0 = exp.result.graph
        seed = Config0(LWord({"a": dw(3)}), "s")
        result = reach_bounded(g0, [seed], 10, 10**5)
        assert Config0(LWord({"a": dw(3)}), "f") in result.configs
        assert not result.truncated

    def test_negative_power_rejected(self):
        ck = make_check_pos()
        exp = expand_operation(ck.obj.operations["op"])
        g0 = exp.result.graph
        seed = Config0(LWord({"a": dw(-1)}), "s")
        result = reach_bounded(g0, [seed], 10, 10**5)
        assert not result.truncated
        assert not any(c.state == "f" for c in result.configs)


class TestLiftPath:
    def test_lift_copy_segment(self):
        ck = make_check_pos()
        exp = expand_operation(ck.obj.operations["op"])
        assert lift_path(exp.result, "e2", ["e2.e1", "e2.l1.δ"]) == ["e1", "l1.δ"]

    def test_foreign_edge_rejected(self):
        ck = make_check_pos()
        exp = expand_operation(ck.obj.operations["op"])
        with pytest.raises(ValueError):
            lift_path(exp.result, "e2", ["e3.e1"])


def _proper_trivial(exp):
    proper = set(exp.result.source.states)
    invisible = exp.result.invisible

    def pred(c):
        return c.state in proper and all(not c.word[t] for t in invisible)

    return pred


def _correspondence_case(op, seeds, rounds, rng, max_word=8, steps=40):
    """Directions of the lowering correspondence on one operation.

    (b) random degree-0 walks of the lowered graph between proper states
    with trivial invisible tapes reduce to generic paths whose oracle
    replay reproduces the endpoints; (d) random generic walks transfer to
    degree-0 reachability on the lowered graph.
    """
    exp = expand_operation(op)
    g0 = exp.result.graph
    src = op.graph
    pred = _proper_trivial(exp)
    checked_b = checked_d = 0
    for _ in range(rounds):
        c0 = rng.choice(seeds)
        path, end = random_walk0(g0, c0, rng, steps, max_word, pred)
        if end is not None:
            reduction = generic_reduction(exp.result, path)
            start = Config0(project_proper(exp.result, c0.word), c0.state)
            target = Config0(project_proper(exp.result, end.word), end.state)
            assert replay_matches(
                src, start, reduction, StdObject.oracles, max_word, target
            ), f"no oracle replay for {path}"
            checked_b += 1
        c0 = rng.choice(seeds)
        end = random_generic_walk(src, c0, StdObject.oracles, rng, steps // 4, max_word)
        reach = reach_bounded(g0, [c0], max_word + 4, 10**5)
        assert Config0(end.word, end.state) in reach.configs
        checked_d += 1
    assert checked_b >= rounds // 3
    assert checked_d == rounds


class TestCorrespondence:
    def test_check_pos(self):
        ck = make_check_pos()
        op = ck.obj.operations["op"]
        rng = random.Random(7)
        seeds = [
            Config0(LWord({"a": dw(i)}), st)
            for i in (1, 2, 3)
            for st in ("s", "f")
        ]
        _correspondence_case(op, seeds, 25, rng)

    def test_counter1_inc(self):
        cnt = make_counter(1)
        op = cnt.obj.operations["inc"]
        (top,) = op.val
        rng = random.Random(11)
        seeds = [
            Config0(LWord({top: dw(k)}), st) for k in (0, 1, 2) for st in ("s", "f")
        ]
        _correspondence_case(op, seeds, 25, rng)


class TestExpansionSize:
    def test_degree0_is_edge_count(self):
        cp = make_copy(("x",))
        op = cp.obj.operations["op"]
        assert expansion_size(op) == len(op.graph.degree0_edges())

    def test_matches_materialized(self):
        ck = make_check_pos()
        op = ck.obj.operations["op"]
        exp = expand_operation(op)
        assert expansion_size(op) == len(exp.result.graph.edges)

    def test_budget_cuts_off(self):
        ck = make_check_pos()
        op = ck.obj.operations["op"]
        assert expansion_size(op, budget=3) is None
