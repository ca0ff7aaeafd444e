import pytest

from sgraph.gadgets import DELTA, dw, make_check_pos, make_copy, make_obj0, make_syn
from sgraph.graph0 import Config0, Edge, act
from sgraph.plans import StdObject
from sgraph.star import (
    F_MARK,
    S_MARK,
    StarGraph,
    check_condition_O,
    check_immutability,
    explore_values,
    generic_edges_of,
    generic_reach,
    generic_step,
    io_bounded,
    validate_star_graph,
)
from sgraph.words import EMPTY, LWord, Word


class TestValidate:
    def test_syn_passes(self):
        syn = make_syn()
        op = syn.obj.operations["syn"]
        assert validate_star_graph(op.graph).ok
        assert check_condition_O(op).ok

    def test_foreign_value_mutation_fails(self):
        # add a transform touching another instance's value tape d'
        syn = make_syn()
        g = syn.obj.operations["syn"].graph
        bad = Edge("bad", "s", "s1", act(left={"d'": Word.of(DELTA)}))
        g2 = StarGraph(g.hardware, g.states, [bad] + [
            e for e in g.edges if not e.eid.endswith("~")
        ], instances=g.instances)
        report = validate_star_graph(g2)
        assert not report.ok
        assert any(cond == 6 for cond, _ in report.violations)

    def test_unregistered_instance_fails(self):
        syn = make_syn()
        g = syn.obj.operations["syn"].graph
        g2 = StarGraph(
            g.hardware,
            g.states,
            [e for e in g.edges if not e.eid.endswith("~")],
            instances=[i for i in g.instances if i.name != "C_ab"],
        )
        assert not validate_star_graph(g2).ok


class TestConditionO:
    def test_open_bracket_detected(self):
        # internal tape written but never re-emptied on the way to finish
        cp = make_copy(("x",))
        g = cp.obj.operations["op"].graph
        from sgraph.star import OperationDef

        # declare the copy target b internal without the closing guard: the
        # operation's own graph leaves b = a at finish
        bad = OperationDef("bad", g, ext=("a",), val=(), int_=("b", "c"), start="s", finish="f")
        assert not check_condition_O(bad).ok


class TestIOBounded:
    def test_copy_quads(self):
        cp = make_copy(("x", "y"))
        op = cp.obj.operations["op"]
        quads, truncated = io_bounded(op, 2, oracles=StdObject.oracles)
        assert not truncated
        for (w1, m1, w2, m2) in quads:
            if m1 == m2:
                assert w1 == w2
            else:
                u1, u2 = (w1, w2) if m1 == S_MARK else (w2, w1)
                assert not u1["b"] and u2["b"] == u2["a"] == u1["a"]
        # completeness of the sf direction
        sf = {(w1["a"], w2["b"]) for (w1, m1, w2, m2) in quads if (m1, m2) == (S_MARK, F_MARK)}
        from sgraph.star import _all_words

        expected = {(w, w) for w in _all_words(("x", "y"), 2)}
        assert sf == expected

    def test_check_pos_quads(self):
        ck = make_check_pos()
        op = ck.obj.operations["op"]
        quads, _ = io_bounded(op, 8, oracles=StdObject.oracles)
        sf = {(w1["a"], w2["a"]) for (w1, m1, w2, m2) in quads if (m1, m2) == (S_MARK, F_MARK)}
        assert sf == {(dw(i), dw(i)) for i in range(1, 9)}

    def test_copy_immutability(self):
        cp = make_copy(("x",))
        op = cp.obj.operations["op"]
        assert check_immutability(op, "a", 3, oracles=StdObject.oracles) is None
        cex = check_immutability(op, "b", 3, oracles=StdObject.oracles)
        assert cex is not None
        w1, m1, w2, m2 = cex
        assert w1["b"] != w2["b"]


class TestGeneric:
    def test_explore_values_obj0(self):
        obj0 = make_obj0()
        vals, truncated = explore_values(obj0.obj, StdObject.oracles, 8)
        assert not truncated
        assert vals == {LWord({"d": dw(2 * k)}) if k else LWord() for k in range(-4, 5)}

    def test_generic_symmetry(self):
        syn = make_syn()
        g = syn.obj.operations["syn"].graph
        c0 = Config0(
            LWord({"a": Word.of("x"), "b": Word.of("y"), "c": Word.of("z")}), "s"
        )
        for ge in generic_edges_of(g):
            if ge.tail() != c0.state:
                continue
            for nxt in generic_step(g, c0, ge, StdObject.oracles, 4):
                back = generic_step(g, nxt, ge.reversed(), StdObject.oracles, 4)
                assert c0 in back

    def test_generic_reach_syn(self):
        syn = make_syn()
        g = syn.obj.operations["syn"].graph
        # σ(a) + σ(b) = 2 = σ(c): the finish is reachable and c is erased
        word = LWord({"a": Word.of("x"), "b": Word.of("y"), "c": Word.gen("z", 2)})
        seeds = [Config0(word, "s")]
        reached, truncated = generic_reach(g, seeds, StdObject.oracles, 4)
        finals = {c for c in reached if c.state == "f"}
        assert Config0(LWord({"a": Word.of("x"), "b": Word.of("y")}), "f") in finals
        # σ(a) + σ(b) = 2 != 1 = σ(c): no finish configuration exists
        bad = LWord({"a": Word.of("x"), "b": Word.of("y"), "c": Word.of("z")})
        reached2, _ = generic_reach(g, [Config0(bad, "s")], StdObject.oracles, 4)
        assert not any(c.state == "f" for c in reached2)
