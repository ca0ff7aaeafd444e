import pytest
from hypothesis import given, strategies as st

from sgraph.graph0 import (
    Config0,
    RunError,
    Edge,
    SGraph0,
    act,
    dump_sg0,
    inverse_eid,
    parse_sg0,
    reach_bounded,
    run,
)
from sgraph.words import EMPTY, Hardware, LWord, Word


HW = Hardware([("a", ("x",)), ("b", ("x",))])


def graph_incr():
    """s --[a -> a·x^-1][b -> x·b]--> s, plus a final guard edge."""
    e1 = Edge("e1", "s", "s", act(right={"a": Word.gen("x", -1)}, left={"b": Word.of("x")}))
    e2 = Edge("e2", "s", "f", act(guard={"a": EMPTY}))
    return SGraph0(HW, ["s", "f"], [e1, e2])


class TestAction:
    def test_inverse_round_trip(self):
        a = act(left={"a": Word.of("x")}, right={"b": Word.gen("x", -1)}, guard={"a": EMPTY})
        w = LWord({"b": Word.of("x")})
        assert a.inverse().inverse().transform == a.transform

    def test_apply(self):
        a = act(left={"a": Word.of("x")})
        c = a.apply_word(LWord())
        assert c["a"] == Word.of("x")

    def test_guard_blocks(self):
        a = act(guard={"a": EMPTY})
        assert a.failing_guard(LWord({"a": Word.of("x")}), ("a",)) is not None
        assert a.failing_guard(LWord(), ("a",)) is None


class TestRun:
    def test_transfer_loop(self):
        g = graph_incr()
        c0 = Config0(LWord({"a": Word.gen("x", 3)}), "s")
        comp = run(g, c0, ["e1", "e1", "e1", "e2"])
        final = comp.configs[-1]
        assert final.state == "f"
        assert final.word == LWord({"b": Word.gen("x", 3)})

    def test_inverse_edge_round_trip(self):
        g = graph_incr()
        c0 = Config0(LWord({"a": Word.gen("x", 2)}), "s")
        comp = run(g, c0, ["e1", inverse_eid("e1")])
        assert comp.configs[-1] == c0

    def test_guard_failure_raises(self):
        g = graph_incr()
        c0 = Config0(LWord({"a": Word.gen("x", 1)}), "s")
        with pytest.raises(RunError):
            run(g, c0, ["e2"])


class TestReach:
    def test_transfer_relation(self):
        g = graph_incr()
        seeds = [Config0(LWord({"a": Word.gen("x", n)}), "s") for n in range(4)]
        seeds += [Config0(LWord({"b": Word.gen("x", n)}), "f") for n in range(4)]
        res = reach_bounded(g, seeds, max_word=6, max_configs=10**4)
        for n in range(4):
            assert res.same(
                Config0(LWord({"a": Word.gen("x", n)}), "s"),
                Config0(LWord({"b": Word.gen("x", n)}), "f"),
            )
        assert not res.same(
            Config0(LWord({"a": Word.gen("x", 1)}), "s"),
            Config0(LWord({"b": Word.gen("x", 2)}), "f"),
        )
        assert not res.truncated


class TestTextFormat:
    def test_round_trip(self):
        g = graph_incr()
        text = dump_sg0(g)
        g2 = parse_sg0(text)
        assert dump_sg0(g2) == text
        assert set(g2.hardware.tapes) == {"a", "b"}

    def test_dotted_tape_names_survive(self):
        # expansion produces composite names like "e2.c"
        hw = Hardware([("e2.c", ("x",))])
        g = SGraph0(hw, ["s", "f"], [Edge("e1", "s", "f", act(left={"e2.c": Word.of("x")}))])
        g2 = parse_sg0(dump_sg0(g))
        assert dump_sg0(g2) == dump_sg0(g)

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            parse_sg0("state s;")  # no hardware
        with pytest.raises(ValueError):
            parse_sg0("hardware { a: x; }")  # no states


@given(st.integers(min_value=0, max_value=8))
def test_transfer_any_power(n):
    g = graph_incr()
    c0 = Config0(LWord({"a": Word.gen("x", n)}), "s")
    comp = run(g, c0, ["e1"] * n + ["e2"])
    assert comp.configs[-1].word == LWord({"b": Word.gen("x", n)})
