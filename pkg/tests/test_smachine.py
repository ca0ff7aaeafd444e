import pytest

from sgraph.graph0 import Config0, Edge, SGraph0, act
from sgraph.smachine import (
    AdmissibleWord,
    RecognizingSMachine,
    dump_sm,
    graph_from_machine,
    graph_isomorphic,
    machine_from_graph,
    measure_machine,
    mgi_intervals,
    parse_sm,
    recognize_bounded,
)
from sgraph.words import EMPTY, Hardware, LWord, Word


def graph_G():
    """Four tapes I, D1, A, D2; e1 carries guards on I and A plus three
    transforms; e2, e3 are guard-free loops."""
    hw = Hardware([("I", ()), ("D1", ("δ",)), ("A", ("a",)), ("D2", ("δ",))])
    delta, a = Word.of("δ"), Word.of("a")
    e1 = Edge(
        "e1",
        "P1Q1",
        "P2Q1",
        act(
            right={"D1": delta.inv()},
            left={"A": a, "D2": delta},
            guard={"I": EMPTY, "A": a},
        ),
    )
    e2 = Edge("e2", "P2Q1", "P2Q1", act(right={"A": a}))
    e3 = Edge("e3", "P2Q2", "P2Q2", act(right={"A": a}))
    return SGraph0(hw, ["P1Q1", "P2Q1", "P2Q2"], [e1, e2, e3])


ETA = ("I", "D1", "A", "D2")
NU = ("D1", "D2", "I", "A")


class TestMGI:
    def test_eta_intervals(self):
        g = graph_G()
        label = g.by_id["e1"].label
        assert set(mgi_intervals(label, ETA)) == {(1, 2), (3, 4), (5, 5)}

    def test_nu_intervals(self):
        g = graph_G()
        label = g.by_id["e1"].label
        assert set(mgi_intervals(label, NU)) == {(1, 1), (2, 2), (3, 5)}

    def test_guard_free_intervals_are_points(self):
        g = graph_G()
        label = g.by_id["e2"].label
        assert set(mgi_intervals(label, ETA)) == {(i, i) for i in range(1, 6)}


class TestRoundTrip:
    @pytest.mark.parametrize("eta", [ETA, NU])
    def test_G_of_S_of_G(self, eta):
        g = graph_G()
        gm = machine_from_graph(g, eta)
        back = graph_from_machine(gm.machine)
        assert graph_isomorphic(g, back.graph) is not None

    def test_rule_count_matches_edges(self):
        g = graph_G()
        gm = machine_from_graph(g, ETA)
        assert len(gm.machine.positive_rules()) == len(g.positive_edges())

    def test_dump_parse_stable(self):
        g = graph_G()
        m = machine_from_graph(g, ETA).machine
        text = dump_sm(m)
        assert dump_sm(parse_sm(text)) == text


class TestRecognize:
    def machine(self):
        # transfer a: a^n at tape 1 -> accept with empty tapes after n erases
        hw = Hardware([("a", ("x",))])
        g = SGraph0(
            hw,
            ["s", "f"],
            [
                Edge("e1", "s", "s", act(right={"a": Word.gen("x", -1)})),
                Edge("e2", "s", "f", act(guard={"a": EMPTY})),
            ],
        )
        gm = machine_from_graph(g, ("a",))
        start = gm.mu(Config0(LWord(), "s"))
        finish = gm.mu(Config0(LWord(), "f"))
        return RecognizingSMachine(gm.machine, gm.eta.index("a") + 1, start.states, finish.states)

    def test_accepts_powers(self):
        rec = self.machine()
        for n in range(4):
            comp = recognize_bounded(rec, Word.gen("x", n), max_word=8)
            assert comp is not None
            assert measure_machine(comp).tm == n + 1

    def test_caps_exhausted_is_none(self):
        rec = self.machine()
        assert recognize_bounded(rec, Word.gen("x", 50), max_word=64, max_steps=10) is None
