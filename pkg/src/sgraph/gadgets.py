"""The certified object library.

Every builder returns a :class:`~sgraph.plans.StdObject`: the object
definition together with its input-output oracle, witness planners, and
cost data.  Oracles and planners are independent of the graphs — tests
compare them against bounded exploration of the expansions.

Cost pairs ``(f, g)`` take the maximal natural-word size of a call and
bound the planner's lowered time and space.  Ops listed in
``certified`` carry hand-checked dominating bounds; the remaining ops
carry asymptotic pricing closures used by the sequential planner.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from sgraph.graph0 import Action0, Edge, act
from sgraph.plans import PlanStep, StdObject, plan_witness, reverse_plan, step0, stepN
from sgraph.star import (
    ActionN,
    F_MARK,
    FnOracle,
    InstanceDef,
    ObjectDef,
    OperationDef,
    S_MARK,
    StarGraph,
    _all_words,
)
from sgraph.words import EMPTY, Hardware, LWord, Word, classify_word

DELTA = "δ"


def dw(k: int) -> Word:
    """The word δ^k."""
    return Word.gen(DELTA, k)


def dexp(w: Word) -> Optional[int]:
    """The exponent when ``w`` is a power of δ, else None."""
    if not w.is_power_of(DELTA):
        return None
    return sum(sign for _, sign in w.letters)


def ceil_half(m: int) -> int:
    """⌈m/2⌉ for any integer."""
    return -((-m) // 2)


# ---------------------------------------------------------------------------
# Oracle assembly
# ---------------------------------------------------------------------------


class Rel:
    """Symmetric relation data for one operation.

    ``sf`` decides the start-to-finish relation; ``sf_succ``/``fs_succ``
    enumerate images/preimages within a per-tape cap.  Same-end
    relations default to the identity.
    """

    def __init__(
        self,
        sf: Callable[[LWord, LWord], bool],
        sf_succ: Callable[[LWord, int], list],
        fs_succ: Callable[[LWord, int], list],
        ss: Optional[Callable[[LWord, LWord], bool]] = None,
        ss_succ: Optional[Callable[[LWord, int], list]] = None,
        ff: Optional[Callable[[LWord, LWord], bool]] = None,
        ff_succ: Optional[Callable[[LWord, int], list]] = None,
    ):
        self.sf = sf
        self.sf_succ = sf_succ
        self.fs_succ = fs_succ
        self.ss = ss or (lambda w1, w2: w1 == w2)
        self.ss_succ = ss_succ or (lambda w, cap: [w])
        self.ff = ff or (lambda w1, w2: w1 == w2)
        self.ff_succ = ff_succ or (lambda w, cap: [w])


def capped(words: Iterable[LWord], cap: int) -> list:
    return [w for w in words if all(len(v) <= cap for _, v in w.entries)]


def make_oracle(rels: Mapping[str, Rel], values_fn=None) -> FnOracle:
    members = {}
    succs = {}
    for op, rel in rels.items():

        def member(w1, m1, w2, m2, rel=rel):
            if (m1, m2) == (S_MARK, F_MARK):
                return rel.sf(w1, w2)
            if (m1, m2) == (F_MARK, S_MARK):
                return rel.sf(w2, w1)
            if m1 == S_MARK:
                return rel.ss(w1, w2)
            return rel.ff(w1, w2)

        def succ(w1, m1, m2, cap, rel=rel):
            if (m1, m2) == (S_MARK, F_MARK):
                return capped(rel.sf_succ(w1, cap), cap)
            if (m1, m2) == (F_MARK, S_MARK):
                return capped(rel.fs_succ(w1, cap), cap)
            if m1 == S_MARK:
                return capped(rel.ss_succ(w1, cap), cap)
            return capped(rel.ff_succ(w1, cap), cap)

        members[op] = member
        succs[op] = succ
    return FnOracle(members, succs, values_fn)


# ---------------------------------------------------------------------------
# Builder cache and canonical names
# ---------------------------------------------------------------------------

_CACHE: dict[str, StdObject] = {}


def _cached(name: str, build: Callable[[], StdObject]) -> StdObject:
    std = _CACHE.get(name)
    if std is None:
        std = build()
        _CACHE[name] = std
    return std


def _alpha_key(alphabet: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(alphabet))


def _hw(*items) -> Hardware:
    return Hardware(list(items))


def _inst(name: str, std_or_obj, val_map: Mapping[str, str] = ()) -> InstanceDef:
    obj = std_or_obj.obj if isinstance(std_or_obj, StdObject) else std_or_obj
    return InstanceDef.make(name, obj, dict(val_map))


def _call(inst: InstanceDef, op: str, **ext_map) -> ActionN:
    return ActionN.make(inst, op, ext_map)


# ---------------------------------------------------------------------------
# copy
# ---------------------------------------------------------------------------


def make_copy(alphabet: Iterable[str]) -> StdObject:
    A = _alpha_key(alphabet)
    name = f"copy({','.join(A)})"

    def build() -> StdObject:
        hw = _hw(("a", A), ("b", A), ("c", A))
        edges = [
            Edge("e1", "s", "s1", act(guard={"b": EMPTY, "c": EMPTY})),
            Edge("et", "s1", "s2", act(guard={"a": EMPTY, "b": EMPTY})),
            Edge("e2", "s2", "f", act(guard={"c": EMPTY})),
        ]
        for x in A:
            edges.append(
                Edge(f"l1.{x}", "s1", "s1", act(left={"a": Word.gen(x, -1)}, right={"c": Word.gen(x)}))
            )
            edges.append(
                Edge(
                    f"l2.{x}",
                    "s2",
                    "s2",
                    act(left={"a": Word.gen(x), "b": Word.gen(x)}, right={"c": Word.gen(x, -1)}),
                )
            )
        g = StarGraph(hw, ["s", "s1", "s2", "f"], edges)
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a", "b"), val=(), int_=("c",), start="s", finish="f", immutable_ext=("a",))
        obj.add_operation(op)
        obj.freeze()

        def sf(w1, w2):
            return not w1["b"] and w2["a"] == w1["a"] and w2["b"] == w1["a"]

        rel = Rel(
            sf,
            lambda w, cap: [LWord({"a": w["a"], "b": w["a"]})] if not w["b"] else [],
            lambda w, cap: [LWord({"a": w["a"]})] if w["a"] == w["b"] else [],
        )

        def planner(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or w1["b"]:
                return None
            a = w1["a"]
            steps = [step0(g.edge("e1"))]
            for sym, sign in a.letters:
                steps.append(step0(g.edge(f"l1.{sym}"), forward=(sign == 1)))
            steps.append(step0(g.edge("et")))
            for sym, sign in reversed(a.letters):
                steps.append(step0(g.edge(f"l2.{sym}"), forward=(sign == 1)))
            steps.append(step0(g.edge("e2")))
            return steps

        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: M + 3, lambda M: M)},
            certified={"op"},
        )

    return _cached(name, build)


# ---------------------------------------------------------------------------
# split
# ---------------------------------------------------------------------------


def make_split(alphabet: Iterable[str]) -> StdObject:
    A = _alpha_key(alphabet)
    name = f"split({','.join(A)})"

    def build() -> StdObject:
        hw = _hw(("a", A), ("b", A))
        edges = [Edge("e0", "s", "f", act())]
        for x in A:
            edges.append(
                Edge(f"m.{x}", "f", "f", act(right={"a": Word.gen(x, -1)}, left={"b": Word.gen(x)}))
            )
        g = StarGraph(hw, ["s", "f"], edges)
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a", "b"), val=(), int_=(), start="s", finish="f")
        obj.add_operation(op)
        obj.freeze()

        def same_product(w1, w2):
            return w1["a"] * w1["b"] == w2["a"] * w2["b"]

        def splits(w, cap):
            prod = w["a"] * w["b"]
            out = []
            for v in _all_words(A, cap):
                u = prod * v.inv()
                if len(u) <= cap:
                    out.append(LWord({"a": u, "b": v}))
            return out

        rel = Rel(same_product, splits, splits, ss=same_product, ss_succ=splits, ff=same_product, ff_succ=splits)

        def planner(w1, m1, w2, m2):
            if not same_product(w1, w2):
                return None
            steps = []
            if m1 == S_MARK:
                steps.append(step0(g.edge("e0")))
            for sym, sign in w1["b"].letters:  # strip the b side onto a
                steps.append(step0(g.edge(f"m.{sym}"), forward=(sign == -1)))
            for sym, sign in reversed(w2["b"].letters):  # rebuild the target b side
                steps.append(step0(g.edge(f"m.{sym}"), forward=(sign == 1)))
            if m2 == S_MARK:
                steps.append(step0(g.edge("e0"), forward=False))
            return steps

        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: 2 * M + 2, lambda M: M)},
            certified={"op"},
        )

    return _cached(name, build)


# ---------------------------------------------------------------------------
# swap
# ---------------------------------------------------------------------------


def make_swap(alphabet: Iterable[str]) -> StdObject:
    A = _alpha_key(alphabet)
    name = f"swap({','.join(A)})"

    def build() -> StdObject:
        sp = make_split(A)
        hw = _hw(("a", A), ("b", A))
        inst = _inst("sp", sp)
        edges = [
            Edge("e1", "s", "m", act(guard={"b": EMPTY})),
            Edge("e2", "m", "m", _call(inst, "op", a="a", b="b")),
            Edge("e3", "m", "f", act(guard={"a": EMPTY})),
        ]
        g = StarGraph(hw, ["s", "m", "f"], edges, instances=[inst])
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a", "b"), val=(), int_=(), start="s", finish="f")
        obj.add_operation(op)
        obj.freeze()

        rel = Rel(
            lambda w1, w2: not w1["b"] and not w2["a"] and w2["b"] == w1["a"],
            lambda w, cap: [LWord({"b": w["a"]})] if not w["b"] else [],
            lambda w, cap: [LWord({"a": w["b"]})] if not w["a"] else [],
        )

        def planner(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or w1["b"]:
                return None
            w = w1["a"]
            return [
                step0(g.edge("e1")),
                stepN(g.edge("e2"), S_MARK, F_MARK, LWord({"a": w}), LWord({"b": w})),
                step0(g.edge("e3")),
            ]

        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: 2 * M + 4, lambda M: M)},
            certified={"op"},
        )

    return _cached(name, build)


# ---------------------------------------------------------------------------
# div2
# ---------------------------------------------------------------------------


def make_div2() -> StdObject:
    name = "div2"

    def build() -> StdObject:
        D = (DELTA,)
        hw = _hw(("b", D), ("d", D))
        edges = [
            Edge("e1", "s", "q1", act(guard={"d": EMPTY})),
            Edge("e2", "q1", "q1", act(left={"b": dw(-2), "d": dw(1)})),
            Edge("e3", "q1", "q2", act(guard={"b": EMPTY})),
            Edge("e4", "q1", "q2", act(guard={"b": dw(-1)}, left={"b": dw(1)})),
            Edge("e5", "q2", "q2", act(left={"b": dw(1), "d": dw(-1)})),
            Edge("e6", "q2", "f", act(guard={"d": EMPTY})),
        ]
        g = StarGraph(hw, ["s", "q1", "q2", "f"], edges)
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("b",), val=(), int_=("d",), start="s", finish="f")
        obj.add_operation(op)
        obj.freeze()

        def sf(w1, w2):
            m, j = dexp(w1["b"]), dexp(w2["b"])
            return m is not None and j is not None and j == ceil_half(m)

        def ss(w1, w2):
            m, m2 = dexp(w1["b"]), dexp(w2["b"])
            return m is not None and m2 is not None and ceil_half(m) == ceil_half(m2)

        rel = Rel(
            sf,
            lambda w, cap: [LWord({"b": dw(ceil_half(dexp(w["b"])))})] if dexp(w["b"]) is not None else [],
            lambda w, cap: (
                [LWord({"b": dw(2 * j)}), LWord({"b": dw(2 * j - 1)})]
                if (j := dexp(w["b"])) is not None
                else []
            ),
            ss=ss,
            ss_succ=lambda w, cap: (
                [LWord({"b": dw(2 * ceil_half(m))}), LWord({"b": dw(2 * ceil_half(m) - 1)})]
                if (m := dexp(w["b"])) is not None
                else []
            ),
        )

        def plan_sf(m: int) -> list:
            j = ceil_half(m)
            fwd = j >= 0 if j != 0 else True
            steps = [step0(g.edge("e1"))]
            steps += [step0(g.edge("e2"), forward=fwd)] * abs(j)
            steps.append(step0(g.edge("e3" if m % 2 == 0 else "e4")))
            steps += [step0(g.edge("e5"), forward=fwd)] * abs(j)
            steps.append(step0(g.edge("e6")))
            return steps

        def planner(w1, m1, w2, m2):
            e1, e2 = dexp(w1["b"]), dexp(w2["b"])
            if e1 is None or e2 is None:
                return None
            if (m1, m2) == (S_MARK, F_MARK):
                return plan_sf(e1) if e2 == ceil_half(e1) else None
            if (m1, m2) == (S_MARK, S_MARK) and ceil_half(e1) == ceil_half(e2):
                return plan_sf(e1) + reverse_plan(plan_sf(e2))
            return None

        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: M + 4, lambda M: M)},
            certified={"op"},
        )

    return _cached(name, build)


# ---------------------------------------------------------------------------
# check of positivity / non-negativity of a δ-exponent
# ---------------------------------------------------------------------------


def make_check_pos() -> StdObject:
    name = "check_pos"

    def build() -> StdObject:
        cp = make_copy((DELTA,))
        dv = make_div2()
        D = (DELTA,)
        hw = _hw(("a", D), ("b", D))
        cpi = _inst("cp", cp)
        dvi = _inst("dv", dv)
        edges = [
            Edge("e1", "s", "q1", act(guard={"b": EMPTY})),
            Edge("e2", "q1", "q2", _call(cpi, "op", a="a", b="b")),
            Edge("e3", "q2", "q2", _call(dvi, "op", b="b")),
            Edge("e4", "q2", "f", act(guard={"b": dw(1)}, left={"b": dw(-1)})),
        ]
        g = StarGraph(hw, ["s", "q1", "q2", "f"], edges, instances=[cpi, dvi])
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a",), val=(), int_=("b",), start="s", finish="f", immutable_ext=("a",))
        obj.add_operation(op)
        obj.freeze()

        def good(w):
            i = dexp(w["a"])
            return i is not None and i >= 1

        rel = Rel(
            lambda w1, w2: good(w1) and w1 == w2,
            lambda w, cap: [w] if good(w) else [],
            lambda w, cap: [w] if good(w) else [],
        )

        def planner(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or not good(w1) or w1 != w2:
                return None
            i = dexp(w1["a"])
            steps = [
                step0(g.edge("e1")),
                stepN(g.edge("e2"), S_MARK, F_MARK, LWord({"a": dw(i)}), LWord({"a": dw(i), "b": dw(i)})),
            ]
            k = i
            while k > 1:
                k2 = ceil_half(k)
                steps.append(stepN(g.edge("e3"), S_MARK, F_MARK, LWord({"b": dw(k)}), LWord({"b": dw(k2)})))
                k = k2
            steps.append(step0(g.edge("e4")))
            return steps

        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: 8 * M + 20, lambda M: 3 * M + 2)},
            certified={"op"},
        )

    return _cached(name, build)


def make_check_nonneg() -> StdObject:
    name = "check_nonneg"

    def build() -> StdObject:
        chp = make_check_pos()
        D = (DELTA,)
        hw = _hw(("a", D))
        chi = _inst("ch", chp)
        edges = [
            Edge("g1", "s", "f", act(guard={"a": EMPTY})),
            Edge("g2", "s", "f", _call(chi, "op", a="a")),
        ]
        g = StarGraph(hw, ["s", "f"], edges, instances=[chi])
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a",), val=(), int_=(), start="s", finish="f", immutable_ext=("a",))
        obj.add_operation(op)
        obj.freeze()

        def good(w):
            i = dexp(w["a"])
            return i is not None and i >= 0

        rel = Rel(
            lambda w1, w2: good(w1) and w1 == w2,
            lambda w, cap: [w] if good(w) else [],
            lambda w, cap: [w] if good(w) else [],
        )

        def planner(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or not good(w1) or w1 != w2:
                return None
            if dexp(w1["a"]) == 0:
                return [step0(g.edge("g1"))]
            return [stepN(g.edge("g2"), S_MARK, F_MARK, w1, w1)]

        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: 8 * M + 21, lambda M: 3 * M + 2)},
            certified={"op"},
        )

    return _cached(name, build)


# ---------------------------------------------------------------------------
# le: strict comparison of two δ-exponents
# ---------------------------------------------------------------------------


def make_le() -> StdObject:
    name = "le"

    def build() -> StdObject:
        cp = make_copy((DELTA,))
        dv = make_div2()
        D = (DELTA,)
        hw = _hw(("a", D), ("b", D), ("a'", D), ("b'", D))
        cpi = _inst("cp", cp)
        dvi = _inst("dv", dv)
        edges = [
            Edge("e1", "s", "q1", act(guard={"a'": EMPTY, "b'": EMPTY})),
            Edge("e2", "q1", "q2", _call(cpi, "op", a="a", b="a'")),
            Edge("e3", "q2", "q3", _call(cpi, "op", a="b", b="b'")),
            Edge("e4", "q3", "q3", act(left={"a'": dw(-1), "b'": dw(-1)})),
            Edge("e5", "q3", "q4", act(guard={"a'": EMPTY})),
            Edge("e6", "q4", "q4", _call(dvi, "op", b="b'")),
            Edge("e7", "q4", "f", act(guard={"b'": dw(1)}, left={"b'": dw(-1)})),
        ]
        g = StarGraph(hw, ["s", "q1", "q2", "q3", "q4", "f"], edges, instances=[cpi, dvi])
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef(
            "op", g, ext=("a", "b"), val=(), int_=("a'", "b'"), start="s", finish="f", immutable_ext=("a", "b")
        )
        obj.add_operation(op)
        obj.freeze()

        def good(w):
            i, j = dexp(w["a"]), dexp(w["b"])
            return i is not None and j is not None and i < j

        rel = Rel(
            lambda w1, w2: good(w1) and w1 == w2,
            lambda w, cap: [w] if good(w) else [],
            lambda w, cap: [w] if good(w) else [],
        )

        def planner(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or not good(w1) or w1 != w2:
                return None
            i, j = dexp(w1["a"]), dexp(w1["b"])
            steps = [
                step0(g.edge("e1")),
                stepN(g.edge("e2"), S_MARK, F_MARK, LWord({"a": dw(i)}), LWord({"a": dw(i), "b": dw(i)})),
                stepN(g.edge("e3"), S_MARK, F_MARK, LWord({"a": dw(j)}), LWord({"a": dw(j), "b": dw(j)})),
            ]
            steps += [step0(g.edge("e4"), forward=(i > 0))] * abs(i)
            steps.append(step0(g.edge("e5")))
            k = j - i
            while k > 1:
                k2 = ceil_half(k)
                steps.append(stepN(g.edge("e6"), S_MARK, F_MARK, LWord({"b": dw(k)}), LWord({"b": dw(k2)})))
                k = k2
            steps.append(step0(g.edge("e7")))
            return steps

        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: 8 * M + 20, lambda M: 4 * M + 4)},
            certified={"op"},
        )

    return _cached(name, build)


# ---------------------------------------------------------------------------
# Hierarchical counter values
# ---------------------------------------------------------------------------

_succ_chain: dict[int, tuple[list, dict]] = {}


def counter_succ(u: Sequence[int]) -> tuple:
    """Successor of a non-increasing non-negative tuple."""
    u = tuple(u)
    d = len(u)
    if d == 1:
        return (u[0] + 1,)
    if u[d - 2] > u[d - 1]:
        return u[:-1] + (u[d - 1] + 1,)
    return counter_succ(u[:-1]) + (0,)


def _chain(d: int):
    if d not in _succ_chain:
        _succ_chain[d] = ([(0,) * d], {(0,) * d: 0})
    return _succ_chain[d]


def counter_encode(d: int, m: int) -> tuple:
    """The m-th value tuple of the depth-d counter."""
    seq, _ = _chain(d)
    while len(seq) <= m:
        nxt = counter_succ(seq[-1])
        _succ_chain[d][1][nxt] = len(seq)
        seq.append(nxt)
    return seq[m]

def counter_decode(d: int, u: Sequence[int]) -> int:
    """Position of a value tuple in the successor chain."""
    u = tuple(u)
    if len(u) != d or any(x < 0 for x in u) or any(u[k] < u[k + 1] for k in range(d - 1)):
        raise ValueError(f"not a depth-{d} counter value: {u}")
    _, index = _chain(d)
    while u not in index:
        counter_encode(d, len(_succ_chain[d][0]))
    return index[u]


def counter_size(d: int, n: int) -> int:
    """max total exponent of the first n+1 value tuples."""
    best = 0
    for m in range(n + 1):
        best = max(best, sum(counter_encode(d, m)))
    return best


def _counter_tapes(d: int) -> tuple[str, ...]:
    return tuple(f"a{k}" for k in range(1, d + 1))


def counter_value_lword(d: int, m: int) -> LWord:
    u = counter_encode(d, m)
    return LWord({t: dw(x) for t, x in zip(_counter_tapes(d), u)})


def _lword_to_tuple(d: int, w: LWord) -> Optional[tuple]:
    out = []
    for t in _counter_tapes(d):
        x = dexp(w[t])
        if x is None or x < 0:
            return None
        out.append(x)
    u = tuple(out)
    if any(u[k] < u[k + 1] for k in range(d - 1)):
        return None
    return u


def make_counter(d: int) -> StdObject:
    if d < 1:
        raise ValueError("counter depth must be >= 1")
    name = f"counter({d})"

    def build() -> StdObject:
        D = (DELTA,)
        tapes = _counter_tapes(d)
        val_hw = Hardware([(t, D) for t in tapes])
        obj = ObjectDef(name, val_hw)
        chp = make_check_pos()
        top = tapes[-1]

        if d == 1:
            chi = _inst("ch", chp)
            gc = StarGraph(val_hw, ["s", "f"], [Edge("e", "s", "f", _call(chi, "op", a=top))], instances=[chi])
            obj.add_operation(OperationDef("check", gc, ext=(), val=tapes, int_=(), start="s", finish="f"))
            chi2 = _inst("ch", chp)
            gi = StarGraph(
                val_hw,
                ["s", "q", "f"],
                [
                    Edge("e1", "s", "q", act(left={top: dw(1)})),
                    Edge("e2", "q", "f", _call(chi2, "op", a=top)),
                ],
                instances=[chi2],
            )
            obj.add_operation(OperationDef("inc", gi, ext=(), val=tapes, int_=(), start="s", finish="f"))
        else:
            sub = make_counter(d - 1)
            cp = make_copy(D)
            lo = make_le()
            chn = make_check_nonneg()
            cntr = _inst("cntr", sub, {t: t for t in tapes[:-1]})
            gc = StarGraph(val_hw, ["s", "f"], [Edge("e", "s", "f", _call(cntr, "check"))], instances=[cntr])
            obj.add_operation(OperationDef("check", gc, ext=(), val=tapes, int_=(), start="s", finish="f"))
            cntr2 = _inst("cntr", sub, {t: t for t in tapes[:-1]})
            cpi = _inst("cp", cp)
            lei = _inst("le", lo)
            chni = _inst("chn", chn)
            chpi = _inst("chp", chp)
            gi = StarGraph(
                val_hw,
                ["s", "q1", "q2", "q3", "r1", "r2", "r3", "f"],
                [
                    Edge("e1", "s", "q1", _call(chni, "op", a=top)),
                    Edge("e2", "q2", "q1", _call(cpi, "op", a=tapes[-2], b=top)),
                    Edge("e3", "q2", "q3", _call(cntr2, "inc")),
                    Edge("e4", "q3", "f", act(guard={top: EMPTY})),
                    Edge("f1", "s", "r1", _call(chni, "op", a=top)),
                    Edge("f2", "r1", "r2", _call(lei, "op", a=top, b=tapes[-2])),
                    Edge("f3", "r2", "r3", act(left={top: dw(1)})),
                    Edge("f4", "r3", "f", _call(chpi, "op", a=top)),
                ],
                instances=[cntr2, cpi, lei, chni, chpi],
            )
            obj.add_operation(OperationDef("inc", gi, ext=(), val=tapes, int_=(), start="s", finish="f"))
        obj.freeze()

        def values_fn(cap):
            out = []
            m = 0
            while True:
                u = counter_encode(d, m)
                if u[0] > cap:
                    break
                out.append(counter_value_lword(d, m))
                m += 1
            return out

        def check_sf(w1, w2):
            u = _lword_to_tuple(d, w1)
            return u is not None and u != (0,) * d and w1 == w2

        def inc_sf(w1, w2):
            u = _lword_to_tuple(d, w1)
            return u is not None and _lword_to_tuple(d, w2) == counter_succ(u)

        rels = {
            "check": Rel(
                check_sf,
                lambda w, cap: [w] if check_sf(w, w) else [],
                lambda w, cap: [w] if check_sf(w, w) else [],
            ),
            "inc": Rel(
                inc_sf,
                lambda w, cap: (
                    [LWord({t: dw(x) for t, x in zip(tapes, counter_succ(u))})]
                    if (u := _lword_to_tuple(d, w)) is not None
                    else []
                ),
                lambda w, cap: (
                    [counter_value_lword(d, counter_decode(d, u) - 1)]
                    if (u := _lword_to_tuple(d, w)) is not None and counter_decode(d, u) >= 1
                    else []
                ),
            ),
        }

        gcheck = obj.operations["check"].graph
        ginc = obj.operations["inc"].graph

        def plan_check(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or not check_sf(w1, w2):
                return None
            u = _lword_to_tuple(d, w1)
            if d == 1:
                inner = LWord({"a": dw(u[0])})
            else:
                inner = LWord({t: dw(x) for t, x in zip(tapes[:-1], u[:-1])})
            return [stepN(gcheck.edge("e"), S_MARK, F_MARK, inner, inner)]

        def plan_inc(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK):
                return None
            u = _lword_to_tuple(d, w1)
            if u is None or _lword_to_tuple(d, w2) != counter_succ(u):
                return None
            if d == 1:
                after = LWord({"a": dw(u[0] + 1)})
                return [
                    step0(ginc.edge("e1")),
                    stepN(ginc.edge("e2"), S_MARK, F_MARK, after, after),
                ]
            top_v, prev_v = u[-1], u[-2]
            tw = LWord({"a": dw(top_v)})
            if prev_v > top_v:
                ab = LWord({"a": dw(top_v), "b": dw(prev_v)})
                t2 = LWord({"a": dw(top_v + 1)})
                return [
                    stepN(ginc.edge("f1"), S_MARK, F_MARK, tw, tw),
                    stepN(ginc.edge("f2"), S_MARK, F_MARK, ab, ab),
                    step0(ginc.edge("f3")),
                    stepN(ginc.edge("f4"), S_MARK, F_MARK, t2, t2),
                ]
            prefix = u[:-1]
            before = LWord({t: dw(x) for t, x in zip(tapes[:-1], prefix)})
            after = LWord({t: dw(x) for t, x in zip(tapes[:-1], counter_succ(prefix))})
            cp_full = LWord({"a": dw(prev_v), "b": dw(top_v)})
            cp_erased = LWord({"a": dw(prev_v)})
            return [
                stepN(ginc.edge("e1"), S_MARK, F_MARK, tw, tw),
                stepN(ginc.edge("e2"), F_MARK, S_MARK, cp_full, cp_erased),
                stepN(ginc.edge("e3"), S_MARK, F_MARK, before, after),
                step0(ginc.edge("e4")),
            ]

        return StdObject(
            obj,
            make_oracle(rels, values_fn),
            {"check": plan_check, "inc": plan_inc},
            {
                "check": (lambda M: 12 * (M + 4), lambda M: 4 * (M + 3)),
                "inc": (lambda M: 60 * d * (M + 3), lambda M: 6 * (M + 3)),
            },
            certified={"check", "inc"},
        )

    return _cached(name, build)


def counter_depth_for(eps: Fraction) -> int:
    """The counter depth used at precision ε (smallest d with dε > 1)."""
    return math.floor(1 / eps) + 1


def make_counter_eps(eps) -> StdObject:
    return make_counter(counter_depth_for(Fraction(eps)))


# ---------------------------------------------------------------------------
# Weak acceptor of right-positive words
# ---------------------------------------------------------------------------


def make_waccept_rplus(alphabet: Iterable[str], eps) -> StdObject:
    A = _alpha_key(alphabet)
    eps = Fraction(eps)
    name = f"waccept_rplus({','.join(A)};{eps})"

    def build() -> StdObject:
        d = counter_depth_for(eps)
        counter = make_counter(d)
        ctapes = tuple(f"c{k}" for k in range(1, d + 1))
        D = (DELTA,)
        hw = Hardware([("a", A)] + [(t, D) for t in ctapes])
        cnt = _inst("cntr", counter, {f"a{k}": f"c{k}" for k in range(1, d + 1)})
        zero_guard = act(guard={t: EMPTY for t in ctapes})
        edges = [
            Edge("e1", "s", "q1", zero_guard),
            Edge("e2", "q2", "q1", _call(cnt, "inc")),
            Edge("e4", "q1", "q3", act(guard={"a": EMPTY})),
            Edge("e5", "q3", "q3", _call(cnt, "inc")),
            Edge("e6", "q3", "f", zero_guard),
        ]
        for x in A:
            edges.append(Edge(f"e3.{x}", "q1", "q2", act(right={"a": Word.gen(x, -1)})))
        g = StarGraph(hw, ["s", "q1", "q2", "q3", "f"], edges, instances=[cnt])
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a",), val=(), int_=ctapes, start="s", finish="f")
        obj.add_operation(op)
        obj.freeze()

        def lang(w: Word) -> bool:
            return classify_word(w, A)[2]

        rel = Rel(
            lambda w1, w2: lang(w1["a"]) and not w2["a"],
            lambda w, cap: [LWord()] if lang(w["a"]) else [],
            lambda w, cap: [LWord({"a": v}) for v in _all_words(A, cap) if lang(v)] if not w["a"] else [],
        )

        def val(m: int) -> LWord:
            u = counter_encode(d, m)
            return LWord({f"a{k+1}": dw(x) for k, x in enumerate(u)})

        def planner(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or not lang(w1["a"]) or w2["a"]:
                return None
            steps = [step0(g.edge("e1"))]
            m = 0
            for sym, sign in reversed(w1["a"].letters):
                if sign == 1:
                    steps.append(step0(g.edge(f"e3.{sym}")))
                    steps.append(stepN(g.edge("e2"), S_MARK, F_MARK, val(m), val(m + 1)))
                    m += 1
                else:
                    steps.append(stepN(g.edge("e2"), F_MARK, S_MARK, val(m), val(m - 1)))
                    steps.append(step0(g.edge(f"e3.{sym}"), forward=False))
                    m -= 1
            steps.append(step0(g.edge("e4")))
            for k in range(m, 0, -1):
                steps.append(stepN(g.edge("e5"), F_MARK, S_MARK, val(k), val(k - 1)))
            steps.append(step0(g.edge("e6")))
            return steps

        f_inc = counter.costs["inc"][0]

        def f_cost(M):
            return 3 + 2 * M + 2 * M * f_inc(counter_size(d, M) if M <= 4096 else d * M)

        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (f_cost, lambda M: 2 * M + 2 * d + 4)},
            language=lang,
        )

    return _cached(name, build)


# ---------------------------------------------------------------------------
# checker / acceptor wrappers
# ---------------------------------------------------------------------------


def checkerize(inner: StdObject, name: str) -> StdObject:
    """Wrap a weak acceptor (ext tape ``a``) into a checker of the same
    language: the input passes through unchanged."""

    def build() -> StdObject:
        inner_op = inner.obj.operations["op"]
        A = tuple(sorted(inner_op.graph.hardware.alphabets["a"]))
        cp = make_copy(A)
        hw = _hw(("a", A), ("b", A))
        cpi = _inst("cp", cp)
        wai = _inst("wa", inner)
        edges = [
            Edge("e1", "s", "q1", act(guard={"b": EMPTY})),
            Edge("e2", "q1", "q2", _call(cpi, "op", a="a", b="b")),
            Edge("e3", "q2", "q3", _call(wai, "op", a="b")),
            Edge("e4", "q3", "f", act(guard={"b": EMPTY})),
        ]
        g = StarGraph(hw, ["s", "q1", "q2", "q3", "f"], edges, instances=[cpi, wai])
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a",), val=(), int_=("b",), start="s", finish="f", immutable_ext=("a",))
        obj.add_operation(op)
        obj.freeze()

        lang = inner.language
        rel = Rel(
            lambda w1, w2: lang(w1["a"]) and w1 == w2,
            lambda w, cap: [w] if lang(w["a"]) else [],
            lambda w, cap: [w] if lang(w["a"]) else [],
        )

        def planner(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or not lang(w1["a"]) or w1 != w2:
                return None
            w = w1["a"]
            return [
                step0(g.edge("e1")),
                stepN(g.edge("e2"), S_MARK, F_MARK, LWord({"a": w}), LWord({"a": w, "b": w})),
                stepN(g.edge("e3"), S_MARK, F_MARK, LWord({"a": w}), LWord()),
                step0(g.edge("e4")),
            ]

        f_in, g_in = inner.costs["op"]
        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: f_in(M) + 2 * M + 10, lambda M: 2 * M + g_in(M) + 4)},
            language=lang,
        )

    return _cached(name, build)


def acceptorize(checker: StdObject, name: str) -> StdObject:
    """Wrap a checker into an acceptor: members erase to the trivial word."""

    def build() -> StdObject:
        ch_op = checker.obj.operations["op"]
        A = tuple(sorted(ch_op.graph.hardware.alphabets["a"]))
        cp = make_copy(A)
        hw = _hw(("a", A), ("b", A))
        cpi = _inst("cp", cp)
        chi = _inst("ch", checker)
        edges = [
            Edge("f1", "s", "s1", act(guard={"b": EMPTY})),
            Edge("f2", "s1", "s2", _call(cpi, "op", a="a", b="b")),
            Edge("f3", "s2", "s3", _call(chi, "op", a="b")),
            Edge("f5", "s3", "f", act(guard={"a": EMPTY, "b": EMPTY})),
        ]
        for x in A:
            edges.append(
                Edge(f"f4.{x}", "s3", "s3", act(right={"a": Word.gen(x, -1), "b": Word.gen(x, -1)}))
            )
        g = StarGraph(hw, ["s", "s1", "s2", "s3", "f"], edges, instances=[cpi, chi])
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a",), val=(), int_=("b",), start="s", finish="f")
        obj.add_operation(op)
        obj.freeze()

        lang = checker.language
        rel = Rel(
            lambda w1, w2: lang(w1["a"]) and not w2["a"],
            lambda w, cap: [LWord()] if lang(w["a"]) else [],
            lambda w, cap: [LWord({"a": v}) for v in _all_words(A, cap) if lang(v)] if not w["a"] else [],
            ss=lambda w1, w2: w1 == w2 or (lang(w1["a"]) and lang(w2["a"])),
            ss_succ=lambda w, cap: (
                sorted({w} | {LWord({"a": v}) for v in _all_words(A, cap) if lang(v)})
                if lang(w["a"])
                else [w]
            ),
        )

        def plan_sf(w: Word) -> list:
            steps = [
                step0(g.edge("f1")),
                stepN(g.edge("f2"), S_MARK, F_MARK, LWord({"a": w}), LWord({"a": w, "b": w})),
                stepN(g.edge("f3"), S_MARK, F_MARK, LWord({"a": w}), LWord({"a": w})),
            ]
            for sym, sign in reversed(w.letters):
                steps.append(step0(g.edge(f"f4.{sym}"), forward=(sign == 1)))
            steps.append(step0(g.edge("f5")))
            return steps

        def planner(w1, m1, w2, m2):
            if (m1, m2) == (S_MARK, F_MARK) and lang(w1["a"]) and not w2["a"]:
                return plan_sf(w1["a"])
            if (m1, m2) == (S_MARK, S_MARK) and lang(w1["a"]) and lang(w2["a"]):
                return plan_sf(w1["a"]) + reverse_plan(plan_sf(w2["a"]))
            return None

        f_in, g_in = checker.costs["op"]
        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (lambda M: f_in(M) + 4 * M + 10, lambda M: 2 * M + g_in(M) + 4)},
            language=lang,
        )

    return _cached(name, build)


def make_check_rplus(alphabet: Iterable[str], eps) -> StdObject:
    A = _alpha_key(alphabet)
    eps = Fraction(eps)
    return checkerize(make_waccept_rplus(A, eps), f"check_rplus({','.join(A)};{eps})")


# ---------------------------------------------------------------------------
# Weak acceptors (and acceptors) of positive words
# ---------------------------------------------------------------------------


def make_waccept_plus(alphabet: Iterable[str], d: int, eps) -> StdObject:
    A = _alpha_key(alphabet)
    eps = Fraction(eps)
    if d < 1:
        raise ValueError("rank must be >= 1")
    name = f"waccept_plus({','.join(A)};{d};{eps})"

    def build() -> StdObject:
        sp = make_split(A)
        ck = make_check_rplus(A, eps)
        hw = _hw(("a", A), ("b", A))
        spi = _inst("sp", sp)
        cki = _inst("ck", ck)
        insts = [spi, cki]
        edges = [
            Edge("e1", "f", "q1", act(guard={"b": EMPTY})),
            Edge("e2", "q1", "q2", _call(spi, "op", a="a", b="b")),
            Edge("e3", "q2", "q3", _call(cki, "op", a="a")),
        ]
        if d == 1:
            for x in A:
                edges.append(
                    Edge(f"e4.{x}", "q3", "s", act(guard={"b": Word.gen(x)}, right={"b": Word.gen(x, -1)}))
                )
            edges.append(Edge("e5", "s", "f", act()))
            states = ["s", "q1", "q2", "q3", "f"]
            loop_eid = "e5"
        else:
            acc = make_accept_plus_rank(A, d - 1, eps)
            aci = _inst("ac", acc)
            insts.append(aci)
            edges.append(Edge("e4", "q3", "q4", _call(aci, "op", a="b")))
            edges.append(Edge("e5", "q4", "s", act(guard={"b": EMPTY})))
            edges.append(Edge("e6", "s", "f", act()))
            states = ["s", "q1", "q2", "q3", "q4", "f"]
            loop_eid = "e6"
        g = StarGraph(hw, states, edges, instances=insts)
        obj = ObjectDef(name, Hardware([]))
        op = OperationDef("op", g, ext=("a",), val=(), int_=("b",), start="s", finish="f")
        obj.add_operation(op)
        obj.freeze()

        def lang(w: Word) -> bool:
            return classify_word(w, A)[1]

        def rp(w: Word) -> bool:
            return classify_word(w, A)[2]

        def is_ext(w1: Word, w2: Word) -> bool:
            # w2 = w1·p with w1 right-positive, p positive
            if len(w2) < len(w1) or w2.letters[: len(w1)] != w1.letters:
                return False
            return rp(w1) and all(s == 1 for _, s in w2.letters[len(w1):])

        rel = Rel(
            lambda w1, w2: lang(w1["a"]) and not w2["a"],
            lambda w, cap: [LWord()] if lang(w["a"]) else [],
            lambda w, cap: [LWord({"a": v}) for v in _all_words(A, cap) if lang(v)] if not w["a"] else [],
            ss=lambda w1, w2: w1 == w2 or is_ext(w1["a"], w2["a"]) or is_ext(w2["a"], w1["a"]),
            ss_succ=lambda w, cap: sorted(
                {w}
                | {LWord({"a": v}) for v in _all_words(A, cap) if is_ext(w["a"], v) or is_ext(v, w["a"])}
            ),
        )

        def planner(w1, m1, w2, m2):
            if (m1, m2) != (S_MARK, F_MARK) or not lang(w1["a"]) or w2["a"]:
                return None
            steps = []
            cur = w1["a"]
            n = len(cur)
            t = max(1, math.ceil(n ** ((d - 1) / d))) if d > 1 else 1
            while cur:
                m = len(cur)
                tt = 1 if d == 1 else min(t, m)
                p = cur.suffix(tt)
                u = Word(cur.letters[: m - tt])
                steps.append(step0(g.edge(loop_eid)))
                steps.append(step0(g.edge("e1")))
                steps.append(
                    stepN(g.edge("e2"), S_MARK, F_MARK, LWord({"a": cur, "b": EMPTY}), LWord({"a": u, "b": p}))
                )
                steps.append(stepN(g.edge("e3"), S_MARK, F_MARK, LWord({"a": u}), LWord({"a": u})))
                if d == 1:
                    steps.append(step0(g.edge(f"e4.{p.letters[0][0]}")))
                else:
                    steps.append(stepN(g.edge("e4"), S_MARK, F_MARK, LWord({"a": p}), LWord()))
                    steps.append(step0(g.edge("e5")))
                cur = u
            steps.append(step0(g.edge(loop_eid)))
            return steps

        f_ck = ck.costs["op"][0]
        f_acc = make_accept_plus_rank(A, d - 1, eps).costs["op"][0] if d > 1 else None

        def f_cost(M):
            total = 1
            n = M
            t = max(1, math.ceil(M ** ((d - 1) / d))) if d > 1 else 1
            while n > 0:
                tt = 1 if d == 1 else min(t, n)
                total += 5 + 2 * n + 2 + f_ck(n - tt)
                total += f_acc(tt) if d > 1 else 1
                n -= tt
            return total

        g_ck = ck.costs["op"][1]
        return StdObject(
            obj,
            make_oracle({"op": rel}),
            {"op": planner},
            {"op": (f_cost, lambda M: 2 * M + g_ck(M) + 4)},
            language=lang,
        )

    return _cached(name, build)


def make_accept_plus_rank(alphabet: Iterable[str], d: int, eps) -> StdObject:
    A = _alpha_key(alphabet)
    eps = Fraction(eps)
    inner = make_waccept_plus(A, d, eps)
    ch = checkerize(inner, f"check_plus({','.join(A)};{d};{eps})")
    return acceptorize(ch, f"accept_plus({','.join(A)};{d};{eps})")


def accept_plus_rank_for(eps: Fraction) -> int:
    """The weak-acceptor rank used at precision ε (smallest d ≥ 2/ε)."""
    return math.ceil(Fraction(2) / eps)


def make_accept_plus(alphabet: Iterable[str], eps) -> StdObject:
    """An acceptor of the positive words with time exponent 1+ε."""
    A = _alpha_key(alphabet)
    eps = Fraction(eps)
    d = accept_plus_rank_for(eps)
    inner = make_waccept_plus(A, d, eps / 2)
    ch = checkerize(inner, f"check_aplus({','.join(A)};{eps})")
    return acceptorize(ch, f"accept_aplus({','.join(A)};{eps})")


def make_check_aplus(alphabet: Iterable[str], eps) -> StdObject:
    """A checker of the positive words with time exponent 1+ε."""
    A = _alpha_key(alphabet)
    eps = Fraction(eps)
    d = accept_plus_rank_for(eps)
    return checkerize(make_waccept_plus(A, d, eps / 2), f"check_aplus({','.join(A)};{eps})")


# ---------------------------------------------------------------------------
# Fixtures: the step-two counter object and the synchronized-triple graph
# ---------------------------------------------------------------------------


def make_obj0() -> StdObject:
    """A value object holding an even power of δ, incremented by two."""
    name = "obj0"

    def build() -> StdObject:
        D = (DELTA,)
        val_hw = Hardware([("d", D)])
        obj = ObjectDef(name, val_hw)
        g_check = StarGraph(val_hw, ["s", "f"], [Edge("e", "s", "f", act(guard={"d": EMPTY}))])
        obj.add_operation(OperationDef("check0", g_check, ext=(), val=("d",), int_=(), start="s", finish="f"))
        g_inc = StarGraph(val_hw, ["s", "f"], [Edge("e", "s", "f", act(left={"d": dw(2)}))])
        obj.add_operation(OperationDef("inc2", g_inc, ext=(), val=("d",), int_=(), start="s", finish="f"))
        obj.freeze()

        def even(w):
            k = dexp(w["d"])
            return k is not None and k % 2 == 0

        rels = {
            "check0": Rel(
                lambda w1, w2: not w1["d"] and not w2["d"],
                lambda w, cap: [LWord()] if not w["d"] else [],
                lambda w, cap: [LWord()] if not w["d"] else [],
            ),
            "inc2": Rel(
                lambda w1, w2: even(w1) and w2["d"] == dw(2) * w1["d"],
                lambda w, cap: [LWord({"d": dw(2) * w["d"]})] if even(w) else [],
                lambda w, cap: [LWord({"d": dw(-2) * w["d"]})] if even(w) else [],
            ),
        }

        def values_fn(cap):
            return sorted(LWord({"d": dw(2 * k)}) for k in range(-(cap // 2), cap // 2 + 1))

        return StdObject(
            obj,
            make_oracle(rels, values_fn),
            {
                "check0": lambda w1, m1, w2, m2: (
                    [step0(g_check.edge("e"))] if (m1, m2) == (S_MARK, F_MARK) and not w1["d"] else None
                ),
                "inc2": lambda w1, m1, w2, m2: (
                    [step0(g_inc.edge("e"))] if (m1, m2) == (S_MARK, F_MARK) else None
                ),
            },
            {"check0": (lambda M: 1, lambda M: M), "inc2": (lambda M: 1, lambda M: M + 2)},
            certified={"check0", "inc2"},
        )

    return _cached(name, build)


def make_syn() -> StdObject:
    """Fixture: a value object synchronizing three input words with a
    shared step-two counter, exercising nested instances."""
    name = "syn"

    def build() -> StdObject:
        obj0 = make_obj0()
        A, B, C = ("x",), ("y",), ("z",)
        cpa = make_copy(A)
        cpb = make_copy(B)
        D = (DELTA,)
        val_hw = Hardware([("d'", D)])
        hw = Hardware(
            [("a", A), ("b", B), ("c", C), ("d'", D), ("a'", A), ("b'", B), ("d''", D)]
        )
        c_ab = _inst("C_ab", obj0, {"d": "d'"})
        c_c = _inst("C_c", obj0, {"d": "d''"})
        cai = _inst("cpa", cpa)
        cbi = _inst("cpb", cpb)
        x, y, z = Word.gen("x"), Word.gen("y"), Word.gen("z")
        edges = [
            Edge("e1", "s", "s1", act(guard={"a'": EMPTY, "b'": EMPTY, "d'": EMPTY, "d''": EMPTY})),
            Edge("e2", "s1", "s2", _call(cai, "op", a="a", b="a'")),
            Edge("e3", "s2", "s3", _call(cbi, "op", a="b", b="b'")),
            Edge("e4.x", "s3", "s4", act(right={"a'": x.inv()})),
            Edge("e4i", "s4", "s3", _call(c_ab, "inc2")),
            Edge("eq", "s3", "t1", act(guard={"a'": EMPTY})),
            Edge("t12.y", "t1", "t2", act(right={"b'": y.inv()})),
            Edge("t21", "t2", "t1", _call(c_ab, "inc2")),
            Edge("t13", "t1", "t3", act(guard={"b'": EMPTY})),
            Edge("t34.z", "t3", "t4", act(right={"c": z.inv()})),
            Edge("t43", "t4", "t3", _call(c_c, "inc2")),
            Edge("t3s5", "t3", "s5", act(guard={"c": EMPTY})),
            Edge("s5t5", "s5", "t5", _call(c_c, "inc2")),
            Edge("t5s5", "t5", "s5", _call(c_ab, "inc2")),
            Edge("e5", "s5", "t6", _call(c_ab, "check0")),
            Edge("e6", "t6", "f", act(guard={"d''": EMPTY})),
        ]
        states = ["s", "s1", "s2", "s3", "s4", "t1", "t2", "t3", "t4", "s5", "t5", "t6", "f"]
        g = StarGraph(hw, states, edges, instances=[c_ab, c_c, cai, cbi])
        obj = ObjectDef(name, val_hw)
        op = OperationDef(
            "syn",
            g,
            ext=("a", "b", "c"),
            val=("d'",),
            int_=("a'", "b'", "d''"),
            start="s",
            finish="f",
            immutable_ext=("a", "b"),
        )
        obj.add_operation(op)
        obj.freeze()

        def sigma(w):
            return sum(s for _, s in w.letters)

        def balanced(w):
            return sigma(w["a"]) + sigma(w["b"]) == sigma(w["c"])

        rel = Rel(
            lambda w1, w2: (
                not w1["d'"]
                and balanced(w1)
                and w2 == LWord({"a": w1["a"], "b": w1["b"]})
            ),
            lambda w, cap: (
                [LWord({"a": w["a"], "b": w["b"]})]
                if balanced(w) and not w["d'"]
                else []
            ),
            lambda w, cap: (
                [
                    LWord(
                        {
                            "a": w["a"],
                            "b": w["b"],
                            "c": Word.gen("z", sigma(w["a"]) + sigma(w["b"])),
                        }
                    )
                ]
                if not w["c"]
                and not w["d'"]
                and abs(sigma(w["a"]) + sigma(w["b"])) <= cap
                else []
            ),
        )
        return StdObject(obj, make_oracle({"syn": rel}), {}, {})

    return _cached(name, build)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

_NAME_BUILDERS = {
    "copy": lambda args: make_copy(args),
    "split": lambda args: make_split(args),
    "swap": lambda args: make_swap(args),
}


def lookup_object(name: str) -> StdObject:
    """Resolve a canonical library name (as printed in graph files)."""
    name = name.strip()
    if name in _CACHE:
        return _CACHE[name]
    if "(" in name and name.endswith(")"):
        head, rest = name.split("(", 1)
        args = rest[:-1]
        if head in _NAME_BUILDERS:
            return _NAME_BUILDERS[head](tuple(a.strip() for a in args.split(",")))
        if head == "counter":
            return make_counter(int(args))
        if head == "counter_eps":
            return make_counter_eps(Fraction(args))
        parts = [p.strip() for p in args.split(";")]
        alpha = tuple(a.strip() for a in parts[0].split(","))
        if head == "waccept_rplus":
            return make_waccept_rplus(alpha, Fraction(parts[1]))
        if head == "check_rplus":
            return make_check_rplus(alpha, Fraction(parts[1]))
        if head == "waccept_plus":
            return make_waccept_plus(alpha, int(parts[1]), Fraction(parts[2]))
        if head == "accept_plus":
            return make_accept_plus_rank(alpha, int(parts[1]), Fraction(parts[2]))
        if head == "accept_aplus":
            return make_accept_plus(alpha, Fraction(parts[1]))
        if head == "check_aplus":
            return make_check_aplus(alpha, Fraction(parts[1]))
    if name == "div2":
        return make_div2()
    if name == "check_pos":
        return make_check_pos()
    if name == "check_nonneg":
        return make_check_nonneg()
    if name == "le":
        return make_le()
    if name == "obj0":
        return make_obj0()
    if name == "syn":
        return make_syn()
    raise KeyError(f"unknown library object {name!r}")


def stdlib_catalog() -> dict[str, StdObject]:
    """All currently built library objects, by canonical name."""
    return dict(_CACHE)
