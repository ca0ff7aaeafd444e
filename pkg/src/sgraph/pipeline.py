"""Compiling a Turing rewriting system into a recognizing object.

The chain built here: per-tape *tape objects* whose values are tuples of
positive words (read off by concatenation), an order-preserving
*rearranger* of two tapes, the iterated higher-rank tape construction,
and finally the weak acceptor that walks the rewriting system's graph
with one tape-object call per tape per step.  Wrapping the weak acceptor
with the checker/acceptor combinators from the gadget library yields an
acceptor of the system's language whose planner-driven computations have
time exponent 1 + ε.

Planner economics: within a run, long words are split so that the bulk
of the content sits in shallow tapes (cheap to leave alone) while the
actively rewritten suffix lives deep (cheap to check).  The sequential
planner chooses those splits block-by-block; the per-call planners then
route each step either through the cheap inner path (split unchanged) or
through one full rearrangement (block boundary).
"""

from __future__ import annotations

import hashlib
import math
import re as _regex
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from sgraph.gadgets import make_check_aplus, make_split, make_swap
from sgraph.graph0 import Action0, Edge, act
from sgraph.plans import (
    Plan,
    PlanError,
    PlanStep,
    StdObject,
    lower_run,
    reverse_plan,
    step0,
    stepN,
)
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
from sgraph.turing import (
    EXACT,
    MATCHING,
    IComputation,
    TRS,
    TRSComputation,
    TuringFragment,
    matching,
    project_i_computation,
    trs_recognize_bounded,
)
from sgraph.words import EMPTY, Hardware, LWord, Word, classify_word


# ---------------------------------------------------------------------------
# Word helpers
# ---------------------------------------------------------------------------


def is_positive(w: Word, alphabet: Iterable[str]) -> bool:
    return classify_word(w, alphabet)[1]


def has_suffix(w: Word, u: Word) -> bool:
    if len(u) > len(w):
        return False
    return not u or w.letters[len(w) - len(u):] == u.letters


def drop_suffix(w: Word, u: Word) -> Word:
    return Word(w.letters[: len(w) - len(u)])


def common_prefix_len(words: Sequence[Word]) -> int:
    plen = min(len(w) for w in words)
    for w in words[1:]:
        while plen and w.letters[:plen] != words[0].letters[:plen]:
            plen -= 1
    return plen


def apply_fragment(frag: TuringFragment, w: Word) -> Optional[Word]:
    return frag.apply(w)


# ---------------------------------------------------------------------------
# The rearranger re(a, b): redistribute two positive tapes, keeping the
# concatenated content fixed
# ---------------------------------------------------------------------------


_RE_CACHE: dict[str, StdObject] = {}


def make_re(alphabet: Iterable[str], eps) -> StdObject:
    A = tuple(sorted(alphabet))
    eps = Fraction(eps)
    name = f"re({','.join(A)};{eps})"
    if name in _RE_CACHE:
        return _RE_CACHE[name]

    ck = make_check_aplus(A, eps)
    sp = make_split(A)
    hw = Hardware([("a", A), ("b", A)])
    cki = InstanceDef.make("ck", ck.obj, {})
    spi = InstanceDef.make("sp", sp.obj, {})
    edges = [
        Edge("e1", "s", "n1", ActionN.make(cki, "op", {"a": "a"})),
        Edge("e2", "n1", "n2", ActionN.make(cki, "op", {"a": "b"})),
        Edge("e3", "n2", "n3", ActionN.make(spi, "op", {"a": "a", "b": "b"})),
        Edge("e4", "n4", "n3", ActionN.make(cki, "op", {"a": "b"})),
        Edge("e5", "f", "n4", ActionN.make(cki, "op", {"a": "a"})),
    ]
    g = StarGraph(hw, ["s", "n1", "n2", "n3", "n4", "f"], edges, instances=[cki, spi])
    obj = ObjectDef(name, Hardware([]))
    op = OperationDef("op", g, ext=("a", "b"), val=(), int_=(), start="s", finish="f")
    obj.add_operation(op)
    obj.freeze()

    def ok(w: LWord) -> bool:
        return is_positive(w["a"], A) and is_positive(w["b"], A)

    def related(w1: LWord, w2: LWord) -> bool:
        return ok(w1) and ok(w2) and w1["a"] * w1["b"] == w2["a"] * w2["b"]

    def resplits(w: LWord, cap: int) -> list:
        if not ok(w):
            return []
        prod = w["a"] * w["b"]
        out = []
        for cut in range(len(prod) + 1):
            u, v = Word(prod.letters[:cut]), Word(prod.letters[cut:])
            if len(u) <= cap and len(v) <= cap:
                out.append(LWord({"a": u, "b": v}))
        return out

    def member(w1, m1, w2, m2):
        if w1 == w2:
            return True
        return related(w1, w2)

    def succ(w1, m1, m2, cap):
        out = {w1} if w1.size() <= cap * 2 else set()
        out.update(resplits(w1, cap))
        return sorted(out)

    def plan_sf(w1: LWord, w2: LWord) -> Plan:
        lca = LWord({"a": w1["a"]})
        lcb = LWord({"b": EMPTY})
        return [
            stepN(g.edge("e1"), S_MARK, F_MARK, LWord({"a": w1["a"]}), LWord({"a": w1["a"]})),
            stepN(g.edge("e2"), S_MARK, F_MARK, LWord({"a": w1["b"]}), LWord({"a": w1["b"]})),
            stepN(g.edge("e3"), S_MARK, F_MARK, w1, w2),
            stepN(g.edge("e4"), F_MARK, S_MARK, LWord({"a": w2["b"]}), LWord({"a": w2["b"]})),
            stepN(g.edge("e5"), F_MARK, S_MARK, LWord({"a": w2["a"]}), LWord({"a": w2["a"]})),
        ]

    def planner(w1, m1, w2, m2):
        if not related(w1, w2):
            return None
        if (m1, m2) == (S_MARK, F_MARK):
            return plan_sf(w1, w2)
        if m1 == m2 and w1 != w2:
            if m1 == S_MARK:
                return plan_sf(w1, w2) + reverse_plan(plan_sf(w2, w2))
            return reverse_plan(plan_sf(w1, w1)) + plan_sf(w1, w2)
        return None

    f_ck, g_ck = ck.costs["op"]
    std = StdObject(
        obj,
        FnOracle({"op": member}, {"op": succ}),
        {"op": planner},
        {"op": (lambda M: 4 * f_ck(M) + 2 * M + 4, lambda M: 2 * M + g_ck(M) + 2)},
        )
    _RE_CACHE[name] = std
    return std


# ---------------------------------------------------------------------------
# Tape objects
# ---------------------------------------------------------------------------


def frag_key(frag: TuringFragment) -> str:
    u = "".join(s for s, _ in frag.u.letters)
    v = "".join(s for s, _ in frag.v.letters)
    return f"{frag.kind}:{u}>{v}"


def value_tapes(rank: int) -> tuple[str, ...]:
    return tuple(f"a{j}" for j in range(1, rank + 1))


def value_word(v: LWord, rank: int) -> Word:
    out = EMPTY
    for j in range(1, rank + 1):
        out = out * v[f"a{j}"]
    return out


def canon_value(w: Word, rank: int) -> LWord:
    """All content on the deepest tape (the cheapest position to edit)."""
    return LWord({f"a{rank}": w}) if w else LWord()


_VALUE_TAPE = _regex.compile(r"^a\d+$")


def shift_up(v: LWord) -> LWord:
    """Rename a_j -> a_{j+1} (outer coordinates of the nested instance)."""
    return LWord(
        {f"a{int(t[1:]) + 1}": w for t, w in v.entries if _VALUE_TAPE.match(t)}
    )


def shift_down(v: LWord) -> LWord:
    return LWord(
        {f"a{int(t[1:]) - 1}": w for t, w in v.entries if _VALUE_TAPE.match(t) and t != "a1"}
    )


@dataclass
class TuringTapeObject:
    """A tape object of a fixed rank for one tape of a rewriting system."""

    std: StdObject
    rank: int
    alphabet: tuple[str, ...]
    eps: Fraction
    frags: dict  # frag key -> TuringFragment
    frag_ops: dict  # frag key -> operation name

    def op_for(self, frag: TuringFragment) -> str:
        return self.frag_ops[frag_key(frag)]

    def word_of(self, v: LWord) -> Word:
        return value_word(v, self.rank)


_TT_CACHE: dict[str, TuringTapeObject] = {}


def _frag_sig(frags: Sequence[TuringFragment]) -> tuple[str, ...]:
    return tuple(sorted({frag_key(f) for f in frags}))


def _tt_value_member(alphabet, rank):
    def ok(v: LWord) -> bool:
        return all(is_positive(v[t], alphabet) for t in value_tapes(rank))

    return ok


def _enumerate_values(alphabet, rank, cap):
    """All value tuples with total content within the cap (positive words)."""
    words = [w for w in _all_words(alphabet, cap) if is_positive(w, alphabet)]
    out = [LWord()]
    for t in value_tapes(rank):
        nxt = []
        for v in out:
            for w in words:
                if v.size() + len(w) <= cap:
                    nxt.append(v.set(t, w))
        out = nxt
    return sorted(set(out))


def _tt_oracle(alphabet, rank, frag_map):
    """The exact relations of a rank-``rank`` tape object."""
    tapes = value_tapes(rank)

    def wd(v: LWord) -> Word:
        return value_word(v, rank)

    valid = _tt_value_member(alphabet, rank)

    def set_member(w1, m1, w2, m2):
        v1, v2 = w1.restrict(set(tapes)), w2.restrict(set(tapes))
        if not (valid(v1) and valid(v2) and is_positive(w1["b"], alphabet) and is_positive(w2["b"], alphabet)):
            return False
        if m1 == m2:
            if w1 == w2:
                return True
            if (m1, m2) == (F_MARK, F_MARK):
                return not w1["b"] and not w2["b"] and wd(v1) == wd(v2)
            return False
        if m1 == F_MARK:  # symmetric closure
            w1, w2, v1, v2 = w2, w1, v2, v1
        return not v1.size() and not w2["b"] and wd(v2) == w1["b"]

    def set_succ(w1, m1, m2, cap):
        out = {w1} if w1.size() <= cap * rank else set()
        v1 = w1.restrict(set(tapes))
        if m1 == m2 == F_MARK and not w1["b"]:
            for v in _enumerate_values(alphabet, rank, cap):
                if wd(v) == wd(v1):
                    out.add(v)
        if m1 != m2:
            if m1 == S_MARK and not v1.size():
                for v in _enumerate_values(alphabet, rank, cap):
                    if wd(v) == w1["b"]:
                        out.add(v)
            if m1 == F_MARK and not w1["b"]:
                out.add(LWord({"b": wd(v1)}))
        return sorted(out)

    fns_m = {"set": set_member}
    fns_s = {"set": set_succ}

    for key, frag in frag_map.items():
        opname = frag_opname(key, frag_map)

        def q_member(w1, m1, w2, m2, frag=frag):
            v1, v2 = w1, w2
            if not (valid(v1) and valid(v2)):
                return False
            if m1 == m2:
                return wd(v1) == wd(v2)
            if m1 == F_MARK:
                v1, v2 = v2, v1
            return frag.apply(wd(v1)) == wd(v2)

        def q_succ(w1, m1, m2, cap, frag=frag):
            out = set()
            if m1 == m2:
                targets = {wd(w1)}
            else:
                res = frag.apply(wd(w1)) if m1 == S_MARK else None
                if m1 == F_MARK:
                    res = frag.inverse().apply(wd(w1))
                targets = {res} if res is not None else set()
            for v in _enumerate_values(alphabet, rank, cap):
                if wd(v) in targets:
                    out.add(v)
            return sorted(out)

        fns_m[opname] = q_member
        fns_s[opname] = q_succ

    def values_fn(cap):
        return _enumerate_values(alphabet, rank, cap)

    return FnOracle(fns_m, fns_s, values_fn)


def frag_opname(key: str, frag_map: Mapping[str, TuringFragment]) -> str:
    return f"Q{sorted(frag_map).index(key)}"


def make_ttape_rank(alphabet, frags: Sequence[TuringFragment], rank: int, eps) -> TuringTapeObject:
    """The tape object of the given rank (rank 1 directly, else iterated)."""
    A = tuple(sorted(alphabet))
    eps = Fraction(eps)
    sig = _frag_sig(frags)
    cache_key = f"ttape({','.join(A)};{'|'.join(sig)};{rank};{eps})"
    if cache_key in _TT_CACHE:
        return _TT_CACHE[cache_key]
    frag_map = {}
    for f in frags:
        frag_map.setdefault(frag_key(f), TuringFragment(f.kind, f.u, f.v))
    if rank == 1:
        tt = _make_ttape1(A, frag_map, eps, cache_key)
    else:
        tt = _make_ttape_step(A, frag_map, rank, eps, cache_key)
    _TT_CACHE[cache_key] = tt
    return tt


def _make_ttape1(A, frag_map, eps, cache_key) -> TuringTapeObject:
    ck = make_check_aplus(A, eps)
    sw = make_swap(A)
    obj = ObjectDef(f"ttape1[{cache_key}]", Hardware([("a1", A)]))
    cki = InstanceDef.make("ck", ck.obj, {})
    swi = InstanceDef.make("sw", sw.obj, {})

    hw_set = Hardware([("a1", A), ("b", A)])
    set_edges = [
        Edge("e1", "s", "q", ActionN.make(cki, "op", {"a": "b"})),
        Edge("e2", "q", "f", ActionN.make(swi, "op", {"a": "b", "b": "a1"})),
    ]
    g_set = StarGraph(hw_set, ["s", "q", "f"], set_edges, instances=[cki, swi])
    obj.add_operation(
        OperationDef("set", g_set, ext=("b",), val=("a1",), int_=(), start="s", finish="f")
    )

    f_ck, g_ck = ck.costs["op"]
    planners: dict[str, Callable] = {}
    costs: dict[str, tuple] = {
        "set": (lambda M: f_ck(M) + 2 * M + 6, lambda M: 2 * M + g_ck(M) + 2)
    }

    def set_planner(w1, m1, w2, m2):
        if (m1, m2) != (S_MARK, F_MARK) or w1["a1"] or w2["b"]:
            return None
        w = w1["b"]
        return [
            stepN(g_set.edge("e1"), S_MARK, F_MARK, LWord({"a": w}), LWord({"a": w})),
            stepN(g_set.edge("e2"), S_MARK, F_MARK, LWord({"a": w}), LWord({"b": w})),
        ]

    planners["set"] = set_planner

    hw_q = Hardware([("a1", A)])
    frag_ops = {}
    for key, frag in frag_map.items():
        opname = frag_opname(key, frag_map)
        frag_ops[key] = opname
        if frag.kind == EXACT:
            edges = [Edge("e", "s", "f", act(guard={"a1": frag.u}, right={"a1": frag.u.inv() * frag.v}))]
            g_q = StarGraph(hw_q, ["s", "f"], edges)

            def q_planner(w1, m1, w2, m2, g_q=g_q, frag=frag):
                if (m1, m2) != (S_MARK, F_MARK) or w1["a1"] != frag.u or w2["a1"] != frag.v:
                    return None
                return [step0(g_q.edge("e"))]

        else:
            edges = [
                Edge("e1", "s", "q1", act(right={"a1": frag.u.inv()})),
                Edge("e2", "q1", "q2", ActionN.make(cki, "op", {"a": "a1"})),
                Edge("e3", "q2", "f", act(right={"a1": frag.v})),
            ]
            g_q = StarGraph(hw_q, ["s", "q1", "q2", "f"], edges, instances=[cki])

            def q_planner(w1, m1, w2, m2, g_q=g_q, frag=frag):
                if (m1, m2) != (S_MARK, F_MARK):
                    return None
                w = w1["a1"]
                if not has_suffix(w, frag.u):
                    return None
                stem = drop_suffix(w, frag.u)
                if w2["a1"] != stem * frag.v:
                    return None
                return [
                    step0(g_q.edge("e1")),
                    stepN(g_q.edge("e2"), S_MARK, F_MARK, LWord({"a": stem}), LWord({"a": stem})),
                    step0(g_q.edge("e3")),
                ]

        obj.add_operation(
            OperationDef(opname, g_q, ext=(), val=("a1",), int_=(), start="s", finish="f")
        )
        planners[opname] = q_planner
        costs[opname] = (lambda M: f_ck(M) + 4, lambda M: M + g_ck(M))
    obj.freeze()

    std = StdObject(obj, _tt_oracle(A, 1, frag_map), planners, costs)
    return TuringTapeObject(std, 1, A, eps, frag_map, frag_ops)


def _make_irt(A, frag_map, rank_inner: int, eps, cache_key) -> StdObject:
    """The intermediate rearranging object over rank_inner + 1 value tapes.

    Operations: ``re`` (redistribute the full content), ``set0`` (move the
    external tape onto the shallow value tape), and one pass-through per
    rewriting fragment acting on the nested tape object.
    """
    inner = make_ttape_rank(A, list(frag_map.values()), rank_inner, eps)
    d1 = rank_inner + 1
    tapes = value_tapes(d1)
    rea = make_re(A, eps)
    ck = make_check_aplus(A, eps)
    sw = make_swap(A)

    obj = ObjectDef(f"irt{rank_inner}[{cache_key}]", Hardware([(t, A) for t in tapes]))
    tti = InstanceDef.make("tt", inner.std.obj, {f"a{j}": f"a{j + 1}" for j in range(1, rank_inner + 1)})
    rei = InstanceDef.make("rea", rea.obj, {})
    cki = InstanceDef.make("ck", ck.obj, {})
    swi = InstanceDef.make("sw", sw.obj, {})

    # -- re() ---------------------------------------------------------
    hw_re = Hardware([(t, A) for t in tapes] + [("c", A)])
    re_edges = [
        Edge("e0", "s", "f", act()),
        Edge("e1", "s", "q1", act(guard={"c": EMPTY})),
        Edge("e2", "q2", "q1", ActionN.make(tti, "set", {"b": "c"})),
        Edge("e3", "q2", "q3", ActionN.make(rei, "op", {"a": "a1", "b": "c"})),
        Edge("e4", "q3", "q4", ActionN.make(tti, "set", {"b": "c"})),
        Edge("e5", "q4", "f", act(guard={"c": EMPTY})),
    ]
    g_re = StarGraph(
        hw_re, ["s", "q1", "q2", "q3", "q4", "f"], re_edges, instances=[tti, rei]
    )
    obj.add_operation(
        OperationDef("re", g_re, ext=(), val=tapes, int_=("c",), start="s", finish="f")
    )

    def inner_of(v: LWord) -> LWord:
        return shift_down(v)

    def inner_word(v: LWord) -> Word:
        return value_word(shift_down(v), rank_inner)

    def full_word(v: LWord) -> Word:
        return value_word(v, d1)

    def re_sf(v1: LWord, v2: LWord) -> Plan:
        if v1 == v2:
            return [step0(g_re.edge("e0"))]
        w1i, w2i = inner_word(v1), inner_word(v2)
        return [
            step0(g_re.edge("e1")),
            stepN(g_re.edge("e2"), F_MARK, S_MARK, inner_of(v1), LWord({"b": w1i})),
            stepN(
                g_re.edge("e3"),
                S_MARK,
                F_MARK,
                LWord({"a": v1["a1"], "b": w1i}),
                LWord({"a": v2["a1"], "b": w2i}),
            ),
            stepN(g_re.edge("e4"), S_MARK, F_MARK, LWord({"b": w2i}), inner_of(v2)),
            step0(g_re.edge("e5")),
        ]

    def re_planner(w1, m1, w2, m2):
        if full_word(w1) != full_word(w2):
            return None
        if (m1, m2) == (S_MARK, F_MARK):
            return re_sf(w1, w2)
        if m1 == m2 == S_MARK:
            return re_sf(w1, w2) + [step0(g_re.edge("e0"), forward=False)]
        if m1 == m2 == F_MARK:
            return [step0(g_re.edge("e0"), forward=False)] + re_sf(w1, w2)
        return None

    def re_member(w1, m1, w2, m2):
        ok = _tt_value_member(A, d1)
        return ok(w1) and ok(w2) and full_word(w1) == full_word(w2)

    def re_succ(w1, m1, m2, cap):
        out = {w1}
        for v in _enumerate_values(A, d1, cap):
            if full_word(v) == full_word(w1):
                out.add(v)
        return sorted(out)

    # -- set0(b) ------------------------------------------------------
    hw_s0 = Hardware([(t, A) for t in tapes] + [("b", A)])
    s0_edges = [
        Edge("e1", "s", "q", ActionN.make(cki, "op", {"a": "b"})),
        Edge("e2", "q", "f", ActionN.make(swi, "op", {"a": "b", "b": "a1"})),
    ]
    g_s0 = StarGraph(hw_s0, ["s", "q", "f"], s0_edges, instances=[cki, swi])
    obj.add_operation(
        OperationDef("set0", g_s0, ext=("b",), val=tapes, int_=(), start="s", finish="f")
    )

    def s0_planner(w1, m1, w2, m2):
        if (m1, m2) != (S_MARK, F_MARK) or w1["a1"] or w2["b"]:
            return None
        if shift_down(w1) != shift_down(w2) or w2["a1"] != w1["b"]:
            return None
        w = w1["b"]
        return [
            stepN(g_s0.edge("e1"), S_MARK, F_MARK, LWord({"a": w}), LWord({"a": w})),
            stepN(g_s0.edge("e2"), S_MARK, F_MARK, LWord({"a": w}), LWord({"b": w})),
        ]

    def s0_member(w1, m1, w2, m2):
        ok = _tt_value_member(A, d1)
        v1, v2 = w1.restrict(set(tapes)), w2.restrict(set(tapes))
        if not (ok(v1) and ok(v2) and is_positive(w1["b"], A) and is_positive(w2["b"], A)):
            return False
        if m1 == m2:
            return w1 == w2
        if m1 == F_MARK:
            w1, w2 = w2, w1
        return (
            not w1["a1"]
            and not w2["b"]
            and w2["a1"] == w1["b"]
            and shift_down(w1) == shift_down(w2)
        )

    def s0_succ(w1, m1, m2, cap):
        out = {w1}
        if m1 != m2:
            if m1 == S_MARK and not w1["a1"]:
                out.add(w1.set("b", EMPTY).set("a1", w1["b"]))
            if m1 == F_MARK and not w1["b"]:
                out.add(w1.set("a1", EMPTY).set("b", w1["a1"]))
        return sorted(out)

    # -- fragment pass-throughs --------------------------------------
    planners = {"re": re_planner, "set0": s0_planner}
    members = {"re": re_member, "set0": s0_member}
    succs = {"re": re_succ, "set0": s0_succ}
    f_re, g_re_cost = rea.costs["op"]
    f_ck, g_ck = ck.costs["op"]
    costs = {
        "re": (lambda M: 2 * inner.std.costs["set"][0](M) + f_re(M) + 3, lambda M: 2 * M + g_re_cost(M) + 2),
        "set0": (lambda M: f_ck(M) + 2 * M + 6, lambda M: 2 * M + g_ck(M) + 2),
    }

    hw_q = Hardware([(t, A) for t in tapes])
    for key, frag in frag_map.items():
        opname = frag_opname(key, frag_map)
        inner_op = inner.frag_ops[key]
        q_edges = [Edge("e", "s", "f", ActionN.make(tti, inner_op, {}))]
        g_q = StarGraph(hw_q, ["s", "f"], q_edges, instances=[tti])
        obj.add_operation(
            OperationDef(opname, g_q, ext=(), val=tapes, int_=(), start="s", finish="f")
        )

        def q_planner(w1, m1, w2, m2, g_q=g_q):
            if w1["a1"] != w2["a1"]:
                return None
            return [stepN(g_q.edge("e"), m1, m2, shift_down(w1), shift_down(w2))]

        def q_member(w1, m1, w2, m2, frag=frag):
            ok = _tt_value_member(A, d1)
            if not (ok(w1) and ok(w2)) or w1["a1"] != w2["a1"]:
                return False
            if m1 == m2:
                return inner_word(w1) == inner_word(w2)
            u1, u2 = (w1, w2) if m1 == S_MARK else (w2, w1)
            return frag.apply(inner_word(u1)) == inner_word(u2)

        def q_succ(w1, m1, m2, cap, frag=frag):
            out = set()
            if m1 == m2:
                targets = {inner_word(w1)}
            else:
                f = frag if m1 == S_MARK else frag.inverse()
                res = f.apply(inner_word(w1))
                targets = {res} if res is not None else set()
            for v in _enumerate_values(A, d1, cap):
                if v["a1"] == w1["a1"] and inner_word(v) in targets:
                    out.add(v)
            return sorted(out)

        planners[opname] = q_planner
        members[opname] = q_member
        succs[opname] = q_succ
        f_in, g_in = inner.std.costs[inner_op]
        costs[opname] = (lambda M, f_in=f_in: f_in(M) + 1, lambda M, g_in=g_in: M + g_in(M))

    obj.freeze()

    def values_fn(cap):
        return _enumerate_values(A, d1, cap)

    return StdObject(obj, FnOracle(members, succs, values_fn), planners, costs)


def _make_ttape_step(A, frag_map, rank: int, eps, cache_key) -> TuringTapeObject:
    """Wrap the intermediate rearranging object into the next-rank tape."""
    irt = _make_irt(A, frag_map, rank - 1, eps, cache_key)
    tapes = value_tapes(rank)
    obj = ObjectDef(f"ttape{rank}[{cache_key}]", Hardware([(t, A) for t in tapes]))
    irti = InstanceDef.make("irt", irt.obj, {t: t for t in tapes})

    def full_word(v: LWord) -> Word:
        return value_word(v, rank)

    def inner_word(v: LWord) -> Word:
        return value_word(shift_down(v), rank - 1)

    # -- set(b) -------------------------------------------------------
    hw_set = Hardware([(t, A) for t in tapes] + [("b", A)])
    set_edges = [
        Edge("e1", "s", "q1", act(guard={t: EMPTY for t in tapes})),
        Edge("e2", "q1", "q2", ActionN.make(irti, "set0", {"b": "b"})),
        Edge("e3", "q2", "q3", ActionN.make(irti, "re", {})),
        Edge("e4", "q3", "f", act(guard={"b": EMPTY})),
    ]
    g_set = StarGraph(hw_set, ["s", "q1", "q2", "q3", "f"], set_edges, instances=[irti])
    obj.add_operation(
        OperationDef("set", g_set, ext=("b",), val=tapes, int_=(), start="s", finish="f")
    )

    def set_planner(w1, m1, w2, m2):
        v2 = w2.restrict(set(tapes))
        if (m1, m2) == (S_MARK, F_MARK):
            if w1.restrict(set(tapes)).size() or w2["b"]:
                return None
            w = w1["b"]
            if full_word(v2) != w:
                return None
            flat = LWord({"a1": w}) if w else LWord()
            return [
                step0(g_set.edge("e1")),
                stepN(g_set.edge("e2"), S_MARK, F_MARK, LWord({"b": w}), flat),
                stepN(g_set.edge("e3"), S_MARK, F_MARK, flat, v2),
                step0(g_set.edge("e4")),
            ]
        if m1 == m2 == F_MARK and not w1["b"] and not w2["b"]:
            v1 = w1.restrict(set(tapes))
            if full_word(v1) != full_word(v2):
                return None
            return [
                step0(g_set.edge("e4"), forward=False),
                stepN(g_set.edge("e3"), F_MARK, F_MARK, v1, v2),
                step0(g_set.edge("e4")),
            ]
        return None

    planners = {"set": set_planner}
    f_irt_re = irt.costs["re"][0]
    f_irt_s0 = irt.costs["set0"][0]
    costs = {
        "set": (
            lambda M: f_irt_s0(M) + f_irt_re(M) + 2,
            lambda M: 2 * M + irt.costs["re"][1](M) + 2,
        )
    }

    # -- Q() per fragment --------------------------------------------
    hw_q = Hardware([(t, A) for t in tapes])
    frag_ops = {}
    for key, frag in frag_map.items():
        opname = frag_opname(key, frag_map)
        frag_ops[key] = opname
        irt_q = opname  # same canonical naming inside the intermediate object
        if frag.kind == EXACT:
            q_edges = [
                Edge("e1", "s", "q1", ActionN.make(irti, "re", {})),
                Edge("e2", "q1", "q2", act(guard={"a1": EMPTY})),
                Edge("e3", "q2", "q3", ActionN.make(irti, irt_q, {})),
                Edge("e4", "q3", "q4", act(guard={"a1": EMPTY})),
                Edge("e5", "q4", "f", ActionN.make(irti, "re", {})),
            ]
            g_q = StarGraph(hw_q, ["s", "q1", "q2", "q3", "q4", "f"], q_edges, instances=[irti])
        else:
            q_edges = [
                Edge("e1", "s", "q1", ActionN.make(irti, "re", {})),
                Edge("e2", "q1", "q2", ActionN.make(irti, irt_q, {})),
                Edge("e3", "q2", "f", ActionN.make(irti, "re", {})),
            ]
            g_q = StarGraph(hw_q, ["s", "q1", "q2", "f"], q_edges, instances=[irti])

        def q_planner(w1, m1, w2, m2, g_q=g_q, frag=frag):
            if m1 == m2:
                if full_word(w1) != full_word(w2):
                    return None
                return [stepN(g_q.edge("e1"), m1, m2, w1, w2)]
            if (m1, m2) != (S_MARK, F_MARK):
                return None
            word1, word2 = full_word(w1), full_word(w2)
            if frag.apply(word1) != word2:
                return None
            if frag.kind == EXACT:
                u1 = canon_value(word1, rank)
                u2 = canon_value(word2, rank)
                return [
                    stepN(g_q.edge("e1"), S_MARK, F_MARK, w1, u1),
                    step0(g_q.edge("e2")),
                    stepN(g_q.edge("e3"), S_MARK, F_MARK, u1, u2),
                    step0(g_q.edge("e4")),
                    stepN(g_q.edge("e5"), S_MARK, F_MARK, u2, w2),
                ]
            # matching: cheap route when the split is stable and the
            # rewritten suffix sits inside the nested tapes
            if (
                w1["a1"] == w2["a1"]
                and has_suffix(inner_word(w1), frag.u)
                and frag.apply(inner_word(w1)) == inner_word(w2)
            ):
                return [
                    stepN(g_q.edge("e1"), S_MARK, F_MARK, w1, w1),
                    stepN(g_q.edge("e2"), S_MARK, F_MARK, w1, w2),
                    stepN(g_q.edge("e3"), S_MARK, F_MARK, w2, w2),
                ]
            u1 = canon_value(word1, rank)
            u2 = canon_value(word2, rank)
            return [
                stepN(g_q.edge("e1"), S_MARK, F_MARK, w1, u1),
                stepN(g_q.edge("e2"), S_MARK, F_MARK, u1, u2),
                stepN(g_q.edge("e3"), S_MARK, F_MARK, u2, w2),
            ]

        obj.add_operation(
            OperationDef(opname, g_q, ext=(), val=tapes, int_=(), start="s", finish="f")
        )
        planners[opname] = q_planner
        f_q_in = irt.costs[irt_q][0]
        costs[opname] = (
            lambda M, f_q_in=f_q_in: 2 * f_irt_re(M) + f_q_in(M) + 2,
            lambda M: 2 * M + irt.costs["re"][1](M) + 2,
        )

    obj.freeze()
    std = StdObject(obj, _tt_oracle(A, rank, frag_map), planners, costs)
    return TuringTapeObject(std, rank, A, eps, dict(frag_map), frag_ops)


def ttape_rank_for(eps) -> int:
    """The smallest rank d with d·ε > 2."""
    eps = Fraction(eps)
    d = int(2 / eps) + 1
    while d * eps <= 2:
        d += 1
    return d


def make_ttape(trs: TRS, i: int, eps) -> TuringTapeObject:
    """The tape object for tape ``i`` of the system, at precision ε."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("precision must lie in (0,1)")
    d = ttape_rank_for(eps)
    frags = [e.action.fragments[i] for e in trs.positive_edges()]
    return make_ttape_rank(sorted(trs.alphabets[i]), frags, d, eps / 2)


# ---------------------------------------------------------------------------
# Sequential planning: choosing the splits along an i-computation
# ---------------------------------------------------------------------------


@dataclass
class SeqPlan:
    """Chosen per-step values along one tape, plus estimated cost."""

    values: list  # LWord per configuration
    tm: float
    sp: int


def seq_splits(rank: int, words: Sequence[Word], K: int) -> list:
    """Choose values v_0..v_L with concatenated content w_0..w_L.

    Steps are grouped into blocks of ⌈n^{(d-1)/d}⌉; within a block the
    shallow tape pins the common prefix (minus a margin of K letters so
    every rewritten suffix stays inside the nested tapes), and the
    suffixes recurse one rank down.  Block boundaries are the only steps
    whose shallow content changes.
    """
    if rank == 1:
        return [LWord({"a1": w}) if w else LWord() for w in words]
    L = len(words) - 1
    n = max(max((len(w) for w in words), default=0), L, 1)
    m = max(1, math.ceil(n ** ((rank - 1) / rank)))
    vals: list = [None] * (L + 1)
    start, first = 0, True
    while True:
        end = min(start + m, L)
        block = words[start : end + 1]
        plen = min(common_prefix_len(block), max(min(len(w) for w in block) - K, 0))
        prefix = Word(words[start].letters[:plen])
        inner = [Word(w.letters[plen:]) for w in block]
        ivals = seq_splits(rank - 1, inner, K)
        lo = start if first else start + 1
        for idx in range(lo, end + 1):
            v = shift_up(ivals[idx - start])
            if prefix:
                v = v.set("a1", prefix)
            vals[idx] = v
        first = False
        if end == L:
            break
        start = end
    return vals


def _step_price(rank: int, v1: LWord, v2: LWord, eps: float) -> float:
    """Estimated lowered time of one fragment application between values."""
    if rank == 1:
        M = max(v1.size(), v2.size()) + 2
        return M ** (1 + eps) + 2
    if v1["a1"] == v2["a1"]:
        return 2 + _step_price(rank - 1, shift_down(v1), shift_down(v2), eps)
    M = max(v1.size(), v2.size()) + 2
    # two full rearrangements plus the pass-through chain ending at a
    # rank-1 check of the whole content
    return 2 * (3 * M ** (1 + eps) + 3) + 2 * (rank - 1) + M ** (1 + eps) + 2


def seq_plan(tt: TuringTapeObject, ic: IComputation) -> SeqPlan:
    """Values approximating an i-computation, with estimated (tm, sp)."""
    words = list(ic.words)
    if not words:
        raise ValueError("empty i-computation")
    K = max([f.size for f in ic.fragments] + [1])
    values = seq_splits(tt.rank, words, K)
    eps = float(tt.eps)
    tm = 0.0
    sp = max(len(w) for w in words) + 2
    for v1, v2 in zip(values, values[1:]):
        tm += _step_price(tt.rank, v1, v2, eps)
    return SeqPlan(values, tm, sp)


def erase_trace(n: int, sym: str = "x") -> IComputation:
    """The i-computation erasing sym^n one letter at a time."""
    words = [Word.gen(sym, n - j) for j in range(n + 1)]
    frags = [matching(sym, "")] * n
    return IComputation(0, words, frags, [f"t{j}" for j in range(n)])


# ---------------------------------------------------------------------------
# The weak acceptor of a Turing rewriting system
# ---------------------------------------------------------------------------


PAD_LETTER = "zz0"


@dataclass
class WaccBuild:
    """The weak-acceptor operation walking the rewriting system's graph."""

    std: StdObject
    trs: TRS
    eps: Fraction
    rank: int
    tape_order: tuple  # positions 1..k -> TRS tape index (None = padding)
    ttapes: tuple  # TuringTapeObject per position
    k: int
    name: str

    @property
    def graph(self) -> StarGraph:
        return self.std.obj.operations["op"].graph

    def state_count(self) -> int:
        return len(self.graph.states)

    def expected_state_count(self) -> int:
        n_edges = len(self.trs.positive_edges())
        return len(self.trs.states) + (self.k - 1) * n_edges + 4


def _trs_signature(trs: TRS) -> str:
    from sgraph.turing import dump_trs

    return hashlib.md5(dump_trs(trs).encode()).hexdigest()[:8]


def build_wacc(
    trs: TRS,
    eps,
    membership: Optional[Callable[[Word], bool]] = None,
    name: Optional[str] = None,
    max_size: Optional[int] = None,
    max_configs: int = 10**6,
) -> WaccBuild:
    """The weak acceptor of the system's language, per the walking plan.

    ``membership`` supplies the exact language; without it the oracle
    falls back to bounded search over the rewriting system (and then a
    negative answer is only "not found within the caps").
    """
    eps = Fraction(eps)
    name = name or f"wacc({_trs_signature(trs)};{eps})"
    d = ttape_rank_for(eps)

    order = [trs.input_tape] + [t for t in trs.tapes if t != trs.input_tape]
    if len(order) < 2:
        order.append(None)  # padding tape; no action ever touches it
    k = len(order)

    idframe = matching("", "")
    tts = []
    for pos, t in enumerate(order, start=1):
        if t is None:
            tts.append(make_ttape_rank((PAD_LETTER,), [idframe], d, eps / 2))
        else:
            frags = [e.action.fragments[t] for e in trs.positive_edges()]
            alpha = sorted(trs.alphabets[t]) or [PAD_LETTER]
            tts.append(make_ttape_rank(alpha, frags, d, eps / 2))

    A = tuple(sorted(trs.input_alphabet | trs.alphabets[trs.input_tape]))
    sw = make_swap(A)

    hw_items = [("a", A), ("b", A)]
    insts = []
    for pos, tt in enumerate(tts, start=1):
        for vt in value_tapes(d):
            hw_items.append((f"t{pos}.{vt}", tt.alphabet))
        insts.append(
            InstanceDef.make(f"tt{pos}", tt.std.obj, {vt: f"t{pos}.{vt}" for vt in value_tapes(d)})
        )
    swi = InstanceDef.make("sw", sw.obj, {})
    insts.append(swi)
    hw = Hardware(hw_items)
    internal = tuple(t for t, _ in hw_items if t != "a")
    act0 = act(guard={t: EMPTY for t in internal})

    states = ["s", "q", "qq"] + [f"p.{st}" for st in trs.states] + ["f"]
    edges = [
        Edge("es", "s", "q", act0),
        Edge("eswap", "q", "qq", ActionN.make(swi, "op", {"a": "a", "b": "b"})),
        Edge("eset", "qq", f"p.{trs.start}", ActionN.make(insts[0], "set", {"b": "b"})),
        Edge("ef", f"p.{trs.finish}", "f", act0),
    ]
    for e in trs.positive_edges():
        chain = [f"p.{e.tail}"]
        for j in range(1, k):
            st = f"c.{e.eid}.{j}"
            states.append(st)
            chain.append(st)
        chain.append(f"p.{e.head}")
        for j in range(1, k + 1):
            tt = tts[j - 1]
            t = order[j - 1]
            frag = idframe if t is None else e.action.fragments[t]
            edges.append(
                Edge(f"{e.eid}.{j}", chain[j - 1], chain[j], ActionN.make(insts[j - 1], tt.op_for(frag), {}))
            )
    g = StarGraph(hw, states, edges, instances=insts)
    obj = ObjectDef(name, Hardware([]))
    op = OperationDef("op", g, ext=("a",), val=(), int_=internal, start="s", finish="f")
    obj.add_operation(op)
    obj.freeze()

    if membership is not None:
        lang = membership
    else:

        def lang(w: Word) -> bool:
            cap = max_size if max_size is not None else len(w) + 8
            return trs_recognize_bounded(trs, w, max_size=cap, max_configs=max_configs) is not None

    def member(w1, m1, w2, m2):
        if w1 == w2 and m1 == m2:
            return True
        if m1 == m2:
            return False
        u1, u2 = (w1, w2) if m1 == S_MARK else (w2, w1)
        return not u2["a"] and is_positive(u1["a"], A) and lang(u1["a"])

    def succ(w1, m1, m2, cap):
        out = set()
        if m1 == m2:
            out.add(w1)
        elif m1 == S_MARK:
            if is_positive(w1["a"], A) and lang(w1["a"]):
                out.add(LWord())
        elif not w1["a"]:
            out.update(LWord({"a": v}) for v in _all_words(A, cap) if is_positive(v, A) and lang(v))
        return sorted(out)

    def planner(w1, m1, w2, m2):
        if (m1, m2) != (S_MARK, F_MARK) or w2["a"] or not is_positive(w1["a"], A):
            return None
        w = w1["a"]
        cap = max_size if max_size is not None else len(w) + 8
        comp = trs_recognize_bounded(trs, w, max_size=cap, max_configs=max_configs)
        if comp is None:
            return None
        per_tape = []
        for pos, t in enumerate(order, start=1):
            if t is None:
                L = len(comp.configs) - 1
                ic = IComputation(0, [EMPTY] * (L + 1), [idframe] * L, list(comp.history))
            else:
                ic = project_i_computation(trs, comp, t)
            per_tape.append(seq_plan(tts[pos - 1], ic).values)
        steps = [
            step0(g.edge("es")),
            stepN(g.edge("eswap"), S_MARK, F_MARK, LWord({"a": w}), LWord({"b": w})),
            stepN(g.edge("eset"), S_MARK, F_MARK, LWord({"b": w}), per_tape[0][0]),
        ]
        for ell, eid in enumerate(comp.history, start=1):
            back = eid.endswith("~")
            base = eid[:-1] if back else eid
            rng = range(k, 0, -1) if back else range(1, k + 1)
            for j in rng:
                edge = g.edge(f"{base}.{j}")
                before = per_tape[j - 1][ell - 1]
                after = per_tape[j - 1][ell]
                if back:
                    steps.append(stepN(edge, F_MARK, S_MARK, before, after))
                else:
                    steps.append(stepN(edge, S_MARK, F_MARK, before, after))
        steps.append(step0(g.edge("ef")))
        return steps

    def f_cost(M):
        return 64 * k * (M + 2) ** (1 + float(eps)) + 64

    std = StdObject(
        obj,
        FnOracle({"op": member}, {"op": succ}),
        {"op": planner},
        {"op": (f_cost, lambda M: 4 * k * (M + 2))},
        language=lang,
    )
    return WaccBuild(std, trs, eps, d, tuple(order), tuple(tts), k, name)


# ---------------------------------------------------------------------------
# End-to-end compilation
# ---------------------------------------------------------------------------


@dataclass
class CompiledAcceptor:
    """An acceptor of the system's language, kept in tree form.

    The degree-0 expansion of the acceptor is astronomically large for
    realistic precisions, so it is never materialized; accepting runs
    are lowered lazily, which visits exactly the expansion edges the run
    traverses and therefore measures the same time.
    """

    wacc: WaccBuild
    checker: StdObject
    acceptor: StdObject
    trs: TRS
    eps: Fraction

    def accepts(self, w: Word, collect_path: bool = False):
        """A lowered accepting run for a member word, None otherwise."""
        w1, w2 = LWord({"a": w}), LWord()
        if not self.acceptor.oracle.member("op", w1, S_MARK, w2, F_MARK):
            return None
        plan = self.acceptor.plan_or_raise("op", w1, S_MARK, w2, F_MARK)
        return lower_run(self.acceptor, "op", w1, S_MARK, plan, collect_path=collect_path)


def compile_acceptor(
    trs: TRS,
    eps,
    membership: Optional[Callable[[Word], bool]] = None,
    name: Optional[str] = None,
    **wacc_kwargs,
) -> CompiledAcceptor:
    from sgraph.gadgets import acceptorize, checkerize

    eps = Fraction(eps)
    name = name or _trs_signature(trs)
    wb = build_wacc(trs, eps, membership=membership, name=f"wacc({name};{eps})", **wacc_kwargs)
    ch = checkerize(wb.std, f"check({name};{eps})")
    acc = acceptorize(ch, f"accept({name};{eps})")
    return CompiledAcceptor(wb, ch, acc, trs, eps)


# ---------------------------------------------------------------------------
# Measurement harness
# ---------------------------------------------------------------------------


@dataclass
class ComplexityFit:
    """A least-squares exponent fit of time against size on log-log axes."""

    samples: tuple
    slope: float
    intercept: float
    residual: float


def measure_scaling(samples: Sequence[tuple]) -> ComplexityFit:
    """Fit tm ≈ C·n^slope from (n, tm) pairs; no extrapolation claims."""
    pts = [(n, tm) for n, tm, *_ in (tuple(s) for s in samples)]
    if len(pts) < 4:
        raise ValueError("need at least 4 samples")
    ns = [n for n, _ in pts]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("sizes must be strictly increasing")
    if any(tm <= 0 for _, tm in pts):
        raise ValueError("degenerate samples")
    xs = [math.log(n) for n, _ in pts]
    ys = [math.log(tm) for _, tm in pts]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("degenerate samples")
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    intercept = my - slope * mx
    residual = math.sqrt(
        sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys)) / len(xs)
    )
    return ComplexityFit(tuple(pts), slope, intercept, residual)
