"""Higher-degree graphs: objects, operations, and edges that invoke them.

A positive edge is labelled by an :class:`ActionN` — an instance of an
object, one of the object's operations, and a renaming of the operation's
external tapes into the outer graph.  The module provides structural
validation, the bracket-discipline check for internal tapes (condition
(O)), generic computations driven by certified input-output oracles, value
exploration, the invariant-family verifier, and the bounded IO oracle
computed through expansion.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from sgraph.graph0 import (
    Action0,
    Config0,
    Edge,
    Inapplicable,
    SGraph0,
    apply_edge,
    inverse_eid,
    reach_bounded,
)
from sgraph.words import EMPTY, Hardware, LWord, Word, hardware_join

S_MARK = "s"  # start-side end marker (ŝ)
F_MARK = "f"  # finish-side end marker (f̂)


# ---------------------------------------------------------------------------
# Objects, instances, operations
# ---------------------------------------------------------------------------


class ObjectDef:
    """A reusable object: value tapes, shared instances, named operations.

    Built incrementally (operations reference the object), then frozen.
    Identity-hashed: the oracle registry is keyed by the object itself.
    """

    def __init__(self, name: str, value_hardware: Hardware):
        self.name = name
        self.value_hardware = value_hardware
        self.value_tapes = value_hardware.tapes
        self.operations: dict[str, "OperationDef"] = {}
        self._frozen = False

    def add_operation(self, op: "OperationDef") -> "OperationDef":
        if self._frozen:
            raise ValueError(f"object {self.name} is frozen")
        if op.name in self.operations:
            raise ValueError(f"duplicate operation {op.name}")
        if tuple(op.val) != self.value_tapes:
            raise ValueError(
                f"operation {op.name} value tapes {op.val} != object's {self.value_tapes}"
            )
        op.owner = self
        self.operations[op.name] = op
        return op

    def freeze(self) -> "ObjectDef":
        self._frozen = True
        return self

    def __repr__(self) -> str:
        return f"ObjectDef({self.name}, ops={sorted(self.operations)})"


@dataclass(frozen=True)
class InstanceDef:
    """An instance: an object plus an injective renaming of its value tapes."""

    name: str
    obj: ObjectDef
    val_map: tuple[tuple[str, str], ...]  # object value tape -> outer tape

    @staticmethod
    def make(name: str, obj: ObjectDef, val_map: Mapping[str, str]) -> "InstanceDef":
        if len(set(val_map.values())) != len(val_map):
            raise ValueError(f"instance {name}: value renaming not injective")
        if set(val_map) != set(obj.value_tapes):
            raise ValueError(f"instance {name}: renaming domain must be the value tapes")
        return InstanceDef(name, obj, tuple(sorted(val_map.items())))

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.val_map)

    def value_image(self) -> set[str]:
        return {outer for _, outer in self.val_map}


@dataclass(frozen=True)
class ActionN:
    """A positive action: call ``instance.operation`` with renamed externals."""

    instance: InstanceDef
    operation: str
    ext_map: tuple[tuple[str, str], ...]  # operation ext tape -> outer tape

    @staticmethod
    def make(instance: InstanceDef, operation: str, ext_map: Mapping[str, str]) -> "ActionN":
        op = instance.obj.operations[operation]
        if set(ext_map) != set(op.ext):
            raise ValueError(f"ext renaming domain must be {op.ext}")
        if len(set(ext_map.values())) != len(ext_map):
            raise ValueError("ext renaming not injective")
        if set(ext_map.values()) & instance.value_image():
            raise ValueError("ext image overlaps the instance's value image")
        return ActionN(instance, operation, tuple(sorted(ext_map.items())))

    @property
    def op(self) -> "OperationDef":
        return self.instance.obj.operations[self.operation]

    def outer_of_inner(self) -> dict[str, str]:
        """Renaming (op ext ∪ object val) tape -> outer tape."""
        out = dict(self.ext_map)
        out.update(self.instance.mapping)
        return out

    def mentions(self) -> set[str]:
        return set(self.outer_of_inner().values())

    def mentions_immutably(self, outer_tape: str) -> bool:
        op = self.op
        for inner, outer in self.ext_map:
            if outer == outer_tape:
                return inner in op.immutable_ext
        return False

    def __str__(self) -> str:
        args = ",".join(outer for _, outer in sorted(self.ext_map))
        return f"{self.instance.name}.{self.operation}({args})"


class StarGraph:
    """A graph whose edges carry :class:`Action0` or :class:`ActionN` labels.

    The degree-0 part is symmetric (inverses added automatically);
    positive edges are directed and have no inverses.
    """

    def __init__(
        self,
        hardware: Hardware,
        states: Iterable[str],
        edges: Iterable[Edge],
        instances: Iterable[InstanceDef] = (),
    ):
        self.hardware = hardware
        self.states = tuple(dict.fromkeys(states))
        self.instances = tuple(instances)
        directed: list[Edge] = []
        seen: set[str] = set()
        for e in edges:
            if e.eid in seen:
                raise ValueError(f"duplicate edge id {e.eid!r}")
            seen.add(e.eid)
            directed.append(e)
            if isinstance(e.label, Action0):
                inv = Edge(inverse_eid(e.eid), e.head, e.tail, e.label.inverse())
                seen.add(inv.eid)
                directed.append(inv)
        self.edges = tuple(directed)
        self.by_id = {e.eid: e for e in self.edges}

    def degree0_edges(self) -> list[Edge]:
        return [e for e in self.edges if isinstance(e.label, Action0)]

    def positive_edges(self) -> list[Edge]:
        return [e for e in self.edges if isinstance(e.label, ActionN)]

    def degree(self) -> int:
        if not self.positive_edges():
            return 0
        return 1 + max(e.label.op.graph.degree() for e in self.positive_edges())

    def edge(self, eid: str) -> Edge:
        return self.by_id[eid]

    def __repr__(self) -> str:
        return (
            f"StarGraph({len(self.states)} states, {len(self.edges)} edges, "
            f"{len(self.positive_edges())} positive)"
        )


class OperationDef:
    """An operation: a graph with ext/val/int tape roles and start/finish."""

    def __init__(
        self,
        name: str,
        graph: StarGraph,
        ext: Sequence[str],
        val: Sequence[str],
        int_: Sequence[str],
        start: str,
        finish: str,
        immutable_ext: Iterable[str] = (),
    ):
        self.name = name
        self.graph = graph
        self.ext = tuple(ext)
        self.val = tuple(val)
        self.int = tuple(int_)
        roles = self.ext + self.val + self.int
        if sorted(roles) != sorted(graph.hardware.tapes) or len(set(roles)) != len(roles):
            raise ValueError(f"operation {name}: ext/val/int must partition the tapes")
        if start not in graph.states or finish not in graph.states:
            raise ValueError(f"operation {name}: start/finish not states")
        for inst in graph.instances:
            if not inst.value_image() <= set(self.val) | set(self.int):
                raise ValueError(
                    f"operation {name}: instance {inst.name} value image escapes val∪int"
                )
        self.start = start
        self.finish = finish
        self.immutable_ext = frozenset(immutable_ext)
        self.owner: Optional[ObjectDef] = None

    def sf(self, marker: str) -> str:
        return self.start if marker == S_MARK else self.finish

    def natural_tapes(self) -> tuple[str, ...]:
        return self.ext + self.val

    def __repr__(self) -> str:
        return f"OperationDef({self.name}, ext={self.ext}, int={self.int})"


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


class IOOracle:
    """A certified input-output relation for one object.

    ``member(op, w1, m1, w2, m2)`` decides membership of a quadruple
    (words over the operation's natural tapes, end markers ``s``/``f``).
    ``successors(op, w1, m1, m2, max_word)`` enumerates all ``w2`` with
    every tape within ``max_word``, in canonical (sorted) order.
    """

    def member(self, op: str, w1: LWord, m1: str, w2: LWord, m2: str) -> bool:
        raise NotImplementedError

    def successors(self, op: str, w1: LWord, m1: str, m2: str, max_word: int) -> list[LWord]:
        raise NotImplementedError

    def values(self, max_word: int) -> list[LWord]:
        """Bounded enumeration of the object's value set (default: trivial)."""
        return [LWord()]


class FnOracle(IOOracle):
    """Oracle assembled from per-operation member/successor callables."""

    def __init__(
        self,
        member_fns: Mapping[str, Callable[[LWord, str, LWord, str], bool]],
        successor_fns: Mapping[str, Callable[[LWord, str, str, int], Iterable[LWord]]],
        values_fn: Optional[Callable[[int], Iterable[LWord]]] = None,
    ):
        self._member = dict(member_fns)
        self._succ = dict(successor_fns)
        self._values = values_fn

    def member(self, op, w1, m1, w2, m2):
        return self._member[op](w1, m1, w2, m2)

    def successors(self, op, w1, m1, m2, max_word):
        return sorted(self._succ[op](w1, m1, m2, max_word))

    def values(self, max_word):
        if self._values is None:
            return [LWord()]
        return sorted(self._values(max_word))


OracleRegistry = dict  # ObjectDef -> IOOracle (identity-keyed)


# ---------------------------------------------------------------------------
# Validation: conditions (1)-(6)
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    violations: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, cond: int, message: str) -> None:
        self.violations.append((cond, message))

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        return "fail:\n" + "\n".join(f"  ({c}) {m}" for c, m in self.violations)


def _mentions(label: Action0 | ActionN) -> set[str]:
    return label.mentions()


def _mentions_immutably(label: Action0 | ActionN, tape: str) -> bool:
    return label.mentions_immutably(tape)


def validate_star_graph(g: StarGraph) -> ValidationReport:
    """Check the structural conditions on a higher-degree graph."""
    report = ValidationReport()
    registered = set(g.instances)
    tape_set = set(g.hardware.tapes)

    for e in g.positive_edges():
        # (1) instance registered
        if e.label.instance not in registered:
            report.add(1, f"edge {e.eid}: instance {e.label.instance.name} not registered")
        # (3) label hardware within graph hardware
        op = e.label.op
        ren = e.label.outer_of_inner()
        inner_hw = op.graph.hardware
        for inner in op.natural_tapes():
            outer = ren[inner]
            if outer not in tape_set:
                report.add(3, f"edge {e.eid}: tape {outer} not in hardware")
            elif not inner_hw.alphabets[inner] <= g.hardware.alphabets[outer]:
                report.add(3, f"edge {e.eid}: alphabet of {outer} too small for {inner}")

    for e in g.degree0_edges():
        if not e.label.min_hardware() <= g.hardware:
            report.add(3, f"edge {e.eid}: label hardware exceeds graph hardware")

    # (2) value images inside the index set
    for inst in g.instances:
        for _, outer in inst.val_map:
            if outer not in tape_set:
                report.add(2, f"instance {inst.name}: value tape {outer} not in hardware")

    # (4) degree-0 part symmetric (guaranteed by construction; verify anyway)
    d0 = {(e.tail, e.head, e.label) for e in g.degree0_edges()}
    for tail, head, label in d0:
        if (head, tail, label.inverse()) not in d0:
            report.add(4, f"degree-0 edge {tail}->{head} has no inverse")

    # (5) value images pairwise disjoint
    for i1, i2 in itertools.combinations(g.instances, 2):
        shared = i1.value_image() & i2.value_image()
        if shared:
            report.add(5, f"instances {i1.name},{i2.name} share value tapes {sorted(shared)}")

    # (6) foreign value tapes only mentioned immutably
    for e in g.edges:
        owner = {}
        for inst in g.instances:
            for t in inst.value_image():
                owner[t] = inst
        label = e.label
        own_image = (
            label.instance.value_image() if isinstance(label, ActionN) else set()
        )
        for t in _mentions(label) & set(owner):
            if t in own_image:
                continue
            if not _mentions_immutably(label, t):
                report.add(
                    6,
                    f"edge {e.eid}: mutates value tape {t} of instance {owner[t].name}",
                )
    return report


# ---------------------------------------------------------------------------
# Condition (O): bracketed use of internal tapes
# ---------------------------------------------------------------------------


@dataclass
class ConditionOResult:
    ok: bool
    tape: Optional[str] = None
    witness: Optional[list[str]] = None  # flattened traversal ids

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        return f"fail(tape={self.tape}, path={self.witness})"


def _flat_traversals(g: StarGraph) -> list[tuple[str, str, str, object, bool]]:
    """Flattened traversals: (id, from, to, label, forward) pairs.

    Degree-0 directed edges appear as themselves; each positive edge
    appears in both directions (its call can be entered from either end).
    """
    out = []
    for e in g.degree0_edges():
        out.append((e.eid, e.tail, e.head, e.label, True))
    for e in g.positive_edges():
        out.append((e.eid, e.tail, e.head, e.label, True))
        out.append((e.eid + "'", e.head, e.tail, e.label, False))
    return out


def _opens(label: object, tape: str) -> bool:
    return isinstance(label, Action0) and label.guard.get(tape, None) == EMPTY


def _closes(label: object, tape: str) -> bool:
    return isinstance(label, Action0) and label.inverse().guard.get(tape, None) == EMPTY


def check_condition_O(op: OperationDef) -> ConditionOResult:
    """Decide whether every internal tape is used with bracket discipline.

    Walks the product of the flattened edge graph with a determinized
    two-state segment monitor per internal tape; any path between the
    start/finish states that can strand the monitor inside a segment (or
    cross a mention outside one) yields a concrete witness.
    """
    traversals = _flat_traversals(op.graph)
    endpoints = {op.start, op.finish}
    for tape in op.int:
        # subset construction over monitor states {OUT, IN}
        start_nodes = [(s, frozenset({"OUT"})) for s in endpoints]
        parent: dict[tuple, tuple] = {n: None for n in start_nodes}
        queue = deque(start_nodes)
        bad = None
        while queue and bad is None:
            state, subset = queue.popleft()
            for tid, frm, to, label, _fwd in traversals:
                if frm != state:
                    continue
                mention = tape in _mentions(label)
                nxt: set[str] = set()
                if "OUT" in subset:
                    if not mention:
                        nxt.add("OUT")
                    if _opens(label, tape):
                        nxt.add("IN")
                if "IN" in subset:
                    nxt.add("IN")
                    if _closes(label, tape):
                        nxt.add("OUT")
                node = (to, frozenset(nxt))
                if node not in parent:
                    parent[node] = ((state, subset), tid)
                    queue.append(node)
                if to in endpoints and "OUT" not in nxt:
                    parent.setdefault(node, ((state, subset), tid))
                    bad = node
                    break
        if bad is not None:
            path = []
            node = bad
            while parent[node] is not None:
                prev, tid = parent[node]
                path.append(tid)
                node = prev
            return ConditionOResult(False, tape, list(reversed(path)))
    return ConditionOResult(True)


# ---------------------------------------------------------------------------
# Generic computations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenericEdge:
    """An edge with end markers: enter at ``end1``'s endpoint, leave at
    ``end2``'s.  For a degree-0 edge the markers name tail/head; for a
    positive edge they name the operation's start/finish behavior."""

    end1: str  # S_MARK or F_MARK
    end2: str
    edge: Edge

    def tail(self) -> str:
        return self.edge.tail if self.end1 == S_MARK else self.edge.head

    def head(self) -> str:
        return self.edge.tail if self.end2 == S_MARK else self.edge.head

    def reversed(self) -> "GenericEdge":
        return GenericEdge(self.end2, self.end1, self.edge)

    def __str__(self) -> str:
        return f"({self.end1},{self.end2},{self.edge.eid})"


def _positive_io_member(
    label: ActionN, w1: LWord, m1: str, w2: LWord, m2: str, oracles: OracleRegistry
) -> bool:
    oracle = oracles.get(label.instance.obj)
    if oracle is None:
        raise KeyError(f"no oracle for object {label.instance.obj.name}")
    ren = label.outer_of_inner()
    inv_ren = {outer: inner for inner, outer in ren.items()}
    mentioned = set(ren.values())
    # unmentioned tapes unchanged
    for t in (w1.tapes() | w2.tapes()) - mentioned:
        if w1[t] != w2[t]:
            return False
    inner1 = w1.restrict(mentioned).rename(inv_ren)
    inner2 = w2.restrict(mentioned).rename(inv_ren)
    return oracle.member(label.operation, inner1, m1, inner2, m2)


def lio_of_action(
    edge: Edge, oracles: OracleRegistry
) -> Callable[[LWord, str, LWord, str], bool]:
    """Membership predicate for the edge's language input-output relation."""
    label = edge.label

    def member(w1: LWord, m1: str, w2: LWord, m2: str) -> bool:
        if isinstance(label, Action0):
            if m1 == m2:
                return w1 == w2
            action = label if m1 == S_MARK else label.inverse()
            if action.failing_guard(w1, sorted(w1.tapes() | w2.tapes())) is not None:
                return False
            return action.apply_word(w1) == w2
        return _positive_io_member(label, w1, m1, w2, m2, oracles)

    return member


def generic_step(
    graph: StarGraph,
    c: Config0,
    ge: GenericEdge,
    oracles: OracleRegistry,
    max_word: int,
) -> list[Config0]:
    """All successors of ``c`` across the generic edge, canonically ordered."""
    if c.state != ge.tail():
        raise Inapplicable(Inapplicable.WRONG_STATE)
    label = ge.edge.label
    if isinstance(label, Action0):
        if ge.end1 == ge.end2:
            return [Config0(c.word, ge.head())]
        action = label if ge.end1 == S_MARK else label.inverse()
        bad = action.failing_guard(c.word, graph.hardware.tapes)
        if bad is not None:
            return []
        w2 = action.apply_word(c.word)
        if not all(len(w) <= max_word for _, w in w2.entries):
            return []
        return [Config0(w2, ge.head())]
    oracle = oracles.get(label.instance.obj)
    if oracle is None:
        raise KeyError(f"no oracle for object {label.instance.obj.name}")
    ren = label.outer_of_inner()
    inv_ren = {outer: inner for inner, outer in ren.items()}
    mentioned = set(ren.values())
    inner1 = c.word.restrict(mentioned).rename(inv_ren)
    out = []
    for inner2 in oracle.successors(label.operation, inner1, ge.end1, ge.end2, max_word):
        w2 = c.word
        for inner in ren:
            w2 = w2.set(ren[inner], inner2[inner])
        if all(len(w) <= max_word for _, w in w2.entries):
            out.append(Config0(w2, ge.head()))
    return sorted(out, key=lambda cfg: (cfg.word.entries, cfg.state))


def generic_edges_of(graph: StarGraph) -> list[GenericEdge]:
    """All generic edges of a graph (degree-0: forward/backward only)."""
    out = []
    for e in graph.degree0_edges():
        out.append(GenericEdge(S_MARK, F_MARK, e))
    for e in graph.positive_edges():
        for m1 in (S_MARK, F_MARK):
            for m2 in (S_MARK, F_MARK):
                out.append(GenericEdge(m1, m2, e))
    return out


def generic_reach(
    graph: StarGraph,
    seeds: Sequence[Config0],
    oracles: OracleRegistry,
    max_word: int,
    max_configs: int = 10**6,
) -> "tuple[set[Config0], bool]":
    """Bounded search over generic computations (no expansion).

    Positive edges step through the registered oracles, so this explores
    exactly the generic reachability relation within the per-tape cap.
    Returns the reached configuration set and a truncation flag.
    """
    by_tail: dict[str, list[GenericEdge]] = {}
    for ge in generic_edges_of(graph):
        by_tail.setdefault(ge.tail(), []).append(ge)
    seen: set[Config0] = set()
    frontier: list[Config0] = []
    for c in seeds:
        if c not in seen:
            seen.add(c)
            frontier.append(c)
    truncated = False
    while frontier:
        nxt: list[Config0] = []
        for c in frontier:
            for ge in by_tail.get(c.state, ()):
                for c2 in generic_step(graph, c, ge, oracles, max_word):
                    if c2 not in seen:
                        if len(seen) >= max_configs:
                            truncated = True
                            return seen, truncated
                        seen.add(c2)
                        nxt.append(c2)
        frontier = nxt
    return seen, truncated


# ---------------------------------------------------------------------------
# Value exploration
# ---------------------------------------------------------------------------


def _all_words(alphabet: Iterable[str], max_word: int) -> list[Word]:
    """All reduced words up to ``max_word`` over ``alphabet`` (sorted)."""
    letters = sorted(alphabet)
    out = [EMPTY]
    frontier = [EMPTY]
    for _ in range(max_word):
        nxt = []
        for w in frontier:
            for sym in letters:
                for sign in (1, -1):
                    w2 = w * Word([(sym, sign)])
                    if len(w2) == len(w) + 1:
                        nxt.append(w2)
        out.extend(nxt)
        frontier = nxt
    return sorted(set(out), key=lambda w: (len(w), str(w)))


def enumerate_lwords(hardware: Hardware, tapes: Sequence[str], max_word: int) -> list[LWord]:
    """All labelled tuples over the given tapes within the per-tape cap."""
    pools = [_all_words(hardware.alphabets[t], max_word) for t in tapes]
    out = []
    for combo in itertools.product(*pools):
        out.append(LWord(zip(tapes, combo)))
    return out


def explore_values(
    obj: ObjectDef,
    oracles: OracleRegistry,
    max_word: int,
    max_nodes: int = 10**5,
) -> tuple[set[LWord], bool]:
    """Connected component of the object's value graph from the trivial value.

    Explores via the object's oracle when present, otherwise through
    bounded expansion of each operation.
    """
    oracle = oracles.get(obj)
    seen: set[LWord] = {LWord()}
    queue: deque[LWord] = deque([LWord()])
    truncated = False
    ops = list(obj.operations.values())
    while queue:
        v = queue.popleft()
        for op in ops:
            for v2 in _value_neighbors(op, v, oracle, oracles, max_word):
                if v2 in seen:
                    continue
                if len(seen) >= max_nodes:
                    truncated = True
                    continue
                seen.add(v2)
                queue.append(v2)
    return seen, truncated


def _value_neighbors(
    op: OperationDef,
    v: LWord,
    oracle: Optional[IOOracle],
    oracles: OracleRegistry,
    max_word: int,
) -> Iterator[LWord]:
    val_tapes = list(op.val)
    if oracle is not None:
        ext_pool = enumerate_lwords(op.graph.hardware, op.ext, max_word)
        for ext1 in ext_pool:
            w1 = LWord(list(ext1.entries) + list(v.entries))
            for m1 in (S_MARK, F_MARK):
                for m2 in (S_MARK, F_MARK):
                    for w2 in oracle.successors(op.name, w1, m1, m2, max_word):
                        yield w2.restrict(val_tapes)
        return
    # fallback: bounded IO through expansion
    for (w1, _m1, w2, _m2) in io_bounded(op, max_word, oracles=oracles)[0]:
        if w1.restrict(val_tapes) == v:
            yield w2.restrict(val_tapes)
        if w2.restrict(val_tapes) == v:
            yield w1.restrict(val_tapes)


# ---------------------------------------------------------------------------
# Invariant families
# ---------------------------------------------------------------------------


@dataclass
class InvariantSet:
    """A named set of configurations: membership plus bounded enumeration."""

    name: str
    contains: Callable[[LWord, str], bool]
    enumerate: Callable[[int], Iterable[Config0]]


@dataclass
class InvariantResult:
    ok: bool
    set_name: Optional[str] = None
    edge: Optional[str] = None
    pair: Optional[tuple[Config0, Config0]] = None
    uncovered: Optional[Config0] = None

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        if self.uncovered is not None:
            return f"fail(uncovered {self.uncovered})"
        return f"fail(set={self.set_name}, edge={self.edge}, pair={self.pair})"


def verify_invariant_family(
    op: OperationDef,
    family: Sequence[InvariantSet],
    domain_cover: Iterable[Config0],
    oracles: OracleRegistry,
    max_word: int,
) -> InvariantResult:
    """Check each family member is closed under every edge's IO and that the
    family covers the given domain configurations."""
    edges = generic_edges_of(op.graph)
    for inv in family:
        for cfg in inv.enumerate(max_word):
            for ge in edges:
                for direction in (ge, ge.reversed()):
                    if cfg.state != direction.tail():
                        continue
                    for nxt in generic_step(op.graph, cfg, direction, oracles, max_word):
                        if not inv.contains(nxt.word, nxt.state):
                            return InvariantResult(
                                False, inv.name, direction.edge.eid, (cfg, nxt)
                            )
    for cfg in domain_cover:
        if not any(inv.contains(cfg.word, cfg.state) for inv in family):
            return InvariantResult(False, uncovered=cfg)
    return InvariantResult(True)


# ---------------------------------------------------------------------------
# Bounded IO through expansion
# ---------------------------------------------------------------------------


def natural_domain(
    op: OperationDef,
    max_word: int,
    oracles: Optional[OracleRegistry] = None,
) -> list[LWord]:
    """Bounded natural domain: free external words × object values."""
    ext_pool = enumerate_lwords(op.graph.hardware, op.ext, max_word)
    if op.val:
        if op.owner is None:
            raise ValueError(f"operation {op.name} has value tapes but no owner object")
        oracle = (oracles or {}).get(op.owner)
        if oracle is not None:
            vals = [v for v in oracle.values(max_word)]
        else:
            vals, _ = explore_values(op.owner, oracles or {}, max_word)
        vals = sorted(vals)
    else:
        vals = [LWord()]
    out = []
    for ext in ext_pool:
        for v in vals:
            out.append(LWord(list(ext.entries) + list(v.entries)))
    return out


def io_bounded(
    op: OperationDef,
    max_word: int,
    max_configs: int = 10**6,
    oracles: Optional[OracleRegistry] = None,
    nd: Optional[Iterable[LWord]] = None,
    total_size_cap: Optional[int] = None,
) -> tuple[set[tuple[LWord, str, LWord, str]], bool]:
    """IO quadruples of ``op`` computed by expanding and exploring.

    Seeds bounded reachability at every natural-domain word at the start
    and finish states, then projects the reach relation to the natural
    tapes.  Exact on the bounded domain when not truncated.
    """
    from sgraph.expansion import expand_operation

    exp = expand_operation(op)
    g0 = exp.result.graph
    if nd is None:
        nd = natural_domain(op, max_word, oracles)
    marker_of = {op.start: S_MARK, op.finish: F_MARK}
    seeds = [Config0(w, s) for w in nd for s in (op.start, op.finish)]
    result = reach_bounded(g0, seeds, max_word, max_configs, total_size_cap)
    natural = set(op.natural_tapes())
    proper = [
        c
        for c in seeds
        if c in result.configs
    ]
    quads: set[tuple[LWord, str, LWord, str]] = set()
    for c1 in proper:
        for c2 in proper:
            if result.same(c1, c2):
                quads.add((c1.word, marker_of[c1.state], c2.word, marker_of[c2.state]))
    return quads, result.truncated


def check_immutability(
    op: OperationDef,
    tape: str,
    max_word: int,
    oracles: Optional[OracleRegistry] = None,
) -> Optional[tuple[LWord, str, LWord, str]]:
    """None if ``tape`` is immutable (syntactically, or on the bounded
    domain); otherwise a counterexample quadruple."""
    if tape not in op.ext:
        raise ValueError(f"{tape} is not an external tape of {op.name}")
    if all(
        tape not in _mentions(e.label) or _mentions_immutably(e.label, tape)
        for e in op.graph.edges
    ):
        return None
    quads, _ = io_bounded(op, max_word, oracles=oracles)
    for (w1, m1, w2, m2) in quads:
        if w1[tape] != w2[tape]:
            return (w1, m1, w2, m2)
    return None
