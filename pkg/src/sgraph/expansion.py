"""Lowering higher-degree graphs to degree 0.

Every positive edge is replaced by a fresh renamed copy of the (already
lowered) graph of the operation it invokes: external and value tapes map
through the edge's renamings, internal tapes become fresh "invisible"
tapes, and the inner start/finish states are glued onto the edge's tail
and head.  The result records full provenance so degree-0 paths can be
reduced back to generic paths of the source graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from sgraph.graph0 import Action0, Edge, SGraph0, inverse_eid
from sgraph.star import (
    ActionN,
    F_MARK,
    GenericEdge,
    OperationDef,
    S_MARK,
    StarGraph,
)
from sgraph.words import Hardware, LWord, Word


@dataclass
class EdgeExpansion:
    """How one positive edge was replaced."""

    edge: Edge
    tape_renaming: dict[str, str]  # inner tape -> outer tape
    state_renaming: dict[str, str]  # inner state -> outer state
    edge_renaming: dict[str, str]  # inner edge id -> outer edge id
    inner: "ExpansionResult"  # expansion of the invoked operation's graph


@dataclass
class ExpansionResult:
    """A lowered graph plus provenance."""

    graph: SGraph0
    invisible: tuple[str, ...]
    state_origin: dict[str, tuple[str, Optional[str]]]  # state -> ("proper"|"expanded", edge id)
    edge_origin: dict[str, tuple[str, str]]  # edge id -> ("proper"|"expanded", source id)
    expansions: dict[str, EdgeExpansion]  # positive edge id -> details
    source: StarGraph


def _rename_action(a: Action0, ren: Mapping[str, str]) -> Action0:
    transform = {ren[i]: (l, r) for i, (l, r) in a.transform.items()}
    guard = {ren[i]: g for i, g in a.guard.items()}
    return Action0(transform, guard)


_memo: dict[tuple[int, str], "ExpansionResult"] = {}


def expand_graph(g: StarGraph) -> ExpansionResult:
    """Lower ``g`` to degree 0 (identity when already degree 0)."""
    hardware_items: list[tuple[str, frozenset[str]]] = [
        (t, g.hardware.alphabets[t]) for t in g.hardware.tapes
    ]
    states = list(g.states)
    edges: list[Edge] = []
    invisible: list[str] = []
    state_origin = {s: ("proper", None) for s in g.states}
    edge_origin: dict[str, tuple[str, str]] = {}
    expansions: dict[str, EdgeExpansion] = {}

    for e in g.degree0_edges():
        edges.append(e)
        edge_origin[e.eid] = ("proper", e.eid)

    for e in g.positive_edges():
        label: ActionN = e.label
        inner = expand_operation_memo(label.instance.obj, label.operation)
        inner_op = inner.operation
        inner_g = inner_op.graph
        tape_ren = dict(label.outer_of_inner())
        for t in inner_g.hardware.tapes:
            if t not in tape_ren:  # internal or invisible: fresh name
                fresh = f"{e.eid}.{t}"
                tape_ren[t] = fresh
                invisible.append(fresh)
                hardware_items.append((fresh, inner_g.hardware.alphabets[t]))
        state_ren: dict[str, str] = {}
        for s in inner_g.states:
            if s == inner_op.start:
                state_ren[s] = e.tail
            elif s == inner_op.finish:
                state_ren[s] = e.head
            else:
                fresh = f"{e.eid}.{s}"
                state_ren[s] = fresh
                states.append(fresh)
                state_origin[fresh] = ("expanded", e.eid)
        edge_ren: dict[str, str] = {}
        for ie in inner_g.edges:
            new_id = f"{e.eid}.{ie.eid}"
            edge_ren[ie.eid] = new_id
            edges.append(
                Edge(new_id, state_ren[ie.tail], state_ren[ie.head], _rename_action(ie.label, tape_ren))
            )
            edge_origin[new_id] = ("expanded", e.eid)
        expansions[e.eid] = EdgeExpansion(e, tape_ren, state_ren, edge_ren, inner.result)

    graph0 = SGraph0(Hardware(hardware_items), states, edges, add_inverses=False)
    return ExpansionResult(graph0, tuple(invisible), state_origin, edge_origin, expansions, g)


@dataclass
class ExpandedOperation:
    """A degree-0 operation obtained by lowering, with its provenance."""

    operation: OperationDef
    result: ExpansionResult

    @property
    def invisible(self) -> tuple[str, ...]:
        return self.result.invisible


def expand_operation(op: OperationDef) -> ExpandedOperation:
    """Lower an operation: same ext/val, internals grow by invisible tapes."""
    result = expand_graph(op.graph)
    # wrap the lowered graph as a (positive-edge-free) StarGraph without
    # re-running the symmetric closure: it is symmetric already
    exp_graph = StarGraph.__new__(StarGraph)
    exp_graph.hardware = result.graph.hardware
    exp_graph.states = result.graph.states
    exp_graph.instances = ()
    exp_graph.edges = result.graph.edges
    exp_graph.by_id = result.graph.by_id
    lowered = OperationDef(
        op.name,
        exp_graph,
        op.ext,
        op.val,
        tuple(op.int) + result.invisible,
        op.start,
        op.finish,
        op.immutable_ext,
    )
    lowered.owner = op.owner
    return ExpandedOperation(lowered, result)


def expansion_size(op: OperationDef, budget: Optional[int] = None) -> Optional[int]:
    """Edge-pair count of the lowered graph, computed without building it.

    Returns None as soon as the running total exceeds ``budget``; a cheap
    guard before materializing a potentially enormous expansion.
    """
    memo: dict[tuple[int, str], int] = {}

    def size(o: OperationDef) -> Optional[int]:
        key = (id(o.graph), o.name)
        if key in memo:
            return memo[key]
        total = len(o.graph.degree0_edges())
        for e in o.graph.positive_edges():
            label: ActionN = e.label
            inner = size(label.instance.obj.operations[label.operation])
            if inner is None:
                return None
            total += inner
            if budget is not None and total > budget:
                return None
        memo[key] = total
        return total

    return size(op)


def expand_operation_memo(obj, op_name: str) -> ExpandedOperation:
    """Memoized per (object, operation); instantiated per edge by renaming."""
    key = (obj, op_name)
    cached = _memo.get(key)
    if cached is None:
        cached = expand_operation(obj.operations[op_name])
        _memo[key] = cached
    return cached


# ---------------------------------------------------------------------------
# Lifts and generic reductions
# ---------------------------------------------------------------------------


def lift_path(result: ExpansionResult, edge_id: str, path: Sequence[str]) -> list[str]:
    """Map a path inside the copy pasted for ``edge_id`` back to the
    operation's own lowered graph."""
    exp = result.expansions[edge_id]
    inv = {v: k for k, v in exp.edge_renaming.items()}
    out = []
    for eid in path:
        if eid not in inv:
            raise ValueError(f"edge {eid} is outside the copy for {edge_id}")
        out.append(inv[eid])
    return out


def generic_reduction(result: ExpansionResult, path: Sequence[str]) -> list[GenericEdge]:
    """Collapse a degree-0 path of the lowered graph (between proper
    states) to a generic path of the source graph.

    Maximal runs of edges expanded from one positive edge become a single
    generic edge whose markers are read off the glue states at entry and
    exit; loop-edge markers default to the canonical start-to-finish
    orientation.  Proper edges become ordinary forward/backward generic
    edges.
    """
    g = result.source
    out: list[GenericEdge] = []
    i = 0
    path = list(path)
    while i < len(path):
        eid = path[i]
        kind, src = result.edge_origin[eid]
        if kind == "proper":
            if eid in g.by_id:
                out.append(GenericEdge(S_MARK, F_MARK, g.edge(eid)))
            else:
                out.append(GenericEdge(F_MARK, S_MARK, g.edge(inverse_eid(eid))))
            i += 1
            continue
        # maximal run expanded from positive edge `src`, split at every
        # visit to a proper (glue) state so consecutive crossings of a
        # pasted loop copy stay separate generic edges
        j = i
        while j < len(path) and result.edge_origin[path[j]] == ("expanded", src):
            j += 1
            head = result.graph.edge(path[j - 1]).head
            if result.state_origin.get(head, ("expanded", src))[0] == "proper":
                break
        pos = g.edge(src)
        entry_state = result.graph.edge(path[i]).tail
        exit_state = result.graph.edge(path[j - 1]).head
        if result.state_origin.get(entry_state, ("expanded", src))[0] != "proper":
            raise ValueError(f"run for {src} does not start at a proper state")
        if result.state_origin.get(exit_state, ("expanded", src))[0] != "proper":
            raise ValueError(f"run for {src} does not end at a proper state")
        # read the end markers off the pasted copy itself: the run's first
        # edge leaves (and its last edge enters) the glued image of the
        # invoked operation's start or finish state
        exp_e = result.expansions[src]
        inv_edge = {v: k for k, v in exp_e.edge_renaming.items()}
        label = pos.label
        inner_op = label.instance.obj.operations[label.operation]
        inner_g = exp_e.inner.graph
        first_tail = inner_g.edge(inv_edge[path[i]]).tail
        last_head = inner_g.edge(inv_edge[path[j - 1]]).head
        m1 = S_MARK if first_tail == inner_op.start else F_MARK
        m2 = F_MARK if last_head == inner_op.finish else S_MARK
        out.append(GenericEdge(m1, m2, pos))
        i = j
    return out


def project_proper(result: ExpansionResult, w: LWord) -> LWord:
    """Restrict a lowered-graph word to the source graph's tapes."""
    return w.restrict(result.source.hardware.tapes)
