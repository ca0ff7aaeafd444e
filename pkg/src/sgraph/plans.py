"""Witness plans: generic computations with chosen per-call targets.

A plan realizes one input-output pair of an operation as a sequence of
generic edges; positive steps record the invoked operation's own
input/output words.  Plans lower recursively to degree-0 paths — either
against a materialized expansion (edge-id paths) or lazily (applying the
renamed actions directly), which costs only the path length even when
the full expansion would be enormous.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from sgraph.graph0 import Action0, inverse_eid
from sgraph.star import ActionN, F_MARK, GenericEdge, IOOracle, OperationDef, S_MARK
from sgraph.words import EMPTY, LWord, Word


@dataclass(frozen=True)
class PlanStep:
    """One generic step; for positive edges the inner endpoint words are
    recorded in the invoked operation's own coordinates."""

    ge: GenericEdge
    inner_before: Optional[LWord] = None
    inner_after: Optional[LWord] = None

    def reversed(self) -> "PlanStep":
        return PlanStep(self.ge.reversed(), self.inner_after, self.inner_before)


Plan = list  # list[PlanStep]


def reverse_plan(plan: Plan) -> Plan:
    return [step.reversed() for step in reversed(plan)]


def step0(edge, forward: bool = True) -> PlanStep:
    """A degree-0 step (forward: ŝ→f̂)."""
    return PlanStep(GenericEdge(S_MARK, F_MARK, edge) if forward else GenericEdge(F_MARK, S_MARK, edge))


def stepN(edge, m1: str, m2: str, before: LWord, after: LWord) -> PlanStep:
    return PlanStep(GenericEdge(m1, m2, edge), before, after)


class PlanError(Exception):
    pass


class StdObject:
    """A certified object: definition + IO oracle + planners + cost certs.

    ``planners[op]`` maps an in-relation quadruple to a plan (or None when
    the planner does not cover that shape).  ``costs[op] = (f, g)`` are
    monotone callables dominating the planner's lowered time and space.
    Registered globally so plans can lower through nested objects.
    """

    registry: dict = {}  # ObjectDef -> StdObject
    oracles: dict = {}  # ObjectDef -> IOOracle (shared with generic search)

    def __init__(
        self,
        obj,
        oracle: IOOracle,
        planners: Mapping[str, Callable],
        costs: Mapping[str, tuple],
        language: Optional[Callable[[Word], bool]] = None,
        certified: Iterable[str] = (),
    ):
        self.obj = obj
        self.oracle = oracle
        self.planners = dict(planners)
        self.costs = dict(costs)
        self.language = language
        self.certified = frozenset(certified)
        StdObject.registry[obj] = self
        StdObject.oracles[obj] = oracle

    # -- planning -----------------------------------------------------

    def plan(self, op: str, w1: LWord, m1: str, w2: LWord, m2: str) -> Optional[Plan]:
        if m1 == m2 and w1 == w2:
            return []
        fn = self.planners.get(op)
        if fn is None:
            return None
        direct = fn(w1, m1, w2, m2)
        if direct is not None:
            return direct
        if (m1, m2) == (F_MARK, S_MARK):
            back = fn(w2, S_MARK, w1, F_MARK)
            if back is not None:
                return reverse_plan(back)
        return None

    def plan_or_raise(self, op: str, w1: LWord, m1: str, w2: LWord, m2: str) -> Plan:
        p = self.plan(op, w1, m1, w2, m2)
        if p is None:
            raise PlanError(
                f"{self.obj.name}.{op}: no plan for ({w1},{m1}) -> ({w2},{m2})"
            )
        return p


def plan_witness(std: StdObject, op: str, w1: LWord, m1: str, w2: LWord, m2: str):
    """None ("not in relation") when the oracle rejects; otherwise a plan."""
    if not std.oracle.member(op, w1, m1, w2, m2):
        return None
    return std.plan_or_raise(op, w1, m1, w2, m2)


# ---------------------------------------------------------------------------
# Replay at the generic level
# ---------------------------------------------------------------------------


def replay_plan(op: OperationDef, w1: LWord, m1: str, plan: Plan) -> LWord:
    """Replay a plan on the operation's own graph, verifying guards and
    state continuity; returns the final word tuple."""
    word = w1
    state = op.sf(m1)
    for step in plan:
        ge = step.ge
        if state != ge.tail():
            raise PlanError(f"state mismatch at {ge}: at {state}")
        label = ge.edge.label
        if isinstance(label, Action0):
            if ge.end1 != ge.end2:
                action = label if ge.end1 == S_MARK else label.inverse()
                bad = action.failing_guard(word, sorted(word.tapes() | set(action.guard)))
                if bad is not None:
                    raise PlanError(f"guard {bad} fails at {ge}")
                word = action.apply_word(word)
        else:
            ren = label.outer_of_inner()
            inv_ren = {o: i for i, o in ren.items()}
            seen = word.restrict(set(ren.values())).rename(inv_ren)
            if step.inner_before is not None and seen != step.inner_before:
                raise PlanError(f"inner mismatch at {ge}: {seen} != {step.inner_before}")
            for inner, outer in ren.items():
                word = word.set(outer, step.inner_after[inner])
        state = ge.head()
    return word


# ---------------------------------------------------------------------------
# Lowering to degree 0
# ---------------------------------------------------------------------------


@dataclass
class LoweredRun:
    """Result of lowering + replaying a plan at degree 0."""

    tm: int
    sp: int
    end: dict  # global tape name -> Word (trivial entries absent)
    path: Optional[list] = None  # composite edge ids when collected
    max_tape: int = 0  # longest single tape seen along the run


def lower_run(
    std: StdObject,
    op_name: str,
    w1: LWord,
    m1: str,
    plan: Plan,
    collect_path: bool = False,
    trace: Optional[Callable[[str, int], None]] = None,
) -> LoweredRun:
    """Lower a plan recursively and replay it on the (virtual) expansion.

    Tape and edge names compose hierarchically exactly as the expansion
    pass names them, so collected paths replay verbatim on a materialized
    expansion.  Guards are verified at every degree-0 step.
    """
    config: dict[str, Word] = {}
    for t, w in w1.entries:
        config[t] = w
    state = {
        "tm": 0,
        "sp": sum(len(w) for w in config.values()),
        "mt": max((len(w) for w in config.values()), default=0),
    }
    path: list = [] if collect_path else None

    def apply_action(eid: str, action: Action0, out: Callable[[str], str]) -> None:
        for i, g in action.guard.items():
            if config.get(out(i), EMPTY) != g:
                raise PlanError(f"lowered guard [{i}={g}] fails at {eid}")
        for i, (l, r) in action.transform.items():
            gname = out(i)
            w = l * config.get(gname, EMPTY) * r
            if w:
                config[gname] = w
                if len(w) > state["mt"]:
                    state["mt"] = len(w)
            else:
                config.pop(gname, None)
        state["tm"] += 1
        size = sum(len(w) for w in config.values())
        if size > state["sp"]:
            state["sp"] = size
        if path is not None:
            path.append(eid)
        if trace is not None:
            trace(eid, size)

    def descend(
        cur: StdObject,
        op: str,
        m_in: str,
        steps: Plan,
        out: Callable[[str], str],
        eid_out: Callable[[str], str],
    ) -> None:
        for step in steps:
            ge = step.ge
            label = ge.edge.label
            if isinstance(label, Action0):
                if ge.end1 == ge.end2:
                    continue
                if ge.end1 == S_MARK:
                    apply_action(eid_out(ge.edge.eid), label, out)
                else:
                    apply_action(eid_out(inverse_eid(ge.edge.eid)), label.inverse(), out)
            else:
                inner_std = StdObject.registry.get(label.instance.obj)
                if inner_std is None:
                    raise PlanError(f"object {label.instance.obj.name} not registered")
                ren = label.outer_of_inner()
                before = LWord(
                    {i: config.get(out(o), EMPTY) for i, o in ren.items()}
                )
                if step.inner_before is not None and before != step.inner_before:
                    raise PlanError(f"inner mismatch lowering {ge}")
                inner_plan = inner_std.plan_or_raise(
                    label.operation, before, ge.end1, step.inner_after, ge.end2
                )
                eid = ge.edge.eid

                def out2(t, ren=ren, eid=eid, out=out):
                    return out(ren[t]) if t in ren else out(f"{eid}.{t}")

                def eid_out2(i, eid=eid, eid_out=eid_out):
                    return eid_out(f"{eid}.{i}")

                descend(inner_std, label.operation, ge.end1, inner_plan, out2, eid_out2)

    descend(std, op_name, m1, plan, lambda t: t, lambda i: i)
    return LoweredRun(state["tm"], state["sp"], dict(config), path, state["mt"])


def realize(
    std: StdObject, op: str, w1: LWord, m1: str, w2: LWord, m2: str, collect_path=False
) -> LoweredRun:
    """Plan and lower in one go, checking the final configuration."""
    plan = std.plan_or_raise(op, w1, m1, w2, m2)
    run = lower_run(std, op, w1, m1, plan, collect_path=collect_path)
    opdef = std.obj.operations[op]
    for t in opdef.natural_tapes():
        if run.end.get(t, EMPTY) != w2[t]:
            raise PlanError(f"final word mismatch on {t}: {run.end.get(t)} != {w2[t]}")
    for t, w in run.end.items():
        if t not in opdef.natural_tapes() and w:
            raise PlanError(f"non-trivial internal tape {t} at the end: {w}")
    return run


# ---------------------------------------------------------------------------
# Estimated cost of plans
# ---------------------------------------------------------------------------


def estimate_plan(
    std: StdObject, op_name: str, w1: LWord, m1: str, plan: Plan
) -> tuple[int, int]:
    """Price a plan per the estimating-set rules: degree-0 steps cost
    (1, max endpoint size); positive steps cost the invoked instance's
    certified pair at the step's maximal endpoint size, plus the size of
    the untouched tapes for space."""
    word = w1
    state_sp = word.size()
    tm = 0
    op = std.obj.operations[op_name]
    for step in plan:
        ge = step.ge
        label = ge.edge.label
        if isinstance(label, Action0):
            if ge.end1 != ge.end2:
                action = label if ge.end1 == S_MARK else label.inverse()
                nxt = action.apply_word(word)
                tm += 1
                state_sp = max(state_sp, word.size(), nxt.size())
                word = nxt
        else:
            inner_std = StdObject.registry[label.instance.obj]
            f, g = inner_std.costs[label.operation]
            ren = label.outer_of_inner()
            mentioned = set(ren.values())
            m_e = max(
                sum(len(word[o]) for o in mentioned),
                sum(len(step.inner_after[i]) for i in ren),
            )
            untouched = sum(len(w) for t, w in word.entries if t not in mentioned)
            tm += f(m_e)
            state_sp = max(state_sp, g(m_e) + untouched)
            nxt = word
            for inner, outer in ren.items():
                nxt = nxt.set(outer, step.inner_after[inner])
            word = nxt
    return tm, state_sp
