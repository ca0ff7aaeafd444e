"""Degree-0 graphs: guarded word-transformation edges on labelled tapes.

An :class:`Action0` transforms a labelled tuple of words tape-by-tape
(``w_i ↦ t_l · w_i · t_r``) provided every guarded tape currently holds
exactly the guard word.  Edges carry actions; graphs are symmetric (every
edge is stored together with its inverse).  :func:`reach_bounded` is the
bounded-exploration oracle the rest of the toolkit verifies against.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from sgraph.words import EMPTY, Hardware, LWord, Word

# ---------------------------------------------------------------------------
# Fragments and actions
# ---------------------------------------------------------------------------

LEFT = "left-transform"
RIGHT = "right-transform"
GUARD = "guard"


@dataclass(frozen=True)
class Fragment:
    """One atomic piece of an action: a one-sided transform or a guard."""

    index: str
    kind: str  # LEFT, RIGHT or GUARD
    word: Word

    def __post_init__(self):
        if self.kind not in (LEFT, RIGHT, GUARD):
            raise ValueError(f"bad fragment kind {self.kind!r}")

    @property
    def trivial(self) -> bool:
        return self.kind != GUARD and not self.word


class Action0:
    """A per-tape transformation plus guards.

    ``transform`` maps a tape to its (left, right) multiplier pair and
    ``guard`` maps a tape to the exact word it must hold.  Tapes absent
    from both maps are untouched and unmentioned.  A guard entry with the
    empty word is the explicit guard ``[i = 1]`` (and counts as a
    mention), unlike absence of a guard.
    """

    __slots__ = ("transform", "guard", "_hash")

    def __init__(
        self,
        transform: Mapping[str, tuple[Word, Word]] = (),
        guard: Mapping[str, Word] = (),
    ):
        t = {
            i: (l, r)
            for i, (l, r) in (transform.items() if isinstance(transform, Mapping) else transform)
            if l or r
        }
        g = dict(guard.items() if isinstance(guard, Mapping) else guard)
        object.__setattr__(self, "transform", t)
        object.__setattr__(self, "guard", g)
        object.__setattr__(
            self,
            "_hash",
            hash((tuple(sorted(t.items())), tuple(sorted(g.items())))),
        )

    # -- queries ------------------------------------------------------

    def mentions(self) -> set[str]:
        return set(self.transform) | set(self.guard)

    def left(self, i: str) -> Word:
        return self.transform.get(i, (EMPTY, EMPTY))[0]

    def right(self, i: str) -> Word:
        return self.transform.get(i, (EMPTY, EMPTY))[1]

    def mentions_immutably(self, i: str) -> bool:
        """True if every mention of ``i`` is a guard (no transform)."""
        return i not in self.transform

    def is_identity(self) -> bool:
        return not self.transform and not self.guard

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Action0)
            and self.transform == other.transform
            and self.guard == other.guard
        )

    def __hash__(self) -> int:
        return self._hash

    def __setattr__(self, *_args):
        raise AttributeError("Action0 is immutable")

    # -- algebra ------------------------------------------------------

    def inverse(self) -> "Action0":
        """Inverse action: transforms inverted, guards pushed through."""
        inv_t = {i: (l.inv(), r.inv()) for i, (l, r) in self.transform.items()}
        inv_g = {i: self.left(i) * g * self.right(i) for i, g in self.guard.items()}
        return Action0(inv_t, inv_g)

    def apply_word(self, w: LWord) -> LWord:
        out = w
        for i, (l, r) in self.transform.items():
            out = out.set(i, l * out[i] * r)
        return out

    def failing_guard(self, w: LWord, tape_order: Sequence[str]) -> Optional[str]:
        """The first tape (in ``tape_order``) whose guard rejects ``w``."""
        for i in tape_order:
            if i in self.guard and w[i] != self.guard[i]:
                return i
        for i in self.guard:  # tapes outside the given order, if any
            if i not in tape_order and w[i] != self.guard[i]:
                return i
        return None

    def min_hardware(self) -> Hardware:
        items = []
        for i in sorted(self.mentions()):
            letters: set[str] = set()
            if i in self.transform:
                l, r = self.transform[i]
                letters |= l.symbols() | r.symbols()
            if i in self.guard:
                letters |= self.guard[i].symbols()
            items.append((i, letters))
        return Hardware(items)

    # -- text ---------------------------------------------------------

    def fragment_texts(self) -> list[str]:
        parts = []
        for i in sorted(self.transform):
            l, r = self.transform[i]
            chunks = []
            if l:
                chunks.append(str(l))
            chunks.append(i)
            if r:
                chunks.append(str(r))
            parts.append(f"[{i} -> {' . '.join(chunks)}]")
        for i in sorted(self.guard):
            parts.append(f"[{i} = {self.guard[i]}]")
        return parts

    def __str__(self) -> str:
        return "; ".join(self.fragment_texts()) or "(identity)"

    def __repr__(self) -> str:
        return f"Action0({str(self)})"


IDENTITY_ACTION = Action0()


def action_from_fragments(fragments: Iterable[Fragment]) -> Action0:
    """Assemble an action from a valid fragment set.

    Raises ``ValueError`` on two fragments with the same (index, kind).
    """
    seen: set[tuple[str, str]] = set()
    transform: dict[str, list[Word]] = {}
    guard: dict[str, Word] = {}
    for f in fragments:
        key = (f.index, f.kind)
        if key in seen:
            raise ValueError(f"duplicate fragment for {key}")
        seen.add(key)
        if f.kind == GUARD:
            guard[f.index] = f.word
        else:
            pair = transform.setdefault(f.index, [EMPTY, EMPTY])
            pair[0 if f.kind == LEFT else 1] = f.word
    return Action0({i: (l, r) for i, (l, r) in transform.items()}, guard)


def fragments_of_action(a: Action0) -> set[Fragment]:
    """The (trivial-free) fragment set of an action."""
    out: set[Fragment] = set()
    for i, (l, r) in a.transform.items():
        if l:
            out.add(Fragment(i, LEFT, l))
        if r:
            out.add(Fragment(i, RIGHT, r))
    for i, g in a.guard.items():
        out.add(Fragment(i, GUARD, g))
    return out


def invert_action(a: Action0) -> Action0:
    return a.inverse()


# Convenience constructors used heavily by the standard library ------------


def act(
    left: Mapping[str, Word] | None = None,
    right: Mapping[str, Word] | None = None,
    guard: Mapping[str, Word] | None = None,
) -> Action0:
    """Shorthand: ``act(left={'a': x}, guard={'b': EMPTY})``."""
    tapes = set(left or ()) | set(right or ())
    transform = {
        i: ((left or {}).get(i, EMPTY), (right or {}).get(i, EMPTY)) for i in tapes
    }
    return Action0(transform, dict(guard or {}))


# ---------------------------------------------------------------------------
# Edges, graphs, configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """A directed labelled edge.  ``eid`` is unique within its graph.

    The inverse edge has id ``eid + "~"`` (and vice versa) and is
    materialized by the graph, not by the caller.
    """

    eid: str
    tail: str
    head: str
    label: object  # Action0 here; ActionN at higher degree

    def __str__(self) -> str:
        return f"{self.eid}: {self.tail} -> {self.head} {{{self.label}}}"


def inverse_eid(eid: str) -> str:
    return eid[:-1] if eid.endswith("~") else eid + "~"


@dataclass(frozen=True)
class Config0:
    """A configuration: labelled word tuple plus a state."""

    word: LWord
    state: str

    def __str__(self) -> str:
        return f"({self.word}, {self.state})"


class Inapplicable(Exception):
    """Edge not applicable: wrong state or a failing guard."""

    WRONG_STATE = "wrong_state"
    GUARD_FAILED = "guard_failed"

    def __init__(self, reason: str, tape: Optional[str] = None):
        self.reason = reason
        self.tape = tape
        msg = reason if tape is None else f"{reason}({tape})"
        super().__init__(msg)


class RunError(Exception):
    """A path replay failed; carries the first failing step index."""

    def __init__(self, index: int, cause: Inapplicable):
        self.index = index
        self.cause = cause
        super().__init__(f"step {index}: {cause}")


class SGraph0:
    """A symmetric degree-0 graph.

    Construct with the edges of one orientation only; inverses are added
    automatically.  Edges form a multiset: parallel edges with equal
    labels stay distinct (distinct ``eid``).
    """

    def __init__(
        self,
        hardware: Hardware,
        states: Iterable[str],
        edges: Iterable[Edge],
        add_inverses: bool = True,
    ):
        self.hardware = hardware
        self.states = tuple(dict.fromkeys(states))
        state_set = set(self.states)
        directed: list[Edge] = []
        seen_ids: set[str] = set()
        for e in edges:
            if e.eid in seen_ids:
                raise ValueError(f"duplicate edge id {e.eid!r}")
            seen_ids.add(e.eid)
            if e.tail not in state_set or e.head not in state_set:
                raise ValueError(f"edge {e.eid!r} endpoint outside state set")
            if isinstance(e.label, Action0) and not e.label.min_hardware() <= hardware:
                raise ValueError(f"edge {e.eid!r} label incompatible with hardware")
            directed.append(e)
            if add_inverses and isinstance(e.label, Action0):
                inv = Edge(inverse_eid(e.eid), e.head, e.tail, e.label.inverse())
                if inv.eid in seen_ids:
                    raise ValueError(f"duplicate edge id {inv.eid!r}")
                seen_ids.add(inv.eid)
                directed.append(inv)
        self.edges = tuple(directed)
        self.by_id = {e.eid: e for e in self.edges}
        self._out: dict[str, tuple[Edge, ...]] = {}
        buckets: dict[str, list[Edge]] = {s: [] for s in self.states}
        for e in self.edges:
            buckets[e.tail].append(e)
        self._out = {s: tuple(es) for s, es in buckets.items()}

    def out_edges(self, state: str) -> tuple[Edge, ...]:
        return self._out.get(state, ())

    def edge(self, eid: str) -> Edge:
        return self.by_id[eid]

    def positive_edges(self) -> list[Edge]:
        """One representative per inverse pair (the non-``~`` ids)."""
        return [e for e in self.edges if not e.eid.endswith("~")]

    def __repr__(self) -> str:
        return (
            f"SGraph0({len(self.states)} states, {len(self.edges)} directed edges, "
            f"{len(self.hardware.tapes)} tapes)"
        )


def apply_edge(graph: SGraph0, c: Config0, e: Edge) -> Config0:
    """Apply edge ``e`` to configuration ``c`` or raise :class:`Inapplicable`."""
    if c.state != e.tail:
        raise Inapplicable(Inapplicable.WRONG_STATE)
    label: Action0 = e.label
    bad = label.failing_guard(c.word, graph.hardware.tapes)
    if bad is not None:
        raise Inapplicable(Inapplicable.GUARD_FAILED, bad)
    return Config0(label.apply_word(c.word), e.head)


@dataclass
class Computation0:
    """A replayed computation: configurations and the edges between them."""

    configs: list[Config0]
    edges: list[Edge]

    @property
    def tm(self) -> int:
        return len(self.edges)

    @property
    def sp(self) -> int:
        return max(c.word.size() for c in self.configs)

    @property
    def ar(self) -> int:
        return sum(c.word.size() for c in self.configs)

    @property
    def start(self) -> Config0:
        return self.configs[0]

    @property
    def end(self) -> Config0:
        return self.configs[-1]


def run(graph: SGraph0, c: Config0, path: Sequence[str | Edge]) -> Computation0:
    """Replay ``path`` (edge ids or edges) from ``c``.

    Returns the unique supported computation or raises :class:`RunError`
    with the first failing step index (0-based).
    """
    configs = [c]
    edges: list[Edge] = []
    for k, step in enumerate(path):
        e = graph.edge(step) if isinstance(step, str) else step
        try:
            c = apply_edge(graph, c, e)
        except Inapplicable as exc:
            raise RunError(k, exc) from exc
        configs.append(c)
        edges.append(e)
    return Computation0(configs, edges)


# ---------------------------------------------------------------------------
# Bounded reachability and rst-closure
# ---------------------------------------------------------------------------


class UnionFind:
    """Standard union-find over hashable elements."""

    def __init__(self):
        self.parent: dict[Hashable, Hashable] = {}

    def add(self, x: Hashable) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: Hashable) -> Hashable:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: Hashable, y: Hashable) -> None:
        self.add(x)
        self.add(y)
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry

    def same(self, x: Hashable, y: Hashable) -> bool:
        return x in self.parent and y in self.parent and self.find(x) == self.find(y)

    def classes(self) -> list[set]:
        buckets: dict[Hashable, set] = {}
        for x in self.parent:
            buckets.setdefault(self.find(x), set()).add(x)
        return list(buckets.values())


def rst_closure(pairs: Iterable[tuple], universe: Iterable = ()) -> list[set]:
    """Reflexive-symmetric-transitive closure, returned as disjoint classes."""
    uf = UnionFind()
    for x in universe:
        uf.add(x)
    for x, y in pairs:
        uf.union(x, y)
    return uf.classes()


@dataclass
class ReachResult:
    """Result of :func:`reach_bounded`."""

    configs: set[Config0]
    relation: UnionFind
    truncated: bool

    def same(self, a: Config0, b: Config0) -> bool:
        return self.relation.same(a, b)


def within_cap(w: LWord, max_word: int) -> bool:
    return all(len(word) <= max_word for _, word in w.entries)


def reach_bounded(
    graph: SGraph0,
    seeds: Iterable[Config0],
    max_word: int,
    max_configs: int = 10**6,
    total_size_cap: Optional[int] = None,
) -> ReachResult:
    """Breadth-first closure of ``seeds`` under edge application.

    Successors with any single tape word longer than ``max_word`` (or,
    optionally, total size above ``total_size_cap``) are discarded.
    ``truncated`` is set when ``max_configs`` cut the frontier.
    """
    uf = UnionFind()
    seen: set[Config0] = set()
    queue: deque[Config0] = deque()
    truncated = False
    for s in seeds:
        if not within_cap(s.word, max_word):
            continue
        if s not in seen:
            seen.add(s)
            uf.add(s)
            queue.append(s)
    while queue:
        c = queue.popleft()
        for e in graph.out_edges(c.state):
            try:
                nxt = apply_edge(graph, c, e)
            except Inapplicable:
                continue
            if not within_cap(nxt.word, max_word):
                continue
            if total_size_cap is not None and nxt.word.size() > total_size_cap:
                continue
            if nxt in seen:
                uf.union(c, nxt)
                continue
            if len(seen) >= max_configs:
                truncated = True
                continue
            seen.add(nxt)
            uf.union(c, nxt)
            queue.append(nxt)
    return ReachResult(seen, uf, truncated)


# ---------------------------------------------------------------------------
# SG0 text format
# ---------------------------------------------------------------------------


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def parse_fragment_text(body: str) -> Fragment | tuple[Fragment, ...]:
    """Parse ``i -> w1 . i . w2`` or ``i = w`` (without brackets).

    Chunks are separated by ``·`` or by a dot with whitespace around it;
    a bare dot inside a chunk is part of the tape name (expansion names
    composite tapes ``edge.tape``).
    """
    if "->" in body:
        lhs, rhs = (p.strip() for p in body.split("->", 1))
        chunks = [p.strip() for p in _re.split(r"\s+\.\s+|·", rhs)]
        try:
            pos = chunks.index(lhs)
        except ValueError:
            raise ValueError(f"transform {body!r} must mention tape {lhs!r}")
        left = Word.parse("·".join(chunks[:pos])) if pos else EMPTY
        right = Word.parse("·".join(chunks[pos + 1:])) if pos + 1 < len(chunks) else EMPTY
        frags = []
        if left:
            frags.append(Fragment(lhs, LEFT, left))
        if right:
            frags.append(Fragment(lhs, RIGHT, right))
        return tuple(frags) if len(frags) != 1 else frags[0]
    if "=" in body:
        lhs, rhs = (p.strip() for p in body.split("=", 1))
        return Fragment(lhs, GUARD, Word.parse(rhs))
    raise ValueError(f"cannot parse fragment {body!r}")


def parse_action_block(block: str) -> Action0:
    """Parse the ``[...]; [...];`` body of an edge block."""
    frags: list[Fragment] = []
    for m_frag in _BRACKET_RE.finditer(block):
        parsed = parse_fragment_text(m_frag.group(1))
        frags.extend(parsed if isinstance(parsed, tuple) else (parsed,))
    return action_from_fragments(frags)


import re as _re

_BRACKET_RE = _re.compile(r"\[([^\]]*)\]")
_HW_RE = _re.compile(r"hardware\s*\{([^}]*)\}", _re.S)
_STATE_RE = _re.compile(r"\bstate\s+([^\s;]+)\s*;")
_EDGE_RE = _re.compile(r"\bedge\s+(\S+)\s*->\s*(\S+)\s*\{([^}]*)\}", _re.S)


def parse_hardware(text: str) -> Hardware:
    items = []
    for line in text.split(";"):
        line = line.strip()
        if not line:
            continue
        name, letters = (p.strip() for p in line.split(":", 1))
        alpha = [a.strip() for a in letters.split(",") if a.strip()]
        items.append((name, alpha))
    return Hardware(items)


def parse_sg0(text: str) -> SGraph0:
    """Parse the SG0 text format; inverse edges are implied."""
    text = _strip_comments(text)
    m = _HW_RE.search(text)
    if not m:
        raise ValueError("missing hardware block")
    hardware = parse_hardware(m.group(1))
    states = _STATE_RE.findall(text)
    if not states:
        raise ValueError("no states declared")
    edges = []
    for k, (tail, head, block) in enumerate(_EDGE_RE.findall(text)):
        edges.append(Edge(f"e{k + 1}", tail, head, parse_action_block(block)))
    return SGraph0(hardware, states, edges)


def dump_sg0(graph: SGraph0) -> str:
    """Serialize to SG0 text (one orientation per inverse pair)."""
    lines = ["hardware {"]
    for t in graph.hardware.tapes:
        lines.append(f"  {t}: {','.join(sorted(graph.hardware.alphabets[t]))};")
    lines.append("}")
    for s in graph.states:
        lines.append(f"state {s};")
    for e in graph.positive_edges():
        body = " ".join(f"{f};" for f in e.label.fragment_texts())
        lines.append(f"edge {e.tail} -> {e.head} {{ {body} }}")
    return "\n".join(lines) + "\n"
