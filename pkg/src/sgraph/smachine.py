"""Multi-tape state machines on admissible words, and graph conversions.

An admissible word interleaves one state letter per part with reduced
tape words: ``q₁ u₁ q₂ … u_N q_{N+1}``.  A rule simultaneously replaces
disjoint state-delimited subwords.  The module converts machines to
degree-0 graphs and back (the two directions of the machine–graph
correspondence), decides graph isomorphism at desk scale, and measures
computation costs.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from sgraph.graph0 import (
    Action0,
    Config0,
    Edge,
    SGraph0,
    inverse_eid,
)
from sgraph.words import EMPTY, Hardware, LWord, Word

# ---------------------------------------------------------------------------
# Hardware, admissible words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SMHardware:
    """``N`` tape alphabets and ``N+1`` pairwise disjoint state-letter parts."""

    tape_alphabets: tuple[frozenset[str], ...]  # Y_1..Y_N
    state_parts: tuple[tuple[str, ...], ...]  # Q_1..Q_{N+1}

    def __post_init__(self):
        if len(self.state_parts) != self.N + 1:
            raise ValueError("need N+1 state parts for N tapes")
        seen: set[str] = set()
        for part in self.state_parts:
            for q in part:
                if q in seen:
                    raise ValueError(f"state letter {q!r} in two parts")
                seen.add(q)
        tape_letters = set().union(*self.tape_alphabets) if self.tape_alphabets else set()
        if seen & tape_letters:
            raise ValueError("state letters overlap tape letters")

    @property
    def N(self) -> int:
        return len(self.tape_alphabets)

    def part_of(self, q: str) -> int:
        for k, part in enumerate(self.state_parts, start=1):
            if q in part:
                return k
        raise ValueError(f"unknown state letter {q!r}")


@dataclass(frozen=True)
class AdmissibleWord:
    """``states[i]`` is the part-(i+1) letter; ``tapes[i]`` the tape-(i+1) word."""

    states: tuple[str, ...]
    tapes: tuple[Word, ...]

    def size(self) -> int:
        """Letter count including the N+1 state letters."""
        return len(self.states) + sum(len(u) for u in self.tapes)

    def __str__(self) -> str:
        chunks = []
        for k, q in enumerate(self.states):
            chunks.append(q)
            if k < len(self.tapes) and self.tapes[k]:
                chunks.append(str(self.tapes[k]))
        return "·".join(chunks)


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subrule:
    """Replace ``q^l u^l … u^{r-1} q^r`` by ``v^{l-1} p^l v^l … p^r v^r``."""

    l: int  # first part index (1-based)
    r: int  # last part index
    u_states: tuple[str, ...]  # q^l..q^r
    u_words: tuple[Word, ...]  # u^l..u^{r-1}
    v_left: Word  # v^{l-1}, over Y_{l-1} (trivial when l=1)
    v_states: tuple[str, ...]  # p^l..p^r
    v_words: tuple[Word, ...]  # v^l..v^{r-1}
    v_right: Word  # v^r, over Y_r (trivial when r=N+1)

    def __post_init__(self):
        span = self.r - self.l + 1
        if not (len(self.u_states) == len(self.v_states) == span):
            raise ValueError("state tuple length must match the interval")
        if not (len(self.u_words) == len(self.v_words) == span - 1):
            raise ValueError("word tuple length must match the interval")

    def inverse(self) -> "Subrule":
        return Subrule(
            self.l,
            self.r,
            self.v_states,
            self.v_words,
            self.v_left.inv(),
            self.u_states,
            self.u_words,
            self.v_right.inv(),
        )


@dataclass(frozen=True)
class SRule:
    """A list of subrules over pairwise disjoint, increasing part intervals."""

    subrules: tuple[Subrule, ...]

    def __post_init__(self):
        last = 0
        for sub in self.subrules:
            if sub.l <= last:
                raise ValueError("subrule intervals must be disjoint and increasing")
            last = sub.r

    def inverse(self) -> "SRule":
        return SRule(tuple(s.inverse() for s in self.subrules))

    def parts_mentioned(self) -> set[int]:
        out: set[int] = set()
        for s in self.subrules:
            out.update(range(s.l, s.r + 1))
        return out


class RuleInapplicable(Exception):
    def __init__(self, subrule_index: int):
        self.subrule_index = subrule_index
        super().__init__(f"subrule {subrule_index} does not match")


def apply_rule(hw: SMHardware, w: AdmissibleWord, rule: SRule) -> AdmissibleWord:
    """Simultaneously replace every subrule's subword, then reduce."""
    for t, sub in enumerate(rule.subrules):
        for k in range(sub.r - sub.l + 1):
            if w.states[sub.l - 1 + k] != sub.u_states[k]:
                raise RuleInapplicable(t)
        for k in range(sub.r - sub.l):
            if w.tapes[sub.l - 1 + k] != sub.u_words[k]:
                raise RuleInapplicable(t)
    states = list(w.states)
    tapes = list(w.tapes)
    left_mul = [EMPTY] * (hw.N + 2)  # left multiplier per tape index
    right_mul = [EMPTY] * (hw.N + 2)
    for sub in rule.subrules:
        for k in range(sub.r - sub.l + 1):
            states[sub.l - 1 + k] = sub.v_states[k]
        for k in range(sub.r - sub.l):
            tapes[sub.l - 1 + k] = sub.v_words[k]
        if sub.l >= 2:
            right_mul[sub.l - 1] = sub.v_left  # u_{l-1} · v^{l-1}
        if sub.r <= hw.N:
            left_mul[sub.r] = sub.v_right  # v^r · u_r
    for i in range(1, hw.N + 1):
        if left_mul[i] or right_mul[i]:
            tapes[i - 1] = left_mul[i] * tapes[i - 1] * right_mul[i]
    return AdmissibleWord(tuple(states), tuple(tapes))


class SMachine:
    """Hardware plus a symmetric rule set.

    Provide one orientation per rule; inverses are added with id suffix
    ``~`` so rule inversion mirrors edge-id inversion in graphs.
    """

    def __init__(self, hardware: SMHardware, rules: Mapping[str, SRule]):
        self.hardware = hardware
        full: dict[str, SRule] = {}
        for name, rule in rules.items():
            full[name] = rule
            full[inverse_eid(name)] = rule.inverse()
        self.rules = full

    def positive_rules(self) -> dict[str, SRule]:
        return {n: r for n, r in self.rules.items() if not n.endswith("~")}


@dataclass
class RecognizingSMachine:
    machine: SMachine
    input_tape: int  # 1-based tape index
    start_states: tuple[str, ...]
    finish_states: tuple[str, ...]

    def input_word(self, w: Word) -> AdmissibleWord:
        tapes = [EMPTY] * self.machine.hardware.N
        tapes[self.input_tape - 1] = w
        return AdmissibleWord(self.start_states, tuple(tapes))

    def accept_word(self) -> AdmissibleWord:
        return AdmissibleWord(self.finish_states, tuple([EMPTY] * self.machine.hardware.N))


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------


@dataclass
class CostReport:
    tm: int
    sp: int
    ar: int


@dataclass
class MachineComputation:
    words: list[AdmissibleWord]
    history: list[str]  # rule names


def measure_machine(c: MachineComputation) -> CostReport:
    sizes = [w.size() for w in c.words]
    return CostReport(len(c.history), max(sizes), sum(sizes))


def measure_graph(configs: Sequence[Config0], steps: int) -> CostReport:
    sizes = [c.word.size() for c in configs]
    return CostReport(steps, max(sizes), sum(sizes))


def recognize_bounded(
    m: RecognizingSMachine,
    w: Word,
    max_word: int,
    max_steps: int = 10**5,
) -> Optional[MachineComputation]:
    """BFS over the full symmetric rule set from the input configuration
    to the accept configuration.  ``None`` means not found within caps —
    never a proof of rejection."""
    hw = m.machine.hardware
    start = m.input_word(w)
    target = m.accept_word()
    parent: dict[AdmissibleWord, Optional[tuple[AdmissibleWord, str]]] = {start: None}
    queue = deque([start])
    expanded = 0
    while queue and expanded < max_steps:
        cur = queue.popleft()
        expanded += 1
        for name, rule in m.machine.rules.items():
            try:
                nxt = apply_rule(hw, cur, rule)
            except RuleInapplicable:
                continue
            if any(len(u) > max_word for u in nxt.tapes):
                continue
            if nxt in parent:
                continue
            parent[nxt] = (cur, name)
            if nxt == target:
                words = [nxt]
                history = []
                node = nxt
                while parent[node] is not None:
                    prev, rname = parent[node]
                    history.append(rname)
                    words.append(prev)
                    node = prev
                return MachineComputation(list(reversed(words)), list(reversed(history)))
            queue.append(nxt)
    return None


# ---------------------------------------------------------------------------
# Machine -> graph
# ---------------------------------------------------------------------------


def state_name(states: Sequence[str]) -> str:
    return "|".join(states)


@dataclass
class MachineGraph:
    graph: SGraph0
    tape_of_index: dict[int, str]  # machine tape index -> graph tape name
    edge_rule: dict[str, str]  # edge id -> rule name

    def mu(self, w: AdmissibleWord) -> Config0:
        """The correspondence: admissible word -> graph configuration."""
        entries = [(self.tape_of_index[i + 1], u) for i, u in enumerate(w.tapes)]
        return Config0(LWord(entries), state_name(w.states))


def graph_from_machine(m: SMachine) -> MachineGraph:
    """One graph state per state-letter tuple; per rule, one edge per
    completion of the unmentioned parts."""
    hw = m.hardware
    tape_names = {i: str(i) for i in range(1, hw.N + 1)}
    hardware = Hardware([(tape_names[i], hw.tape_alphabets[i - 1]) for i in range(1, hw.N + 1)])
    states = [state_name(t) for t in itertools.product(*hw.state_parts)]
    edges: list[Edge] = []
    edge_rule: dict[str, str] = {}
    for rname, rule in m.rules.items():
        mentioned = rule.parts_mentioned()
        free_parts = [j for j in range(1, hw.N + 2) if j not in mentioned]
        sub_of_part: dict[int, tuple[Subrule, int]] = {}
        for sub in rule.subrules:
            for k in range(sub.l, sub.r + 1):
                sub_of_part[k] = (sub, k - sub.l)
        # label fragments are independent of the completion θ
        transform: dict[str, tuple[Word, Word]] = {}
        guard: dict[str, Word] = {}
        for sub in rule.subrules:
            for i in range(sub.l, sub.r):  # interior tapes
                mul = sub.v_words[i - sub.l] * sub.u_words[i - sub.l].inv()
                if mul:
                    transform[tape_names[i]] = (mul, EMPTY)
                guard[tape_names[i]] = sub.u_words[i - sub.l]
            if sub.r <= hw.N and sub.v_right:
                tname = tape_names[sub.r]
                l0, r0 = transform.get(tname, (EMPTY, EMPTY))
                transform[tname] = (sub.v_right * l0, r0)
            if sub.l >= 2 and sub.v_left:
                tname = tape_names[sub.l - 1]
                l0, r0 = transform.get(tname, (EMPTY, EMPTY))
                transform[tname] = (l0, r0 * sub.v_left)
        label = Action0(transform, guard)
        for k, theta in enumerate(
            itertools.product(*[hw.state_parts[j - 1] for j in free_parts])
        ):
            fill = dict(zip(free_parts, theta))
            tail = []
            head = []
            for j in range(1, hw.N + 2):
                if j in fill:
                    tail.append(fill[j])
                    head.append(fill[j])
                else:
                    sub, off = sub_of_part[j]
                    tail.append(sub.u_states[off])
                    head.append(sub.v_states[off])
            base = rname[:-1] if rname.endswith("~") else rname
            suffix = "~" if rname.endswith("~") else ""
            eid = f"{base}.{k}{suffix}"
            edges.append(Edge(eid, state_name(tail), state_name(head), label))
            edge_rule[eid] = rname
    g = SGraph0(hardware, states, edges, add_inverses=False)
    return MachineGraph(g, tape_names, edge_rule)


# ---------------------------------------------------------------------------
# Graph -> machine
# ---------------------------------------------------------------------------


@dataclass
class GraphMachine:
    machine: SMachine
    eta: tuple[str, ...]  # machine tape index i -> graph tape eta[i-1]
    rule_edge: dict[str, str]  # rule name -> edge id
    aux_states: tuple[str, ...]  # the singleton letters q_j* for parts 2..N+1

    def mu(self, c: Config0) -> AdmissibleWord:
        tapes = tuple(c.word[t] for t in self.eta)
        return AdmissibleWord((c.state,) + self.aux_states, tapes)


def mgi_intervals(label: Action0, eta: Sequence[str]) -> list[tuple[int, int]]:
    """Maximal guarded intervals of parts 1..N+1: tape i separates parts
    i and i+1 unless the edge guards it."""
    n = len(eta)
    intervals = []
    l = 1
    for i in range(1, n + 1):
        if eta[i - 1] not in label.guard:
            intervals.append((l, i))
            l = i + 1
    intervals.append((l, n + 1))
    return intervals


def machine_from_graph(g: SGraph0, eta: Optional[Sequence[str]] = None) -> GraphMachine:
    """Part 1 holds the graph states; parts 2..N+1 are singletons; one
    rule per edge, decomposed along the maximal guarded intervals."""
    if eta is None:
        eta = list(g.hardware.tapes)
    eta = list(eta)
    if sorted(eta) != sorted(g.hardware.tapes):
        raise ValueError("eta must enumerate the graph's tapes")
    n = len(eta)
    aux = tuple(f"q{j}*" for j in range(2, n + 2))
    hw = SMHardware(
        tuple(frozenset(g.hardware.alphabets[t]) for t in eta),
        (tuple(g.states),) + tuple((a,) for a in aux),
    )

    def letter(part: int, graph_state: str) -> str:
        return graph_state if part == 1 else aux[part - 2]

    def t_left(label: Action0, part_tape: int) -> Word:
        if part_tape < 1 or part_tape > n:
            return EMPTY
        return label.left(eta[part_tape - 1])

    def t_right(label: Action0, part_tape: int) -> Word:
        if part_tape < 1 or part_tape > n:
            return EMPTY
        return label.right(eta[part_tape - 1])

    rules: dict[str, SRule] = {}
    rule_edge: dict[str, str] = {}
    for e in g.positive_edges():
        label: Action0 = e.label
        subs = []
        for (l, r) in mgi_intervals(label, eta):
            u_states = tuple(letter(j, e.tail) for j in range(l, r + 1))
            v_states = tuple(letter(j, e.head) for j in range(l, r + 1))
            u_words = tuple(label.guard[eta[j - 1]] for j in range(l, r))
            v_words = tuple(
                t_left(label, j) * label.guard[eta[j - 1]] * t_right(label, j)
                for j in range(l, r)
            )
            subs.append(
                Subrule(l, r, u_states, u_words, t_right(label, l - 1), v_states, v_words, t_left(label, r))
            )
        rules[e.eid] = SRule(tuple(subs))
        rule_edge[e.eid] = e.eid
        rule_edge[inverse_eid(e.eid)] = inverse_eid(e.eid)
    return GraphMachine(SMachine(hw, rules), tuple(eta), rule_edge, aux)


# ---------------------------------------------------------------------------
# Graph isomorphism (exact, desk scale)
# ---------------------------------------------------------------------------


def _label_signature(label: Action0, tape_map: Mapping[str, str]) -> tuple:
    transform = tuple(
        sorted((tape_map[i], l, r) for i, (l, r) in label.transform.items())
    )
    guard = tuple(sorted((tape_map[i], w) for i, w in label.guard.items()))
    return (transform, guard)


def graph_isomorphic(
    g1: SGraph0, g2: SGraph0, max_states: int = 48
) -> Optional[tuple[dict[str, str], dict[str, str]]]:
    """Search for state + tape bijections making the graphs identical.

    Letters are never renamed: after reindexing, alphabets and action
    words must match exactly.  Returns (state_map, tape_map) or None.
    """
    if len(g1.states) != len(g2.states) or len(g1.edges) != len(g2.edges):
        return None
    if len(g1.hardware.tapes) != len(g2.hardware.tapes):
        return None
    if len(g1.states) > max_states:
        raise ValueError("graph too large for exact isomorphism search")
    tapes1, tapes2 = g1.hardware.tapes, g2.hardware.tapes
    # candidate tape images must carry identical alphabets
    candidates = {
        t1: [t2 for t2 in tapes2 if g1.hardware.alphabets[t1] == g2.hardware.alphabets[t2]]
        for t1 in tapes1
    }

    def edge_multiset(g: SGraph0, tape_map: Mapping[str, str]) -> dict:
        out: dict = {}
        for e in g.edges:
            key = (e.tail, e.head, _label_signature(e.label, tape_map))
            out[key] = out.get(key, 0) + 1
        return out

    id2 = {t: t for t in tapes2}
    target_by_state: dict = edge_multiset(g2, id2)

    for perm in itertools.permutations(tapes2):
        tape_map = dict(zip(tapes1, perm))
        if any(tape_map[t1] not in candidates[t1] for t1 in tapes1):
            continue
        sig1 = {}
        adj: dict[str, list[tuple[str, tuple]]] = {s: [] for s in g1.states}
        for e in g1.edges:
            adj[e.tail].append((e.head, _label_signature(e.label, tape_map)))
        adj2: dict[str, list[tuple[str, tuple]]] = {s: [] for s in g2.states}
        for e in g2.edges:
            adj2[e.tail].append((e.head, _label_signature(e.label, id2)))

        def match(state_map: dict[str, str], used: set[str]) -> Optional[dict[str, str]]:
            if len(state_map) == len(g1.states):
                return dict(state_map)
            # choose an unmapped state adjacent to the mapped region if possible
            pending = [s for s in g1.states if s not in state_map]
            s1 = max(
                pending,
                key=lambda s: sum(1 for (h, _l) in adj[s] if h in state_map),
            )
            deg1 = sorted(lab for (_h, lab) in adj[s1])
            for s2 in g2.states:
                if s2 in used:
                    continue
                if sorted(lab for (_h, lab) in adj2[s2]) != deg1:
                    continue
                state_map[s1] = s2
                used.add(s2)
                ok = _consistent(s1, s2, state_map)
                if ok:
                    res = match(state_map, used)
                    if res is not None:
                        return res
                del state_map[s1]
                used.discard(s2)
            return None

        def _consistent(s1: str, s2: str, state_map: dict[str, str]) -> bool:
            # every edge between mapped states must exist with equal multiplicity
            for a1 in g1.states:
                if a1 not in state_map:
                    continue
                need: dict = {}
                for (h, lab) in adj[a1]:
                    if h in state_map:
                        need[(state_map[h], lab)] = need.get((state_map[h], lab), 0) + 1
                have: dict = {}
                for (h, lab) in adj2[state_map[a1]]:
                    if h in state_map.values():
                        have[(h, lab)] = have.get((h, lab), 0) + 1
                if need != have:
                    return False
            return True

        result = match({}, set())
        if result is not None:
            return result, tape_map
    return None


# ---------------------------------------------------------------------------
# SM text format
# ---------------------------------------------------------------------------

_PARTS_RE = re.compile(r"parts\s+((?:Q\d+\s*=\s*\{[^}]*\}\s*;?\s*)+)")
_PART_RE = re.compile(r"Q(\d+)\s*=\s*\{([^}]*)\}")
_TAPES_RE = re.compile(r"tapes\s+((?:Y\d+\s*=\s*\{[^}]*\}\s*;?\s*)+)")
_TAPE_RE = re.compile(r"Y(\d+)\s*=\s*\{([^}]*)\}")
_RULE_RE = re.compile(r"rule\s*\{([^}]*)\}", re.S)


def _parse_side(hw: SMHardware, text: str) -> tuple[int, list[str], list[Word], Word, Word]:
    """Parse one side of a subrule into (l, states, words, left, right)."""
    tokens = [t for t in re.split(r"\s+", text.strip()) if t]
    state_pos = []
    parsed: list[tuple[str, Optional[str]]] = []
    all_states = {q for part in hw.state_parts for q in part}
    for tok in tokens:
        if tok in all_states:
            parsed.append(("state", tok))
        else:
            parsed.append(("word", tok))
    states = [tok for kind, tok in parsed if kind == "state"]
    if not states:
        raise ValueError(f"no state letters in {text!r}")
    l = hw.part_of(states[0])
    # words between consecutive states; leading word = v_left, trailing = v_right
    segments: list[list[str]] = [[]]
    for kind, tok in parsed:
        if kind == "state":
            segments.append([])
        else:
            segments[-1].append(tok)
    left = Word.parse("·".join(segments[0]))
    right = Word.parse("·".join(segments[-1]))
    words = [Word.parse("·".join(seg)) for seg in segments[1:-1]]
    return l, states, words, left, right


def parse_sm(text: str) -> SMachine:
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    parts: dict[int, tuple[str, ...]] = {}
    for m in _PART_RE.finditer(text):
        parts[int(m.group(1))] = tuple(
            s.strip() for s in m.group(2).split(",") if s.strip()
        )
    tapes: dict[int, frozenset[str]] = {}
    for m in _TAPE_RE.finditer(text):
        tapes[int(m.group(1))] = frozenset(
            s.strip() for s in m.group(2).split(",") if s.strip()
        )
    n = max(parts) - 1 if parts else 0
    hw = SMHardware(
        tuple(tapes.get(i, frozenset()) for i in range(1, n + 1)),
        tuple(parts[i] for i in range(1, n + 2)),
    )
    rules: dict[str, SRule] = {}
    for k, m in enumerate(_RULE_RE.finditer(text)):
        subs = []
        for line in m.group(1).split(";"):
            line = line.strip()
            if not line:
                continue
            u_txt, v_txt = (p.strip() for p in line.split("->", 1))
            l, u_states, u_words, u_left, u_right = _parse_side(hw, u_txt)
            lv, v_states, v_words, v_left, v_right = _parse_side(hw, v_txt)
            if u_left or u_right:
                raise ValueError("left side of a subrule cannot carry outer words")
            if lv != l:
                raise ValueError("subrule sides start in different parts")
            subs.append(
                Subrule(
                    l,
                    l + len(u_states) - 1,
                    tuple(u_states),
                    tuple(u_words),
                    v_left,
                    tuple(v_states),
                    tuple(v_words),
                    v_right,
                )
            )
        rules[f"r{k}"] = SRule(tuple(subs))
    return SMachine(hw, rules)


def dump_sm(m: SMachine) -> str:
    hw = m.hardware
    lines = []
    parts_txt = " ".join(
        f"Q{j}={{{','.join(part)}}};" for j, part in enumerate(hw.state_parts, start=1)
    )
    lines.append(f"parts {parts_txt}")
    tapes_txt = " ".join(
        f"Y{i}={{{','.join(sorted(a))}}};" for i, a in enumerate(hw.tape_alphabets, start=1)
    )
    lines.append(f"tapes {tapes_txt}")
    for name in sorted(m.positive_rules()):
        rule = m.rules[name]
        body = []
        for sub in rule.subrules:
            u_chunks = []
            for k, q in enumerate(sub.u_states):
                u_chunks.append(q)
                if k < len(sub.u_words) and sub.u_words[k]:
                    u_chunks.append(str(sub.u_words[k]))
            v_chunks = [str(sub.v_left)] if sub.v_left else []
            for k, p in enumerate(sub.v_states):
                v_chunks.append(p)
                if k < len(sub.v_words) and sub.v_words[k]:
                    v_chunks.append(str(sub.v_words[k]))
            if sub.v_right:
                v_chunks.append(str(sub.v_right))
            body.append(f"{' '.join(u_chunks)} -> {' '.join(v_chunks)};")
        lines.append(f"rule {{ {' '.join(body)} }}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Estimated cost of generic computations
# ---------------------------------------------------------------------------


def estimated_cost(
    steps: Sequence[tuple],  # (kind, M_e, untouched) with kind "deg0" or instance key
    start_size: int,
    estimating: Mapping[object, tuple],
) -> tuple[int, int]:
    """Price a generic computation without expanding it.

    ``steps``: for a degree-0 step pass ("deg0", max endpoint size, 0);
    for a positive step pass (instance key, M_e, untouched size) where
    ``estimating[key] = (f, g)`` are monotone cost callables.
    """
    tm = 0
    sp = start_size
    for kind, m_e, untouched in steps:
        if kind == "deg0":
            tm += 1
            sp = max(sp, m_e)
        else:
            f, g = estimating[kind]
            tm += f(m_e)
            sp = max(sp, g(m_e) + untouched)
    return tm, sp
