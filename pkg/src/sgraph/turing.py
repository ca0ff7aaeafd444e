"""Turing rewriting systems.

A Turing rewriting system (TRS) is a finite symmetric graph whose edges
carry actions: one fragment per tape, each either *exact* (``[u→v]``,
the whole tape word must equal ``u``) or *right-matching*
(``[*u→*v]``, the tape word must end in ``u``; the suffix is
replaced).  Tape contents are positive (monoid) words.  A TRS
recognizes ``w`` when a computation connects ``w`` on the input tape at
the start state to the all-empty configuration at the accept state.

Also here: normalized multi-tape machines whose transitions each touch
a single tape (delete one letter, or check emptiness), their conversion
to a TRS, and the projections of computations to single tapes.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

from sgraph.words import Hardware, Word

EXACT = "exact"
MATCHING = "matching"


def monoid_word(w: Word | str | Iterable[str]) -> Word:
    """Coerce to a positive word; reject inverse letters."""
    if isinstance(w, str):
        w = Word.parse(w) if ("·" in w or "^" in w) else Word((c, 1) for c in w)
    elif not isinstance(w, Word):
        w = Word((c, 1) for c in w)
    if any(sign != 1 for _, sign in w.letters):
        raise ValueError(f"not a monoid word: {w}")
    return w


@dataclass(frozen=True)
class TuringFragment:
    """One tape's piece of a TRS action."""

    kind: str  # EXACT or MATCHING
    u: Word
    v: Word

    def __post_init__(self):
        if self.kind not in (EXACT, MATCHING):
            raise ValueError(f"bad fragment kind {self.kind!r}")
        monoid_word(self.u)
        monoid_word(self.v)

    @property
    def size(self) -> int:
        return max(len(self.u), len(self.v))

    def inverse(self) -> "TuringFragment":
        return TuringFragment(self.kind, self.v, self.u)

    def is_identity(self) -> bool:
        return self.kind == MATCHING and not self.u and not self.v

    def apply(self, w: Word) -> Optional[Word]:
        """The result on one tape, or None when inapplicable."""
        if self.kind == EXACT:
            return self.v if w == self.u else None
        n = len(self.u)
        if n and (len(w) < n or w.letters[len(w) - n:] != self.u.letters):
            return None
        return Word(w.letters[: len(w) - n]) * self.v

    def __str__(self) -> str:
        u = str(self.u) if self.u else "1"
        v = str(self.v) if self.v else "1"
        star = "*" if self.kind == MATCHING else ""
        return f"[{star}{u}→{star}{v}]"


def exact(u, v) -> TuringFragment:
    return TuringFragment(EXACT, monoid_word(u), monoid_word(v))


def matching(u, v) -> TuringFragment:
    return TuringFragment(MATCHING, monoid_word(u), monoid_word(v))


class TuringAction:
    """A fragment per tape index; total on the hardware's index set."""

    def __init__(self, fragments: Mapping[int, TuringFragment]):
        self.fragments = dict(fragments)

    @property
    def size(self) -> int:
        return max(f.size for f in self.fragments.values())

    def inverse(self) -> "TuringAction":
        return TuringAction({i: f.inverse() for i, f in self.fragments.items()})

    def apply(self, tapes: Mapping[int, Word]) -> Optional[dict[int, Word]]:
        out = {}
        for i, f in self.fragments.items():
            r = f.apply(tapes[i])
            if r is None:
                return None
            out[i] = r
        return out

    def __str__(self) -> str:
        return " ".join(f"{i}:{f}" for i, f in sorted(self.fragments.items()))


@dataclass(frozen=True)
class TRSEdge:
    eid: str
    tail: str
    head: str
    action: TuringAction


def _inv_eid(eid: str) -> str:
    return eid[:-1] if eid.endswith("~") else eid + "~"


class TRS:
    """A symmetric Turing rewriting system."""

    def __init__(
        self,
        alphabets: Mapping[int, Iterable[str]],
        states: Iterable[str],
        edges: Iterable[TRSEdge],
        input_tape: int,
        input_alphabet: Iterable[str],
        start: str,
        finish: str,
    ):
        self.alphabets = {i: frozenset(a) for i, a in alphabets.items()}
        self.tapes = tuple(sorted(self.alphabets))
        self.states = tuple(dict.fromkeys(states))
        self.input_tape = input_tape
        self.input_alphabet = frozenset(input_alphabet)
        if input_tape not in self.alphabets:
            raise ValueError(f"input tape {input_tape} not a tape")
        if not self.input_alphabet <= self.alphabets[input_tape]:
            raise ValueError("input alphabet exceeds the input tape's alphabet")
        if start not in self.states or finish not in self.states:
            raise ValueError("start/finish not states")
        self.start = start
        self.finish = finish
        full: list[TRSEdge] = []
        for e in edges:
            if set(e.action.fragments) != set(self.tapes):
                raise ValueError(f"edge {e.eid}: action not total on the tapes")
            full.append(e)
            full.append(TRSEdge(_inv_eid(e.eid), e.head, e.tail, e.action.inverse()))
        self.edges = tuple(full)
        self.by_id = {e.eid: e for e in self.edges}

    def positive_edges(self) -> list[TRSEdge]:
        return [e for e in self.edges if not e.eid.endswith("~")]

    def initial(self, w: Word) -> "TRSConfig":
        tapes = {i: Word() for i in self.tapes}
        tapes[self.input_tape] = monoid_word(w)
        return TRSConfig(tuple(sorted(tapes.items())), self.start)

    def accepting(self) -> "TRSConfig":
        return TRSConfig(tuple((i, Word()) for i in self.tapes), self.finish)


@dataclass(frozen=True)
class TRSConfig:
    tapes: tuple[tuple[int, Word], ...]
    state: str

    def tape(self, i: int) -> Word:
        return dict(self.tapes)[i]

    def size(self) -> int:
        return sum(len(w) for _, w in self.tapes)

    def __str__(self) -> str:
        body = ", ".join(f"{i}={w if w else '1'}" for i, w in self.tapes)
        return f"({body}; {self.state})"


def apply_trs_edge(trs: TRS, c: TRSConfig, e: TRSEdge) -> Optional[TRSConfig]:
    if c.state != e.tail:
        return None
    before = dict(c.tapes)
    after = e.action.apply(before)
    if after is None:
        return None
    assert all(
        abs(len(after[i]) - len(before[i])) <= e.action.size for i in after
    ), "per-step size change exceeds the action size"
    return TRSConfig(tuple(sorted(after.items())), e.head)


@dataclass
class TRSComputation:
    configs: list[TRSConfig]
    history: list[str]  # edge ids

    def measure(self) -> tuple[int, int]:
        return len(self.history), max(c.size() for c in self.configs)


def trs_measure(comp: TRSComputation) -> tuple[int, int]:
    return comp.measure()


def trs_recognize_bounded(
    trs: TRS,
    w: Word,
    max_size: int = 256,
    max_configs: int = 10**6,
) -> Optional[TRSComputation]:
    """Shortest computation from (w, start) to (1̄, finish), or None
    within the caps (absence is NOT a rejection proof)."""
    src = trs.initial(w)
    goal = trs.accepting()
    if src == goal:
        return TRSComputation([src], [])
    by_tail: dict[str, list[TRSEdge]] = {}
    for e in trs.edges:
        by_tail.setdefault(e.tail, []).append(e)
    parent: dict[TRSConfig, tuple[TRSConfig, str]] = {src: None}
    queue = deque([src])
    while queue and len(parent) < max_configs:
        c = queue.popleft()
        for e in by_tail.get(c.state, ()):
            nxt = apply_trs_edge(trs, c, e)
            if nxt is None or nxt in parent or nxt.size() > max_size:
                continue
            parent[nxt] = (c, e.eid)
            if nxt == goal:
                configs, hist = [nxt], []
                cur = nxt
                while parent[cur] is not None:
                    prev, eid = parent[cur]
                    configs.append(prev)
                    hist.append(eid)
                    cur = prev
                return TRSComputation(configs[::-1], hist[::-1])
            queue.append(nxt)
    return None


def run_trs_path(trs: TRS, c: TRSConfig, path: Sequence[str]) -> TRSComputation:
    configs = [c]
    for eid in path:
        nxt = apply_trs_edge(trs, c, trs.by_id[eid])
        if nxt is None:
            raise ValueError(f"edge {eid} inapplicable at {c}")
        configs.append(nxt)
        c = nxt
    return TRSComputation(configs, list(path))


@dataclass
class IComputation:
    """The projection of a computation to one tape, with history."""

    tape: int
    words: list[Word]
    fragments: list[TuringFragment]
    history: list[str]


def project_i_computation(trs: TRS, comp: TRSComputation, i: int) -> IComputation:
    words = [c.tape(i) for c in comp.configs]
    frags = [trs.by_id[eid].action.fragments[i] for eid in comp.history]
    return IComputation(i, words, frags, list(comp.history))


# ---------------------------------------------------------------------------
# Normalized machines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TMTransition:
    """form 1: delete ``letter`` (possibly none) at the end of tape ``i``;
    form 2: check tape ``i`` empty.  Inverses are implied."""

    name: str
    tail: tuple[str, ...]
    head: tuple[str, ...]
    form: int
    tape: int
    letter: Optional[str] = None


class NormalizedTM:
    """A symmetric machine whose transitions each touch one tape."""

    def __init__(
        self,
        alphabets: Mapping[int, Iterable[str]],
        state_parts: Sequence[Iterable[str]],
        transitions: Iterable[TMTransition],
        input_tape: int,
        input_alphabet: Iterable[str],
        start: tuple[str, ...],
        accept: tuple[str, ...],
    ):
        self.alphabets = {i: frozenset(a) for i, a in alphabets.items()}
        self.state_parts = tuple(tuple(p) for p in state_parts)
        self.transitions = tuple(transitions)
        self.input_tape = input_tape
        self.input_alphabet = frozenset(input_alphabet)
        self.start = tuple(start)
        self.accept = tuple(accept)
        for t in self.transitions:
            if t.form not in (1, 2):
                raise ValueError(f"transition {t.name}: not of form (1) or (2)")
            if t.form == 2 and t.letter is not None:
                raise ValueError(f"transition {t.name}: form (2) carries no letter")

    def simulate_step(
        self, tapes: Mapping[int, Word], state: tuple[str, ...], t: TMTransition, forward: bool
    ) -> Optional[tuple[dict[int, Word], tuple[str, ...]]]:
        src, dst = (t.tail, t.head) if forward else (t.head, t.tail)
        if state != src:
            return None
        out = dict(tapes)
        w = out[t.tape]
        if t.form == 2:
            if w:
                return None
        elif t.letter is not None:
            if forward:
                if not w or w.letters[-1] != (t.letter, 1):
                    return None
                out[t.tape] = Word(w.letters[:-1])
            else:
                out[t.tape] = w * Word.gen(t.letter)
        return out, dst

    def recognize_bounded(self, w: Word, max_size: int = 64, max_configs: int = 10**5) -> bool:
        """Direct machine simulation (independent of the TRS conversion)."""
        tapes = {i: Word() for i in self.alphabets}
        tapes[self.input_tape] = monoid_word(w)
        src = (tuple(sorted(tapes.items())), self.start)
        goal = (tuple((i, Word()) for i in sorted(self.alphabets)), self.accept)
        seen = {src}
        queue = deque([src])
        while queue and len(seen) < max_configs:
            cur_tapes, cur_state = queue.popleft()
            if (cur_tapes, cur_state) == goal:
                return True
            td = dict(cur_tapes)
            for t in self.transitions:
                for forward in (True, False):
                    r = self.simulate_step(td, cur_state, t, forward)
                    if r is None:
                        continue
                    nt, ns = r
                    if sum(len(x) for x in nt.values()) > max_size:
                        continue
                    key = (tuple(sorted(nt.items())), ns)
                    if key not in seen:
                        seen.add(key)
                        queue.append(key)
        return goal in seen


def tm_state_name(vec: Sequence[str]) -> str:
    return "|".join(vec)


def tm_to_trs(m: NormalizedTM) -> TRS:
    """Transcribe a normalized machine into a TRS over the same tapes."""
    tapes = sorted(m.alphabets)
    idword = matching("", "")
    states: list[str] = []
    seen = set()

    def state(vec):
        n = tm_state_name(vec)
        if n not in seen:
            seen.add(n)
            states.append(n)
        return n

    state(m.start)
    state(m.accept)
    edges = []
    for t in m.transitions:
        frags = {i: idword for i in tapes}
        if t.form == 2:
            frags[t.tape] = exact("", "")
        elif t.letter is not None:
            frags[t.tape] = matching(t.letter, "")
        edges.append(TRSEdge(t.name, state(t.tail), state(t.head), TuringAction(frags)))
    return TRS(
        m.alphabets,
        states,
        edges,
        m.input_tape,
        m.input_alphabet,
        tm_state_name(m.start),
        tm_state_name(m.accept),
    )


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_TAPES_RE = re.compile(r"tapes\s*\{([^}]*)\}", re.S)
_INPUT_RE = re.compile(r"\binput\s+(\d+)\s*:\s*([^;]*);")
_START_RE = re.compile(r"\bstart_state\s+([^\s;]+)\s*;")
_ACCEPT_RE = re.compile(r"\baccept_state\s+([^\s;]+)\s*;")
_TEDGE_RE = re.compile(r"\bedge\s+(\S+)\s*->\s*(\S+)\s*\{([^}]*)\}", re.S)


def _parse_tword(s: str) -> Word:
    s = s.strip()
    if s == "1":
        return Word()
    return monoid_word(s)


def parse_trs(text: str) -> TRS:
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    m = _TAPES_RE.search(text)
    if not m:
        raise ValueError("missing tapes block")
    alphabets: dict[int, list[str]] = {}
    for line in m.group(1).split(";"):
        line = line.strip()
        if not line:
            continue
        idx, letters = line.split(":", 1)
        alphabets[int(idx)] = [a.strip() for a in letters.split(",") if a.strip()]
    mi = _INPUT_RE.search(text)
    if not mi:
        raise ValueError("missing input declaration")
    input_tape = int(mi.group(1))
    input_alphabet = [a.strip() for a in mi.group(2).split(",") if a.strip()]
    ms, ma = _START_RE.search(text), _ACCEPT_RE.search(text)
    if not ms or not ma:
        raise ValueError("missing start_state/accept_state")
    states: list[str] = []
    edges = []
    for k, (tail, head, block) in enumerate(_TEDGE_RE.findall(text)):
        for s in (tail, head):
            if s not in states:
                states.append(s)
        frags: dict[int, TuringFragment] = {}
        for line in block.split(";"):
            line = line.strip()
            if not line:
                continue
            idx, rule = line.split(":", 1)
            lhs, rhs = (p.strip() for p in rule.split("->", 1))
            lstar, rstar = lhs.startswith("*"), rhs.startswith("*")
            if lstar != rstar:
                raise ValueError(f"fragment {rule!r}: * must appear on both sides")
            u, v = _parse_tword(lhs.lstrip("*")), _parse_tword(rhs.lstrip("*"))
            frags[int(idx)] = TuringFragment(MATCHING if lstar else EXACT, u, v)
        for i in alphabets:
            frags.setdefault(i, matching("", ""))
        edges.append(TRSEdge(f"e{k + 1}", tail, head, TuringAction(frags)))
    for s in (ms.group(1), ma.group(1)):
        if s not in states:
            states.append(s)
    return TRS(alphabets, states, edges, input_tape, input_alphabet, ms.group(1), ma.group(1))


def dump_trs(trs: TRS) -> str:
    lines = ["tapes {"]
    for i in trs.tapes:
        lines.append(f"  {i}: {','.join(sorted(trs.alphabets[i]))};")
    lines.append("}")
    lines.append(f"input {trs.input_tape}: {','.join(sorted(trs.input_alphabet))};")
    lines.append(f"start_state {trs.start};")
    lines.append(f"accept_state {trs.finish};")
    lines.append("symmetric;")
    for e in trs.positive_edges():
        body = []
        for i in trs.tapes:
            f = e.action.fragments[i]
            if f.is_identity():
                continue
            star = "*" if f.kind == MATCHING else ""
            u = "".join(s for s, _ in f.u.letters) or "1"
            v = "".join(s for s, _ in f.v.letters) or "1"
            body.append(f"{i}: {star}{u} -> {star}{v};")
        lines.append(f"edge {e.tail} -> {e.head} {{ {' '.join(body)} }}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


def make_trs_xnyn() -> TRS:
    """Two-tape system recognizing { xⁿyⁿ : n ≥ 0 }.

    Phase p strips trailing y's while counting in z; the switch to the
    x-phase is guarded by the identity-matching fragment [*x→*x] (the
    word must already end in x), which blocks re-entering the y-phase
    mid-word and keeps ill-formed words like xyxy out.
    """
    idw = matching("", "")
    edges = [
        TRSEdge("a", "st", "p", TuringAction({1: idw, 2: idw})),
        TRSEdge("b", "p", "p", TuringAction({1: matching("y", ""), 2: matching("", "z")})),
        TRSEdge("c", "p", "r", TuringAction({1: matching("x", "x"), 2: idw})),
        TRSEdge("c0", "p", "r", TuringAction({1: exact("", ""), 2: idw})),
        TRSEdge("d", "r", "r", TuringAction({1: matching("x", ""), 2: matching("z", "")})),
        TRSEdge("f", "r", "w1", TuringAction({1: exact("", ""), 2: idw})),
        TRSEdge("g", "w1", "fin", TuringAction({1: idw, 2: exact("", "")})),
    ]
    return TRS({1: "xy", 2: "z"}, ["st", "p", "r", "w1", "fin"], edges, 1, "xy", "st", "fin")


def xnyn_member(w: Word) -> bool:
    n = len(w) // 2
    return w == Word.gen("x", n) * Word.gen("y", n) if len(w) % 2 == 0 else False


def make_trs_parity() -> TRS:
    """Unary system over {x} recognizing the even-length words."""
    idw = matching("", "")
    edges = [
        TRSEdge("a", "st", "p", TuringAction({1: idw, 2: idw})),
        TRSEdge("b", "p", "p", TuringAction({1: matching("xx", ""), 2: idw})),
        TRSEdge("c", "p", "fin", TuringAction({1: exact("", ""), 2: exact("", "")})),
    ]
    return TRS({1: "x", 2: ""}, ["st", "p", "fin"], edges, 1, "x", "st", "fin")


def parity_member(w: Word) -> bool:
    return w.is_power_of("x") and all(s == 1 for _, s in w.letters) and len(w) % 2 == 0


def make_tm_xnyn() -> NormalizedTM:
    """Normalized machine for { xⁿyⁿ } matching the TRS fixture."""
    P = lambda q: (q,)
    # The p→r phase switch goes through m by deleting one trailing x
    # and re-inserting it (inverse of c2), emulating an ends-with-x
    # guard with form-(1) transitions only.
    ts = [
        TMTransition("a", P("st"), P("p"), 1, 1, None),
        TMTransition("d1", P("p"), P("p1"), 1, 1, "y"),
        TMTransition("d2", P("p"), P("p1"), 1, 2, "z"),
        TMTransition("c1", P("p"), P("m"), 1, 1, "x"),
        TMTransition("c2", P("r"), P("m"), 1, 1, "x"),
        TMTransition("c0", P("p"), P("r"), 2, 1, None),
        TMTransition("e1", P("r"), P("r1"), 1, 1, "x"),
        TMTransition("e2", P("r1"), P("r"), 1, 2, "z"),
        TMTransition("f", P("r"), P("w1"), 2, 1, None),
        TMTransition("g", P("w1"), P("fin"), 2, 2, None),
    ]
    parts = [("st", "p", "p1", "m", "r", "r1", "w1", "fin")]
    return NormalizedTM({1: "xy", 2: "z"}, parts, ts, 1, "xy", P("st"), P("fin"))
