"""Shared machinery for correspondence tests between lowered graphs and
their source graphs: random bounded walks on each level, and replay of
generic paths through the registered oracles."""

from sgraph.graph0 import Config0
from sgraph.star import generic_edges_of, generic_step


def walk_options(graph, c, max_word):
    """Applicable degree-0 edges at ``c`` with their successor words."""
    out = []
    for e in graph.edges:
        if e.tail != c.state:
            continue
        a = e.label
        if a.failing_guard(c.word, graph.hardware.tapes) is not None:
            continue
        w2 = a.apply_word(c.word)
        if any(len(w) > max_word for _, w in w2.entries):
            continue
        out.append((e, w2))
    return out


def random_walk0(graph, c0, rng, steps, max_word, stop_pred):
    """Random degree-0 walk from ``c0``; returns the longest prefix whose
    endpoint satisfies ``stop_pred`` as (edge ids, end config), or ([], None)
    when no prefix qualifies."""
    c = c0
    path = []
    snaps = []
    for _ in range(steps):
        options = walk_options(graph, c, max_word)
        if not options:
            break
        e, w2 = rng.choice(options)
        c = Config0(w2, e.head)
        path.append(e.eid)
        snaps.append(c)
    for k in range(len(path), 0, -1):
        if stop_pred(snaps[k - 1]):
            return path[:k], snaps[k - 1]
    return [], None


def replay_matches(graph, start, reduction, oracles, max_word, target):
    """True when some oracle replay of the generic path hits ``target``."""

    def dfs(c, k):
        if k == len(reduction):
            return c == target
        for nxt in generic_step(graph, c, reduction[k], oracles, max_word):
            if dfs(nxt, k + 1):
                return True
        return False

    return dfs(start, 0)


def random_generic_walk(graph, c0, oracles, rng, steps, max_word):
    """Random bounded generic walk; returns the final configuration."""
    by_tail = {}
    for ge in generic_edges_of(graph):
        by_tail.setdefault(ge.tail(), []).append(ge)
    c = c0
    for _ in range(steps):
        options = []
        for ge in by_tail.get(c.state, ()):
            options.extend(generic_step(graph, c, ge, oracles, max_word))
        if not options:
            break
        c = rng.choice(options)
    return c


def rand_word(rng, alphabet, size):
    """A random freely reduced word of length at most ``size``."""
    from sgraph.words import EMPTY, Word

    n = rng.randint(0, size)
    w = EMPTY
    while len(w) < n:
        step = Word([(rng.choice(alphabet), rng.choice((1, -1)))])
        w2 = w * step
        if len(w2) > len(w):
            w = w2
    return w


def certified_cases(rng, size):
    """(StdObject, op name, start word) samples covering every certified
    operation of the object library; the target word comes from the
    operation's oracle."""
    from sgraph.gadgets import (
        counter_value_lword,
        dw,
        make_check_nonneg,
        make_check_pos,
        make_copy,
        make_counter,
        make_div2,
        make_le,
        make_split,
        make_swap,
    )
    from sgraph.words import LWord

    A = ("x", "y")
    out = []
    out.append((make_copy(A), "op", LWord({"a": rand_word(rng, A, size)})))
    out.append(
        (
            make_split(A),
            "op",
            LWord({"a": rand_word(rng, A, size), "b": rand_word(rng, A, size)}),
        )
    )
    out.append((make_swap(A), "op", LWord({"a": rand_word(rng, A, size)})))
    m = rng.choice([k for k in range(-size, size + 1) if k])
    out.append((make_div2(), "op", LWord({"b": dw(m)})))
    out.append((make_check_pos(), "op", LWord({"a": dw(rng.randint(1, size))})))
    out.append((make_check_nonneg(), "op", LWord({"a": dw(rng.randint(0, size))})))
    i = rng.randint(-size, size - 1)
    j = rng.randint(i + 1, size)
    out.append((make_le(), "op", LWord({"a": dw(i), "b": dw(j)})))
    for d in (1, 2):
        cnt = make_counter(d)
        out.append((cnt, "check", counter_value_lword(d, rng.randint(1, 3 * size))))
        out.append((cnt, "inc", counter_value_lword(d, rng.randint(0, 3 * size))))
    return out
