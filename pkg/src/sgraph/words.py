"""Free-group words over named letters, hardware, and labelled word tuples.

A :class:`Word` is an immutable, freely reduced sequence of signed letters.
A :class:`Hardware` names a finite family of tapes, each with its own
alphabet.  An :class:`LWord` assigns a word to every tape of a hardware;
only nontrivial entries are stored, so LWords over compatible hardwares
compare and hash cheaply.
"""

from __future__ import annotations

import re
from functools import reduce as _functools_reduce
from typing import Iterable, Iterator, Mapping, Sequence, Tuple

Letter = Tuple[str, int]  # (symbol, sign) with sign in {+1, -1}

_TOKEN_RE = re.compile(r"([^\s.·^]+)(?:\^(-?\d+))?")


def reduce_letters(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    """Freely reduce a sequence of signed letters (cancel x·x⁻¹ pairs)."""
    out: list[Letter] = []
    for sym, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"letter sign must be ±1, got {sign!r}")
        if out and out[-1][0] == sym and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((sym, sign))
    return tuple(out)


class Word:
    """An immutable freely reduced word.

    Words multiply with ``*``, invert with ``**-1`` or :meth:`inv`, and
    print in the canonical dotted form (``x·y^-1·x``; the empty word is
    ``1``).  Reduction happens eagerly at construction, so every `Word`
    in the system is reduced.
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", reduce_letters(letters))
        object.__setattr__(self, "_hash", hash(self.letters))

    # -- construction -------------------------------------------------

    @staticmethod
    def of(*symbols: str) -> "Word":
        """Build a word from plain symbols: ``Word.of("x", "y")`` = xy."""
        return Word((s, 1) for s in symbols)

    @staticmethod
    def gen(symbol: str, power: int = 1) -> "Word":
        """The word ``symbol^power``."""
        sign = 1 if power >= 0 else -1
        return Word(((symbol, sign),) * abs(power))

    @staticmethod
    def parse(text: str) -> "Word":
        """Parse the dotted text form: ``x·y^-1·x``, ``δ^2``, or ``1``."""
        text = text.strip()
        if text in ("", "1"):
            return Word()
        letters: list[Letter] = []
        for chunk in re.split(r"[.·]", text):
            chunk = chunk.strip()
            if chunk == "" or chunk == "1":
                continue
            m = _TOKEN_RE.fullmatch(chunk)
            if not m:
                raise ValueError(f"cannot parse word chunk {chunk!r}")
            sym, pow_txt = m.group(1), m.group(2)
            power = 1 if pow_txt is None else int(pow_txt)
            sign = 1 if power >= 0 else -1
            letters.extend(((sym, sign),) * abs(power))
        return Word(letters)

    # -- group operations ---------------------------------------------

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def inv(self) -> "Word":
        return Word((sym, -sign) for sym, sign in reversed(self.letters))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inv() ** (-n)
        result = Word()
        for _ in range(n):
            result = result * self
        return result

    # -- queries ------------------------------------------------------

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def symbols(self) -> set[str]:
        return {sym for sym, _ in self.letters}

    def is_power_of(self, symbol: str) -> bool:
        return all(sym == symbol for sym, _ in self.letters)

    def suffix(self, k: int) -> "Word":
        """The suffix consisting of the last ``k`` letters."""
        return Word(self.letters[len(self.letters) - k:])

    # -- text ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for sym, sign in self.letters:
            parts.append(sym if sign == 1 else f"{sym}^-1")
        return "·".join(parts)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __setattr__(self, *_args):
        raise AttributeError("Word is immutable")


EMPTY = Word()


def concat(*words: Word) -> Word:
    """Reduced product of any number of words."""
    return _functools_reduce(Word.__mul__, words, EMPTY)


def classify_word(w: Word, alphabet: frozenset[str] | set[str]) -> tuple[int, bool, bool]:
    """Classify ``w`` over ``alphabet``.

    Returns ``(degree, positive, right_positive)`` where degree is the
    exponent sum, positive means every letter occurs with sign +1, and
    right-positive means every suffix has nonnegative degree.
    """
    bad = w.symbols() - set(alphabet)
    if bad:
        raise ValueError(f"letters {sorted(bad)} outside alphabet {sorted(alphabet)}")
    degree = sum(sign for _, sign in w.letters)
    positive = all(sign == 1 for _, sign in w.letters)
    # every suffix has degree >= 0  <=>  every prefix has degree <= deg
    right_positive = True
    running = 0
    for _, sign in reversed(w.letters):
        running += sign
        if running < 0:
            right_positive = False
            break
    return degree, positive, right_positive


class Hardware:
    """A finite family of tapes: ordered tape names with per-tape alphabets.

    Hardwares are immutable; tape order is the declaration order and is
    preserved by :func:`hardware_join` (left operand first).
    """

    __slots__ = ("tapes", "alphabets", "_hash")

    def __init__(self, alphabets: Mapping[str, Iterable[str]] | Sequence[tuple[str, Iterable[str]]]):
        items = alphabets.items() if isinstance(alphabets, Mapping) else alphabets
        tape_list: list[str] = []
        alpha: dict[str, frozenset[str]] = {}
        for name, letters in items:
            if name in alpha:
                raise ValueError(f"duplicate tape {name!r}")
            tape_list.append(name)
            alpha[name] = frozenset(letters)
        object.__setattr__(self, "tapes", tuple(tape_list))
        object.__setattr__(self, "alphabets", alpha)
        object.__setattr__(self, "_hash", hash((self.tapes, tuple(sorted((k, tuple(sorted(v))) for k, v in alpha.items())))))

    def __contains__(self, tape: str) -> bool:
        return tape in self.alphabets

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Hardware)
            and self.tapes == other.tapes
            and self.alphabets == other.alphabets
        )

    def __hash__(self) -> int:
        return self._hash

    def __le__(self, other: "Hardware") -> bool:
        """Sub-hardware order: tapes included, per-tape alphabets included."""
        if not isinstance(other, Hardware):
            return NotImplemented
        return all(
            t in other.alphabets and self.alphabets[t] <= other.alphabets[t]
            for t in self.tapes
        )

    def restrict(self, tapes: Iterable[str]) -> "Hardware":
        keep = set(tapes)
        return Hardware([(t, self.alphabets[t]) for t in self.tapes if t in keep])

    def check_word(self, tape: str, w: Word) -> None:
        if tape not in self.alphabets:
            raise ValueError(f"unknown tape {tape!r}")
        bad = w.symbols() - self.alphabets[tape]
        if bad:
            raise ValueError(f"letters {sorted(bad)} not in alphabet of tape {tape!r}")

    def __repr__(self) -> str:
        inner = ", ".join(f"{t}:{{{','.join(sorted(self.alphabets[t]))}}}" for t in self.tapes)
        return f"Hardware({inner})"


def hardware_join(h1: Hardware, h2: Hardware) -> Hardware:
    """Least hardware above both: union of tapes, per-tape alphabet union."""
    items: list[tuple[str, frozenset[str]]] = []
    for t in h1.tapes:
        a = h1.alphabets[t] | h2.alphabets.get(t, frozenset())
        items.append((t, a))
    for t in h2.tapes:
        if t not in h1.alphabets:
            items.append((t, h2.alphabets[t]))
    return Hardware(items)


class LWord:
    """A tuple of words labelled by the tapes of a hardware.

    Only nontrivial entries are stored; two LWords are equal when they
    agree on every tape.  LWords are hashable and are the configurations
    degree-0 graphs act on.
    """

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Mapping[str, Word] | Iterable[tuple[str, Word]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        kept = {t: w for t, w in items if w}
        object.__setattr__(self, "entries", tuple(sorted(kept.items())))
        object.__setattr__(self, "_hash", hash(self.entries))

    def __getitem__(self, tape: str) -> Word:
        for t, w in self.entries:
            if t == tape:
                return w
        return EMPTY

    def set(self, tape: str, w: Word) -> "LWord":
        return LWord([(t, v) for t, v in self.entries if t != tape] + [(tape, w)])

    def restrict(self, tapes: Iterable[str]) -> "LWord":
        keep = set(tapes)
        return LWord([(t, w) for t, w in self.entries if t in keep])

    def rename(self, mapping: Mapping[str, str]) -> "LWord":
        """Relabel tapes by ``mapping`` (tapes not mentioned keep their name)."""
        return LWord([(mapping.get(t, t), w) for t, w in self.entries])

    def tapes(self) -> set[str]:
        return {t for t, _ in self.entries}

    def size(self) -> int:
        """Total letter count across all tapes (the size of the tuple)."""
        return sum(len(w) for _, w in self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LWord) and self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "LWord") -> bool:
        if not isinstance(other, LWord):
            return NotImplemented
        return self.entries < other.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __str__(self) -> str:
        if not self.entries:
            return "(1)"
        return "(" + ", ".join(f"{t}={w}" for t, w in self.entries) + ")"

    def __repr__(self) -> str:
        return f"LWord{str(self)}"

    def __setattr__(self, *_args):
        raise AttributeError("LWord is immutable")


TRIVIAL = LWord()
