import pytest
from hypothesis import given, strategies as st

from sgraph.words import (
    EMPTY,
    Hardware,
    LWord,
    Word,
    classify_word,
    concat,
    hardware_join,
)


letters = st.sampled_from([("x", 1), ("x", -1), ("y", 1), ("y", -1)])
words = st.lists(letters, max_size=12).map(Word)


class TestWord:
    def test_free_reduction(self):
        w = Word([("x", 1), ("x", -1), ("y", 1)])
        assert w == Word.of("y")
        assert len(Word([("x", 1), ("x", -1)])) == 0

    def test_parse_round_trip(self):
        for text in ("1", "x·y^-1·x", "δ^2", "x^-3"):
            assert Word.parse(str(Word.parse(text))) == Word.parse(text)

    def test_parse_examples(self):
        assert Word.parse("1") == EMPTY
        assert Word.parse("x·y^-1") == Word(("x", 1) for _ in range(1)) * Word.gen("y", -1)
        assert Word.parse("δ^2") == Word.gen("δ", 2)

    @given(words, words)
    def test_mul_inverse(self, u, v):
        assert (u * v) * (u * v).inv() == EMPTY
        assert u.inv().inv() == u

    @given(words, words, words)
    def test_associative(self, u, v, w):
        assert (u * v) * w == u * (v * w)

    @given(words)
    def test_reduced(self, w):
        for (s1, g1), (s2, g2) in zip(w.letters, w.letters[1:]):
            assert not (s1 == s2 and g1 == -g2)

    def test_pow_and_suffix(self):
        w = Word.gen("x", 3)
        assert w ** 2 == Word.gen("x", 6)
        assert w.suffix(2) == Word.gen("x", 2)
        assert Word.gen("x", 5).is_power_of("x")
        assert not Word.of("x", "y").is_power_of("x")


class TestClassify:
    A = ("x", "y")

    def test_degrees(self):
        # degree is the exponent sum
        assert classify_word(EMPTY, self.A) == (0, True, True)
        assert classify_word(Word.of("x", "y"), self.A) == (2, True, True)
        assert classify_word(Word.gen("x", -1), self.A) == (-1, False, False)

    def test_right_positive(self):
        # x^-1·y: every suffix has nonnegative degree
        w = Word.gen("x", -1) * Word.of("y")
        assert classify_word(w, self.A) == (0, False, True)
        # y·x^-1: the suffix x^-1 has degree -1
        w2 = Word.of("y") * Word.gen("x", -1)
        assert classify_word(w2, self.A) == (0, False, False)

    @given(words)
    def test_positive_iff_no_inverses(self, w):
        _, pos, _ = classify_word(w, self.A)
        assert pos == all(s == 1 for _, s in w.letters)


class TestLWord:
    def test_empty_default(self):
        w = LWord()
        assert w["anything"] == EMPTY
        assert w.size() == 0 and not w

    def test_set_restrict_rename(self):
        w = LWord({"a": Word.of("x"), "b": Word.of("y")})
        assert w.set("a", EMPTY) == LWord({"b": Word.of("y")})
        assert w.restrict({"a"}) == LWord({"a": Word.of("x")})
        assert w.rename({"a": "c", "b": "b"})["c"] == Word.of("x")
        assert w.tapes() == {"a", "b"}

    def test_eq_ignores_trivial_entries(self):
        assert LWord({"a": EMPTY}) == LWord()


class TestHardware:
    def test_membership_and_join(self):
        h1 = Hardware([("a", ("x",))])
        h2 = Hardware([("b", ("y",))])
        j = hardware_join(h1, h2)
        assert "a" in j and "b" in j
        assert h1 <= j

    def test_check_word(self):
        h = Hardware([("a", ("x",))])
        h.check_word("a", Word.gen("x", -2))
        with pytest.raises(ValueError):
            h.check_word("a", Word.of("y"))

    def test_concat(self):
        assert concat(Word.of("x"), Word.of("y")) == Word.of("x", "y")
