import math
import random
from fractions import Fraction

import pytest

from helpers import certified_cases, rand_word

from sgraph.gadgets import (
    accept_plus_rank_for,
    counter_decode,
    counter_depth_for,
    counter_encode,
    counter_size,
    counter_succ,
    counter_value_lword,
    dw,
    make_accept_plus,
    make_check_rplus,
    make_copy,
    make_counter,
    make_div2,
    lookup_object,
    stdlib_catalog,
)
from sgraph.plans import PlanError, estimate_plan, lower_run, realize
from sgraph.star import F_MARK, S_MARK, _all_words
from sgraph.words import LWord, Word


class TestCostFormulas:
    @pytest.mark.parametrize("n", [0, 1, 2, 5, 16])
    def test_copy_exact(self, n):
        cp = make_copy(("x", "y"))
        w = Word.gen("x", n)
        run = realize(cp, "op", LWord({"a": w}), S_MARK, LWord({"a": w, "b": w}), F_MARK)
        assert (run.tm, run.sp) == (2 * n + 3, 2 * n)

    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_div2_even_exact(self, n):
        dv = make_div2()
        run = realize(
            dv, "op", LWord({"b": dw(2 * n)}), S_MARK, LWord({"b": dw(n)}), F_MARK
        )
        assert (run.tm, run.sp) == (2 * n + 3, 2 * n)

    @pytest.mark.parametrize("m", [3, 7, -5, -8])
    def test_div2_general_bounds(self, m):
        dv = make_div2()
        n = math.ceil(abs(m) / 2)
        tgt = dw(n if m > 0 else -n)
        run = realize(dv, "op", LWord({"b": dw(m)}), S_MARK, LWord({"b": tgt}), F_MARK)
        assert run.tm <= abs(m) + 4
        assert run.sp <= abs(m) + 2


class TestCounterArithmetic:
    def test_decode_paper_value(self):
        assert counter_decode(3, (2, 2, 2)) == 9

    def test_chain_start(self):
        assert [counter_encode(2, m) for m in range(6)] == [
            (0, 0),
            (1, 0),
            (1, 1),
            (2, 0),
            (2, 1),
            (2, 2),
        ]

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_encode_decode_bijection(self, d):
        seen = set()
        for m in range(400):
            u = counter_encode(d, m)
            assert u not in seen
            seen.add(u)
            assert counter_decode(d, u) == m

    def test_succ_keeps_shape(self):
        u = (0, 0, 0)
        for _ in range(200):
            assert all(u[k] >= u[k + 1] >= 0 for k in range(len(u) - 1))
            u = counter_succ(u)

    def test_decode_rejects_bad_tuples(self):
        with pytest.raises(ValueError):
            counter_decode(2, (1, 2))
        with pytest.raises(ValueError):
            counter_decode(2, (1, -1))

    def test_size_growth(self):
        # the depth-d value of n has total exponent ~ d·n^(1/d)
        for d in (1, 2, 3):
            assert counter_size(d, 10) <= counter_size(d, 100)
        assert counter_size(1, 100) == 100
        assert counter_size(2, 100) < 40

    def test_depth_for_eps(self):
        assert counter_depth_for(Fraction(1, 2)) == 3
        assert counter_depth_for(Fraction(9, 10)) == 2


class TestCounterObject:
    def test_inc_follows_chain(self):
        c2 = make_counter(2)
        for m in range(8):
            w1 = counter_value_lword(2, m)
            w2 = counter_value_lword(2, m + 1)
            assert c2.oracle.member("inc", w1, S_MARK, w2, F_MARK)
            run = realize(c2, "inc", w1, S_MARK, w2, F_MARK)
            assert run.tm > 0

    def test_check_requires_nontrivial(self):
        c1 = make_counter(1)
        z = counter_value_lword(1, 0)
        assert not c1.oracle.member("check", z, S_MARK, z, F_MARK)
        v = counter_value_lword(1, 3)
        assert c1.oracle.member("check", v, S_MARK, v, F_MARK)
        realize(c1, "check", v, S_MARK, v, F_MARK)


class TestPositiveAcceptor:
    def test_rank_for_eps(self):
        assert accept_plus_rank_for(Fraction(1, 2)) == 4
        assert accept_plus_rank_for(Fraction(9, 10)) == 3

    def test_oracle_soundness_small(self):
        acc = make_accept_plus(("x", "y"), Fraction(1, 2))
        for w in _all_words(("x", "y"), 3):
            related = acc.oracle.member("op", LWord({"a": w}), S_MARK, LWord(), F_MARK)
            assert related == acc.language(w)

    @pytest.mark.parametrize("w", [Word.of("x"), Word.of("x", "y", "y", "x"), Word.gen("x", 8)])
    def test_planner_completeness(self, w):
        acc = make_accept_plus(("x", "y"), Fraction(1, 2))
        run = realize(acc, "op", LWord({"a": w}), S_MARK, LWord(), F_MARK)
        assert run.tm > len(w)

    def test_non_positive_has_no_plan(self):
        acc = make_accept_plus(("x", "y"), Fraction(1, 2))
        with pytest.raises(PlanError):
            acc.plan_or_raise("op", LWord({"a": Word.parse("x·y^-1")}), S_MARK, LWord(), F_MARK)


class TestChecker:
    def test_checker_keeps_word(self):
        ck = make_check_rplus(("x", "y"), Fraction(1, 2))
        w = LWord({"a": Word.of("x", "y", "x")})
        assert ck.oracle.member("op", w, S_MARK, w, F_MARK)
        run = realize(ck, "op", w, S_MARK, w, F_MARK)
        assert run.end["a"] == w["a"]
        bad = LWord({"a": Word.parse("y^-1·x")})
        assert not ck.oracle.member("op", bad, S_MARK, bad, F_MARK)


class TestEstimateDominance:
    def test_measured_at_most_estimated(self):
        rng = random.Random(3)
        for round_ in range(10):
            for std, op, w1 in certified_cases(rng, 6):
                succ = std.oracle.successors(op, w1, S_MARK, F_MARK, 64)
                assert succ, f"{std.obj.name}.{op} has no successor for {w1}"
                w2 = succ[0]
                plan = std.plan_or_raise(op, w1, S_MARK, w2, F_MARK)
                run = lower_run(std, op, w1, S_MARK, plan)
                est = estimate_plan(std, op, w1, S_MARK, plan)
                assert run.tm <= est[0] and run.sp <= est[1], (
                    f"{std.obj.name}.{op}: measured ({run.tm},{run.sp}) > estimated {est}"
                )


class TestCatalog:
    def test_lookup_round_trip(self):
        for name in ("copy(x)", "div2", "check_pos", "counter(2)"):
            std = lookup_object(name)
            assert std.obj.operations

    def test_catalog_objects_unique(self):
        cat = stdlib_catalog()
        names = [std.obj.name for std in cat.values()]
        assert len(names) == len(set(names))
