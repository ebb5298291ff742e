import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perml1.metric import formula_length
from perml1.perms import (
    GeneratorWord,
    Permutation,
    all_permutations,
    cycle_dist,
    eval_word,
)
from perml1.synth import (
    free_reduce,
    rotation_word,
    synthesize,
    word_cycle,
    word_transposition,
    word_transposition_from_zero,
)


class TestFreeReduce:
    def test_cancellations(self):
        assert free_reduce(list("tcCt")) == []
        assert free_reduce(list("ttt")) == ["t"]
        assert free_reduce(list("cCCc")) == []

    @given(st.lists(st.sampled_from("tcC"), max_size=16))
    @settings(max_examples=100, deadline=None)
    def test_preserves_evaluation(self, letters):
        n = 5
        before = eval_word(GeneratorWord(n, tuple(letters)))
        after = eval_word(GeneratorWord(n, tuple(free_reduce(letters))))
        assert before == after


class TestRotationWord:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_shorter_direction(self, n):
        for shift in range(-n, n + 1):
            letters = rotation_word(n, shift)
            assert len(letters) == cycle_dist(n, 0, shift % n)
            assert eval_word(GeneratorWord(n, tuple(letters))) == Permutation.rotation(n, shift)


class TestTranspositionFromZero:
    def test_adjacent_is_single_letter(self):
        assert word_transposition_from_zero(7, 1).letters == ("t",)

    def test_wraparound_is_three_letters(self):
        w = word_transposition_from_zero(8, 7)
        assert str(w) == "Ctc"
        assert eval_word(w) == Permutation.transposition(8, 0, 7)

    def test_skip_two(self):
        w = word_transposition_from_zero(6, 2)
        assert len(w) == 5
        assert eval_word(w) == Permutation.transposition(6, 0, 2)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            word_transposition_from_zero(5, 0)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_exhaustive_eval_and_bound(self, n):
        for l in range(1, n):
            w = word_transposition_from_zero(n, l)
            assert eval_word(w) == Permutation.transposition(n, 0, l)
            assert len(w) <= 4 * cycle_dist(n, 0, l) + 1


class TestTransposition:
    def test_zero_base_reduces(self):
        assert word_transposition(9, 0, 4).letters == word_transposition_from_zero(9, 4).letters

    def test_adjacent_conjugation(self):
        for n in (5, 8):
            for k in range(n):
                w = word_transposition(n, k, (k + 1) % n)
                assert eval_word(w) == Permutation.transposition(n, k, k + 1)
                assert len(w) <= 2 * cycle_dist(n, 0, k) + 1

    def test_rejects_equal_points(self):
        with pytest.raises(ValueError):
            word_transposition(6, 2, 2)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_exhaustive_eval_and_bound(self, n):
        for k in range(n):
            for m in range(n):
                if k == m:
                    continue
                w = word_transposition(n, k, m)
                assert eval_word(w) == Permutation.transposition(n, k, m)
                assert len(w) <= 4 * cycle_dist(n, k, m) + 2 * cycle_dist(n, 0, k) + 1


class TestCycleWord:
    def test_pair_is_transposition(self):
        w = word_cycle(6, [0, 1])
        assert eval_word(w) == Permutation.transposition(6)

    def test_three_cycle_is_rotation(self):
        w = word_cycle(3, [0, 1, 2])
        assert eval_word(w) == Permutation.rotation(3)

    def test_spread_cycle(self):
        w = word_cycle(8, [1, 3, 5])
        assert eval_word(w) == Permutation.from_cycles(8, [[1, 3, 5]])
        assert len(w) <= 2 * 1 + 6 * (2 + 2) + 3

    def test_rejects_repeats(self):
        with pytest.raises(ValueError):
            word_cycle(6, [1, 4, 1])

    def test_random_cycles(self):
        rng = random.Random(20240)
        for _ in range(400):
            n = rng.randrange(2, 13)
            m = rng.randrange(2, n + 1)
            pts = rng.sample(range(n), m)
            w = word_cycle(n, pts)
            assert eval_word(w) == Permutation.from_cycles(n, [pts])
            bound = (
                2 * cycle_dist(n, 0, pts[0])
                + 6 * sum(cycle_dist(n, pts[i], pts[i + 1]) for i in range(m - 1))
                + m
            )
            assert len(w) <= bound


class TestSynthesize:
    def test_identity_gives_empty_word(self):
        cert = synthesize(Permutation.identity(8))
        assert cert.length == 0
        assert cert.certified_bound == 8  # just the additive slack

    def test_rotation(self):
        cert = synthesize(Permutation.rotation(9))
        assert eval_word(cert.word) == Permutation.rotation(9)
        assert cert.length <= cert.certified_bound
        assert cert.shift_used == 8

    @pytest.mark.parametrize("n", range(1, 7))
    def test_exhaustive_soundness(self, n, tables):
        table = tables.get(n)
        for p in all_permutations(n):
            cert = synthesize(p)
            assert eval_word(cert.word) == p
            assert cert.length <= cert.certified_bound
            if table is not None:
                assert cert.length >= table[p]
            assert cert.length <= 8 * formula_length(p).value + 2 * n

    def test_bfs_floor_sym7(self, tables):
        rng = random.Random(7)
        perms = list(all_permutations(7))
        for p in rng.sample(perms, 500):
            cert = synthesize(p)
            assert eval_word(cert.word) == p
            assert tables[7][p] <= cert.length <= 8 * formula_length(p).value + 2 * 7

    @pytest.mark.parametrize("n", range(7, 13))
    def test_sampled_larger_degrees(self, n):
        rng = random.Random(n)
        for _ in range(1000):
            images = list(range(n))
            rng.shuffle(images)
            p = Permutation(n, tuple(images))
            cert = synthesize(p)
            assert eval_word(cert.word) == p
            assert cert.length <= cert.certified_bound
