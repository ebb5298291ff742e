import warnings

import numpy as np
import pytest

from perml1.metric import (
    ResourceLimitError,
    bfs_distances,
    diam_term_min,
    formula_distance,
    formula_length,
    formula_terms_batch,
    rank_rows,
    split_check,
    sum_term_min,
)
from perml1.perms import (
    Permutation,
    all_permutations,
    compose,
    inverse,
    perm_rank,
)


class TestBfs:
    def test_identity_and_generators(self, tables):
        for n, table in tables.items():
            assert table[Permutation.identity(n)] == 0
            assert table[Permutation.transposition(n)] == 1
            assert table[Permutation.rotation(n)] == 1

    def test_sym3_adjacent_swap(self, tables):
        # (1 2) is reachable in two letters (c then t) and no fewer
        assert tables[3][Permutation(3, (0, 2, 1))] == 2

    def test_guard(self):
        with pytest.raises(ResourceLimitError):
            bfs_distances(11)

    def test_matches_dict_bfs(self):
        # independent oracle: hash-map BFS over tuples
        for n in (2, 3, 4, 5):
            t = Permutation.transposition(n)
            c = Permutation.rotation(n)
            ci = inverse(c)
            dist = {Permutation.identity(n).images: 0}
            frontier = [Permutation.identity(n)]
            while frontier:
                nxt = []
                for p in frontier:
                    for g in (t, c, ci):
                        q = compose(g, p)
                        if q.images not in dist:
                            dist[q.images] = dist[p.images] + 1
                            nxt.append(q)
                frontier = nxt
            table = bfs_distances(n)
            for p in all_permutations(n):
                assert table[p] == dist[p.images]

    def test_undirected_symmetry(self, tables):
        # the metric of an undirected graph is symmetric under inversion
        for n in (3, 4, 5):
            table = tables[n]
            for p in all_permutations(n):
                assert table[p] == table[inverse(p)]


class TestFormulaLength:
    def test_identity(self):
        fb = formula_length(Permutation.identity(6))
        assert fb.value == 0 and fb.l_star == 0

    @pytest.mark.parametrize("n", [3, 4, 6, 9])
    def test_rotation(self, n):
        fb = formula_length(Permutation.rotation(n))
        assert fb.value == 1
        assert fb.l_star == n - 1
        terms = fb.per_shift[n - 1]
        assert terms.sum == 0 and terms.diam == 1

    @pytest.mark.parametrize("n", [3, 4, 5, 7])
    def test_transposition(self, n):
        fb = formula_length(Permutation.transposition(n))
        assert fb.value == 3
        assert fb.l_star == 0
        assert fb.per_shift[0] == (0, 2, 1)

    def test_diam_term_bounded(self):
        for p in all_permutations(5):
            for t in formula_length(p).per_shift:
                assert t.diam <= 5 // 2

    def test_json_shape(self):
        d = formula_length(Permutation.rotation(6)).to_json_dict()
        assert d["value"] == 1 and d["l_star"] == 5
        assert len(d["per_shift"]) == 6
        assert set(d["per_shift"][0]) == {"l", "sum", "diam"}


class TestFormulaDistance:
    def test_reflexive(self):
        p = Permutation(5, (3, 1, 4, 0, 2))
        assert formula_distance(p, p).value == 0

    def test_to_rotation(self):
        assert formula_distance(Permutation.identity(6), Permutation.rotation(6)).value == 1
        assert formula_distance(Permutation.identity(6), Permutation.transposition(6)).value == 3

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            formula_distance(Permutation.identity(3), Permutation.identity(4))

    @pytest.mark.parametrize("n", range(2, 7))
    def test_right_invariance_exhaustive(self, n):
        # the pairwise terms must agree shift by shift with the one-sided
        # formula applied to q * p^-1
        perms = list(all_permutations(n))
        import random

        rng = random.Random(n)
        pairs = [(rng.choice(perms), rng.choice(perms)) for _ in range(60)]
        if n <= 4:
            pairs = [(p, q) for p in perms for q in perms]
        for p, q in pairs:
            pair = formula_distance(p, q)
            single = formula_length(compose(q, inverse(p)))
            assert pair.per_shift == single.per_shift
            assert pair.value == single.value and pair.l_star == single.l_star


class TestSplitTerms:
    def test_examples(self):
        ident = Permutation.identity(6)
        c = Permutation.rotation(6)
        t = Permutation.transposition(6)
        assert sum_term_min(ident, c) == 0
        assert diam_term_min(ident, c) == 1
        assert sum_term_min(ident, t) == 2
        assert diam_term_min(ident, t) == 1
        assert sum_term_min(t, t) == 0 and diam_term_min(t, t) == 0

    def test_split_check_examples(self):
        ident = Permutation.identity(6)
        assert split_check(ident, Permutation.rotation(6)) == (1, 1, True)
        assert split_check(ident, Permutation.transposition(6)) == (3, 5, True)
        p = Permutation(6, (2, 4, 0, 5, 3, 1))
        assert split_check(p, p) == (0, 0, True)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_split_holds_per_sigma(self, n, perm_arrays):
        # right-invariance reduces the all-pairs sweep to all sigma
        sums, diams = formula_terms_batch(perm_arrays[n])
        joint = (sums + diams).min(axis=1)
        bound = 2 * sums.min(axis=1) + diams.min(axis=1)
        assert (joint <= bound).all()

    @pytest.mark.parametrize("n", range(2, 7))
    def test_case_b2_never_fires(self, n, perm_arrays):
        # when the sum term stays under n/2, one shift attains both minima;
        # a violation is reported as a finding, not a failure
        sums, diams = formula_terms_batch(perm_arrays[n])
        t1 = sums.min(axis=1)
        t2 = diams.min(axis=1)
        both = ((sums == t1[:, None]) & (diams == t2[:, None])).any(axis=1)
        exceptions = ((t1 < n / 2) & ~both).nonzero()[0]
        if exceptions.size:
            warnings.warn(f"joint-minimizer exceptions at n={n}: ranks {exceptions.tolist()}")

    @pytest.mark.parametrize("n", range(2, 7))
    def test_joint_at_least_sum_min(self, n, perm_arrays):
        sums, diams = formula_terms_batch(perm_arrays[n])
        assert ((sums + diams).min(axis=1) >= sums.min(axis=1)).all()


class TestBatch:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_pure_python(self, n, perm_arrays):
        sums, diams = formula_terms_batch(perm_arrays[n])
        for i, p in enumerate(all_permutations(n)):
            fb = formula_length(p)
            assert sums[i].tolist() == [t.sum for t in fb.per_shift]
            assert diams[i].tolist() == [t.diam for t in fb.per_shift]

    def test_rank_rows_matches_perm_rank(self, perm_arrays):
        arr = perm_arrays[6]
        ranks = rank_rows(arr)
        assert ranks.tolist() == [perm_rank(p) for p in all_permutations(6)]


class TestSandwich:
    @pytest.mark.parametrize("n", range(2, 7))
    def test_formula_brackets_bfs(self, n, tables, perm_arrays):
        sums, diams = formula_terms_batch(perm_arrays[n])
        value = (sums + diams).min(axis=1)
        upper = (6 * sums + 2 * diams).min(axis=1)
        d = tables[n].dist.astype(np.int64)
        assert (value <= 3 * d).all()
        assert (d <= upper).all()
        assert (upper <= 6 * value).all()

    @pytest.mark.parametrize("n", range(2, 7))
    def test_per_step_stability(self, n, perm_arrays):
        # one generator changes the formula value by at most 3
        from perml1.metric import generator_neighbors_rows

        arr = perm_arrays[n]
        sums, diams = formula_terms_batch(arr)
        value = (sums + diams).min(axis=1)
        for rows in generator_neighbors_rows(arr.astype(np.int8)):
            neighbor_value = value[rank_rows(rows.astype(np.int64))]
            assert (abs(neighbor_value - value) <= 3).all()
