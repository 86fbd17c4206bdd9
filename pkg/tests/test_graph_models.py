from collections import Counter
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import chisquare

from graphmat import graph_models as gm


class TestCharacters:
    @given(st.floats(0.01, 0.99))
    def test_mean_zero_unit_variance(self, p):
        ct = gm.CharacterTable(p)
        assert p * ct.chi_present + (1 - p) * ct.chi_absent == pytest.approx(0, abs=1e-12)
        assert p * ct.chi_present ** 2 + (1 - p) * ct.chi_absent ** 2 == pytest.approx(1)

    def test_quarter(self):
        g = gm.from_edges(4, [(0, 1)], d=1)
        assert gm.chi(g, (0, 1)) == pytest.approx(sqrt(3))
        assert gm.chi(g, (2, 3)) == pytest.approx(-1 / sqrt(3))
        assert gm.chi_set(g, ()) == 1.0

    def test_self_loop_rejected(self):
        g = gm.from_edges(4, [(0, 1)], d=1)
        with pytest.raises(ValueError):
            gm.chi(g, (2, 2))

    def test_chi_matrix(self):
        g = gm.sample_er(30, 5, seed=2)
        X = g.chi_matrix
        assert np.all(np.diag(X) == 0)
        assert np.allclose(X, X.T)
        i, j = g.edges[0]
        assert X[i, j] == g.characters.chi_present


class TestER:
    def test_rejects_p_one(self):
        with pytest.raises(gm.InfeasibleParameters):
            gm.sample_er(2, 2, seed=0)

    def test_deterministic(self):
        a, b = gm.sample_er(50, 5, seed=11), gm.sample_er(50, 5, seed=11)
        assert np.array_equal(a.edges, b.edges)

    def test_mean_degree(self):
        n, d = 1000, 50
        means = [gm.sample_er(n, d, seed=s).degrees().mean() for s in range(100)]
        p = d / n
        # each mean degree is 2m/n with m ~ Bin(C(n,2), p)
        sigma = 2 * sqrt(n * (n - 1) / 2 * p * (1 - p)) / n / sqrt(len(means))
        assert abs(np.mean(means) - d * (n - 1) / n) < 5 * sigma


class TestRegular:
    def test_k4(self):
        g = gm.sample_regular(4, 3, seed=0)
        assert g.m == 6

    def test_parity(self):
        with pytest.raises(gm.InfeasibleParameters):
            gm.sample_regular(5, 3, seed=0)

    @given(st.integers(5, 30), st.integers(1, 6), st.integers(0, 10 ** 6))
    def test_degrees_and_simple(self, n, d, seed):
        if d >= n or (n * d) % 2:
            return
        g = gm.sample_regular(n, d, seed=seed, swaps=200)
        assert np.all(g.degrees() == d)
        assert g.m == n * d // 2
        assert np.all(g.edges[:, 0] < g.edges[:, 1])
        assert len({tuple(e) for e in g.edges.tolist()}) == g.m

    def test_circulant(self):
        for n, d in [(8, 3), (9, 4), (10, 5)]:
            e = gm.circulant(n, d)
            A = np.zeros((n, n), int)
            A[e[:, 0], e[:, 1]] += 1
            A[e[:, 1], e[:, 0]] += 1
            assert A.max() == 1 and np.all(A.sum(0) == d)

    def test_uniform_against_enumeration(self):
        # n=8, d=2: labeled 2-regular graphs; compare per-graph frequencies
        graphs = gm.enumerate_regular(8, 2)
        keys = {tuple(map(tuple, g.edges.tolist())): i for i, g in enumerate(graphs)}
        N = 6000
        counts = Counter(keys[tuple(map(tuple, gm.sample_regular(8, 2, seed=s).edges.tolist()))]
                         for s in range(N))
        # group labeled graphs by cycle type to keep expected cell counts large
        def cycle_type(g):
            A = g.adjacency
            seen, sizes = set(), []
            for v in range(8):
                if v in seen:
                    continue
                comp, stack = {v}, [v]
                while stack:
                    x = stack.pop()
                    for y in np.nonzero(A[x])[0]:
                        if y not in comp:
                            comp.add(int(y))
                            stack.append(int(y))
                seen |= comp
                sizes.append(len(comp))
            return tuple(sorted(sizes))
        types = [cycle_type(g) for g in graphs]
        obs, exp = Counter(), Counter(types)
        for i, c in counts.items():
            obs[types[i]] += c
        cats = sorted(exp)
        f_obs = [obs[c] for c in cats]
        f_exp = [exp[c] / len(graphs) * N for c in cats]
        assert chisquare(f_obs, f_exp).pvalue > 1e-4

    def test_marginal(self):
        n, d, N = 8, 3, 10_000
        hits = sum(gm.sample_regular(n, d, seed=s, swaps=200).has_edge(0, 1) for s in range(N))
        p = gm.expected_regular_marginal(n, d)
        assert abs(hits / N - p) < 4 * sqrt(p * (1 - p) / N)


class TestEnumerators:
    def test_counts(self):
        assert len(gm.enumerate_regular(4, 3)) == 1
        assert len(gm.enumerate_regular(6, 2)) == 70
        assert gm.enumerate_regular(5, 3) == []

    def test_counts_independent(self):
        # brute force over all edge subsets of K6 of size 6
        from itertools import combinations
        pairs = list(combinations(range(6), 2))
        brute = 0
        for es in combinations(pairs, 6):
            deg = Counter(v for e in es for v in e)
            brute += all(deg[v] == 2 for v in range(6))
        assert brute == 70

    def test_infeasible(self):
        with pytest.raises(gm.InfeasibleParameters):
            gm.enumerate_regular(11, 2)
        with pytest.raises(gm.InfeasibleParameters):
            gm.er_graph_table(7, 0.3)

    def test_er_expectations(self):
        assert gm.exact_expectation_er(4, 0.3, lambda g: gm.chi(g, (1, 2))) == pytest.approx(0, abs=1e-12)
        S, T = [(0, 1), (2, 3)], [(0, 1), (1, 2)]
        v = gm.exact_expectation_er(5, 0.3, lambda g: gm.chi_set(g, S) * gm.chi_set(g, T))
        assert abs(v) < 1e-12
        v = gm.exact_expectation_er(5, 0.3, lambda g: gm.chi_set(g, S) ** 2)
        assert v == pytest.approx(1, abs=1e-12)

    def test_er_gram(self):
        sets, G = gm.er_character_gram(4, 0.3, 2)
        assert np.abs(G - np.eye(len(sets))).max() < 1e-12

    def test_regular_gram(self):
        n, d = 6, 2
        sets, G = gm.regular_character_gram(n, d, 2)
        p = d / n
        want = (d / (n - 1) - d / n) / sqrt(p * (1 - p))
        for j, S in enumerate(sets):
            if len(S) == 1:
                assert G[0, j] == pytest.approx(want, abs=1e-12)
        off = G - np.diag(np.diag(G))
        assert np.abs(off).max() > 0.01


class TestIO:
    @given(st.integers(0, 1000))
    def test_edgelist_roundtrip(self, seed):
        g = gm.sample_er(12, 3, seed=seed)
        h = gm.from_edgelist(gm.to_edgelist(g))
        assert np.array_equal(g.edges, h.edges) and h.n == g.n and h.d == g.d
        assert h.seed == seed and h.model == gm.ER

    def test_relabel(self):
        g = gm.sample_er(10, 3, seed=1)
        perm = np.random.default_rng(0).permutation(10)
        h = g.relabel(perm)
        assert np.array_equal(h.adjacency[np.ix_(perm, perm)], g.adjacency)

    def test_rejects_parallel(self):
        with pytest.raises(ValueError):
            gm.from_edges(3, [(0, 1), (1, 0)], d=1)
