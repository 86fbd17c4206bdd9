from itertools import permutations
from math import perm, sqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphmat import corpus
from graphmat import graph_models as gm
from graphmat.matrix_builder import (MemoryBudgetExceeded, TupleIndex, build,
                                     embedding_count, entry, matvec)
from graphmat.shape_core import Shape, transpose
from graphmat.spectral_lab import scalar_statistic
from strategies import shapes


@pytest.fixture(scope="module")
def small():
    return gm.sample_er(7, 2.5, seed=3)


class TestTupleIndex:
    @given(st.integers(0, 3), st.integers(3, 7), st.data())
    def test_roundtrip(self, arity, n, data):
        ti = TupleIndex(arity, n)
        idx = data.draw(st.integers(0, ti.size - 1))
        assert ti.encode(ti.decode(idx)) == idx

    def test_lexicographic(self):
        ti = TupleIndex(2, 4)
        tups = [ti.decode(i) for i in range(ti.size)]
        assert tups == sorted(permutations(range(4), 2))
        assert [tuple(t) for t in ti.tuples()] == tups

    def test_rejects(self):
        ti = TupleIndex(2, 4)
        with pytest.raises(ValueError):
            ti.encode((1, 1))
        with pytest.raises(ValueError):
            ti.encode((1, 9))
        with pytest.raises(ValueError):
            ti.decode(ti.size)


class TestExamples:
    def test_identity(self, small):
        M = build(corpus.identity(), small).to_dense()
        assert np.array_equal(M, np.eye(small.n))
        v = np.arange(small.n, dtype=float)
        assert np.allclose(matvec(build(corpus.identity(), small, mode="implicit"), v), v)

    def test_line(self, small):
        M = build(corpus.line(), small).to_dense()
        assert np.allclose(M, small.chi_matrix)
        assert entry(build(corpus.line(), small), (3,), (3,)) == 0.0

    def test_line_quarter(self):
        g = gm.from_edges(4, [(1, 2)], d=1)
        assert entry(build(corpus.line(), g), (1,), (2,)) == pytest.approx(sqrt(3))

    def test_line_row_sums(self, small):
        M = build(corpus.line(), small, mode="implicit")
        assert np.allclose(M.matvec(np.ones(small.n)), small.chi_matrix.sum(1))

    def test_z_entry(self, small):
        M = build(corpus.z_shape(), small)
        n = small.n
        assert M.dims == (n * (n - 1), n * (n - 1))
        X = small.chi_matrix
        a, b, c, d = 0, 1, 2, 3
        want = sum(X[a, b] * X[b, t] * X[c, t] * X[c, d]
                   for t in range(n) if t not in (a, b, c, d))
        ri = M.row_index
        assert M.to_dense()[ri.encode((a, b)), ri.encode((c, d))] == pytest.approx(want)
        assert entry(M, (a, b), (c, d)) == pytest.approx(want)

    def test_floating_edge_scalar(self, small):
        # injective labelings count each unordered edge twice
        M = build(corpus.floating_edge(), small).to_dense()
        assert M.shape == (1, 1)
        X = small.chi_matrix
        direct = sum(X[a, b] for a in range(small.n) for b in range(a + 1, small.n))
        assert M[0, 0] == pytest.approx(2 * direct)
        assert M[0, 0] == pytest.approx(2 * scalar_statistic("floating_edge_sum", small))

    def test_path2_scalar(self, small):
        M = build(corpus.path2_scalar(), small).to_dense()
        assert M[0, 0] == pytest.approx(scalar_statistic("path2_sum", small))


class TestModes:
    @pytest.mark.parametrize("shape", corpus.corpus(), ids=lambda s: s.name)
    def test_dense_matches_entry_oracle(self, shape, small):
        M = build(shape, small)
        D = M.to_dense()
        for r in range(M.row_index.size):
            for c in range(M.col_index.size):
                want = entry(M, M.row_index.decode(r), M.col_index.decode(c))
                assert D[r, c] == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("shape", corpus.corpus(), ids=lambda s: s.name)
    def test_implicit_matches_explicit(self, shape, small):
        E = build(shape, small)
        I = build(shape, small, mode="implicit")
        rng = np.random.default_rng(0)
        v = rng.standard_normal(E.dims[1])
        w = rng.standard_normal(E.dims[0])
        assert np.allclose(E.matvec(v), I.matvec(v), atol=1e-10)
        assert np.allclose(E.rmatvec(w), I.rmatvec(w), atol=1e-10)

    @pytest.mark.parametrize("model", ["er", "regular"])
    def test_z_at_12(self, model):
        g = gm.sample(model, 12, 3, seed=1)
        E = build(corpus.z_shape(), g)
        I = build(corpus.z_shape(), g, mode="implicit")
        v = np.random.default_rng(1).standard_normal(E.dims[1])
        assert np.abs(E.matvec(v) - I.matvec(v)).max() <= 1e-10

    def test_dimension_mismatch(self, small):
        M = build(corpus.line(), small, mode="implicit")
        with pytest.raises(ValueError):
            M.matvec(np.ones(small.n + 1))

    def test_memory_budget(self, small):
        with pytest.raises(MemoryBudgetExceeded, match="implicit"):
            build(corpus.z_shape(), small, memory_budget=100)

    def test_invalid_shape(self, small):
        with pytest.raises(ValueError):
            build(Shape((0, 1), ((0, 0),), (0,), (1,)), small)

    @given(shapes(max_k=5, max_edges=5), st.integers(0, 50))
    def test_random_shapes_modes_agree(self, shape, seed):
        g = gm.sample_er(6, 2, seed=seed)
        E = build(shape, g)
        I = build(shape, g, mode="implicit")
        v = np.random.default_rng(seed).standard_normal(E.dims[1])
        assert np.allclose(E.matvec(v), I.matvec(v), atol=1e-9)


class TestSymmetries:
    @pytest.mark.parametrize("shape", corpus.corpus(), ids=lambda s: s.name)
    @pytest.mark.parametrize("model", ["er", "regular"])
    def test_transpose(self, shape, model):
        for seed in range(5):
            g = gm.sample(model, 6, 2, seed=seed)
            A = build(shape, g).to_dense()
            B = build(transpose(shape), g).to_dense()
            assert np.abs(A.T - B).max() <= 1e-12

    @pytest.mark.parametrize("name", ["line", "z", "star3", "triangle_middle"])
    def test_relabel_equivariance(self, name):
        shape = corpus.get(name)
        g = gm.sample_er(8, 3, seed=5)
        pi = np.random.default_rng(2).permutation(8)
        h = g.relabel(pi)
        A, B = build(shape, g), build(shape, h)
        DA, DB = A.to_dense(), B.to_dense()
        ri, ci = A.row_index, A.col_index
        rows = [ri.encode(tuple(pi[x] for x in ri.decode(i))) for i in range(ri.size)]
        cols = [ci.encode(tuple(pi[x] for x in ci.decode(j))) for j in range(ci.size)]
        assert np.allclose(DB[np.ix_(rows, cols)], DA, atol=1e-12)


class TestEmbeddingCount:
    def test_counts(self, small):
        n = small.n
        M = build(corpus.z_shape(), small)
        assert embedding_count(M, (0, 1), (2, 3)) == n - 4
        assert embedding_count(M, (0, 1), (1, 0)) == 0
        M = build(corpus.star3(), small)
        assert embedding_count(M, (0,), (0,)) == perm(n - 1, 3)
        assert embedding_count(M, (0,), (1,)) == 0

    @given(shapes(max_k=5, max_edges=4), st.data())
    def test_falling_factorial(self, shape, data):
        g = gm.sample_er(7, 2, seed=0)
        M = build(shape, g)
        r = data.draw(st.integers(0, M.row_index.size - 1))
        c = data.draw(st.integers(0, M.col_index.size - 1))
        row, col = M.row_index.decode(r), M.col_index.decode(c)
        cnt = embedding_count(M, row, col)
        labels = dict(zip(shape.U, row))
        consistent = all(labels.get(v, x) == x for v, x in zip(shape.V, col))
        labels.update(zip(shape.V, col))
        consistent &= len(set(labels.values())) == len(labels)
        if consistent:
            used = len(labels)
            assert cnt == perm(g.n - used, shape.k - used)
        else:
            assert cnt == 0
