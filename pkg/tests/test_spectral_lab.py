from math import sqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphmat import corpus
from graphmat import graph_models as gm
from graphmat.matrix_builder import build
from graphmat.norm_bounds import BoundParams, closed_form_bound
from graphmat.spectral_lab import (exact_expected_trace, expected_trace_mc, scalar_statistic,
                                   spectral_norm, trace_moment, verify_norm)


class TestSpectralNorm:
    def test_identity(self):
        g = gm.sample_er(30, 4, seed=0)
        for method in ("dense", "power", "lanczos"):
            M = build(corpus.identity(), g, mode="implicit" if method != "dense" else "explicit")
            assert spectral_norm(M, method=method).value == pytest.approx(1, rel=1e-6)

    def test_two_by_two(self):
        assert spectral_norm(np.array([[0, 3], [3, 0]])).value == pytest.approx(3)

    def test_power_vs_dense_line(self):
        g = gm.sample_er(500, 20, seed=4)
        M = build(corpus.line(), g)
        dense = spectral_norm(M, method="dense").value
        power = spectral_norm(M, method="power", tol=1e-10)
        assert abs(power.value - dense) / dense <= 1e-4
        lanczos = spectral_norm(M, method="lanczos")
        assert abs(lanczos.value - dense) / dense <= 1e-6

    @pytest.mark.parametrize("name", ["line", "z", "star3", "triangle_middle"])
    def test_transpose_invariant(self, name):
        g = gm.sample_regular(10, 3, seed=2)
        D = build(corpus.get(name), g).to_dense()
        assert spectral_norm(D).value == pytest.approx(spectral_norm(D.T).value, rel=1e-12)

    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 1000))
    def test_trace_bounds_norm(self, r, c, seed):
        A = np.random.default_rng(seed).standard_normal((r, c))
        norm = spectral_norm(A).value
        assert trace_moment(A, 1) == pytest.approx(np.sum(A * A))
        for q in (1, 2, 3):
            assert trace_moment(A, q) ** (1 / (2 * q)) >= norm * (1 - 1e-12)

    def test_trace_column_sweep_matches_dense(self):
        g = gm.sample_er(9, 3, seed=1)
        E = build(corpus.z_shape(), g)
        I = build(corpus.z_shape(), g, mode="implicit")
        assert trace_moment(I, 2) == pytest.approx(trace_moment(E, 2), rel=1e-10)

    def test_trace_rejects_q0(self):
        with pytest.raises(ValueError):
            trace_moment(np.eye(2), 0)


class TestTraceMC:
    @pytest.mark.parametrize("model", ["er", "regular"])
    def test_mc_matches_exact(self, model):
        exact = exact_expected_trace(corpus.line(), model, 6, 2, 1)
        mc = expected_trace_mc(corpus.line(), model, 6, 2, 1, 400)
        assert abs(mc.mean - exact) <= 4 * mc.stderr

    def test_line_q1_is_edge_count_identity(self):
        # tr(XXᵀ) summed over pairs: each ordered pair contributes χ², mean 1
        exact = exact_expected_trace(corpus.line(), "er", 5, 2, 1)
        assert exact == pytest.approx(5 * 4)


class TestScalars:
    @pytest.mark.parametrize("n,d", [(50, 4), (100, 10), (200, 7)])
    def test_regular_floating_edge(self, n, d):
        if n * d % 2:
            return
        g = gm.sample_regular(n, d, seed=0)
        p = d / n
        assert scalar_statistic("floating_edge_sum", g) == pytest.approx(
            (d / 2) / sqrt(p * (1 - p)))

    def test_regular_path2_closed_form(self):
        n, d = 400, 36
        g = gm.sample_regular(n, d, seed=1)
        assert scalar_statistic("path2_sum", g) == pytest.approx(-n * n + 2 * n * d / (n - d))

    def test_unknown(self):
        with pytest.raises(ValueError):
            scalar_statistic("triangles", gm.sample_er(10, 2, seed=0))

    @pytest.mark.parametrize("model", ["er", "regular"])
    def test_floating_edge_within_full_bound(self, model):
        s = corpus.floating_edge()
        for n in (200, 400):
            g = gm.sample(model, n, 20, seed=0)
            val = abs(build(s, g).to_dense()[0, 0])
            assert val <= closed_form_bound(s, BoundParams.for_shape(s, n, 20)).value

    def test_path2_user_formula_underpredicts_regular(self):
        # q = 1 strips the polylog factor so the polynomial orders are compared
        s = corpus.path2_scalar()
        for n in (400, 800):
            d = 36
            pr = BoundParams.for_shape(s, n, d, q=1)
            g = gm.sample_regular(n, d, seed=0)
            stat = abs(scalar_statistic("path2_sum", g))
            assert closed_form_bound(s, pr, theorem="user").value < stat
            assert stat <= closed_form_bound(s, pr, theorem="full").value


def test_verify_norm_report():
    rep = verify_norm(corpus.line(), "er", 128, 16, seeds=[0, 1, 2])
    assert rep.seeds == [0, 1, 2]
    assert rep.fraction_within == 1.0
    assert rep.median_norm <= rep.max_norm <= rep.bound
    assert all(r.converged for r in rep.rows)
