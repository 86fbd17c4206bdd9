"""Spectral norms, exact trace moments and Monte Carlo harnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Callable, Sequence

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, svds

from . import graph_models as gm
from .matrix_builder import MaterializedMatrix, build
from .norm_bounds import BoundParams, closed_form_bound
from .shape_core import Shape

DENSE_LIMIT = 2000
TRACE_LIMIT = 5000
START_SEED = 20240607
RESTART_TOL = 1e-3


class SizeInfeasible(ValueError):
    pass


@dataclass(frozen=True)
class NormEstimate:
    value: float
    method: str
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True
    restart_gap: float = 0.0

    def __float__(self) -> float:
        return self.value


def _as_dense(matrix) -> np.ndarray | None:
    if isinstance(matrix, MaterializedMatrix):
        return matrix.dense
    return np.asarray(matrix, dtype=float)


def _ops(matrix):
    if isinstance(matrix, MaterializedMatrix):
        return matrix.dims, matrix.matvec, matrix.rmatvec
    A = np.asarray(matrix, dtype=float)
    return A.shape, (lambda v: A @ v), (lambda v: A.T @ v)


def _power(dims, mv, rmv, x0, tol, max_iter):
    # iterate on the Gram matrix of the smaller side
    if dims[0] <= dims[1]:
        step = lambda x: mv(rmv(x))
    else:
        step = lambda x: rmv(mv(x))
    x = x0 / np.linalg.norm(x0)
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = step(x)
        lam_new = float(x @ y)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0, it, 0.0, True
        resid = float(np.linalg.norm(y - lam_new * x) / ny)
        x = y / ny
        if it > 1 and abs(lam_new - lam) <= tol * abs(lam_new) and resid <= sqrt(tol):
            return sqrt(max(lam_new, 0.0)), it, resid, True
        lam = lam_new
    return sqrt(max(lam, 0.0)), max_iter, resid, False


def spectral_norm(matrix, tol: float = 1e-6, max_iter: int = 5000,
                  method: str = "auto") -> NormEstimate:
    """Largest singular value.

    ``method``: ``auto`` (dense SVD up to ``DENSE_LIMIT`` rows/cols, else
    Lanczos), ``dense``, ``power`` or ``lanczos`` (ARPACK).  Power iteration
    runs from a fixed start plus one random restart and is flagged
    unconverged when the two disagree by more than ``RESTART_TOL``.
    """
    (r, c), mv, rmv = _ops(matrix)
    if method == "auto":
        method = "dense" if max(r, c) <= DENSE_LIMIT else "lanczos"
    if min(r, c) == 0:
        return NormEstimate(0.0, method)
    if method == "dense":
        A = _as_dense(matrix)
        if A is None:
            if max(r, c) > DENSE_LIMIT:
                raise SizeInfeasible(f"dense SVD of {r}×{c} exceeds limit {DENSE_LIMIT}")
            A = matrix.to_dense()
        if not np.all(np.isfinite(A)):
            raise ValueError("matrix has non-finite entries")
        return NormEstimate(float(np.linalg.norm(A, 2)), "dense")
    side = min(r, c)
    if method == "power":
        x0 = np.random.default_rng(START_SEED).standard_normal(side)
        v1, it1, res1, ok1 = _power((r, c), mv, rmv, x0, tol, max_iter)
        x1 = np.random.default_rng(START_SEED + 1).standard_normal(side)  # reproducible restart
        v2, it2, res2, ok2 = _power((r, c), mv, rmv, x1, tol, max_iter)
        gap = abs(v1 - v2) / max(v1, v2, 1e-300)
        best = max(v1, v2)
        return NormEstimate(best, "power", it1 + it2, max(res1, res2),
                            ok1 and ok2 and gap <= RESTART_TOL, gap)
    if method == "lanczos":
        if side == 1:
            return spectral_norm(matrix, method="dense" if _as_dense(matrix) is not None
                                 else "power", tol=tol, max_iter=max_iter)
        calls = [0]

        def counted(f):
            def g(v):
                calls[0] += 1
                return f(np.ravel(v))
            return g
        op = LinearOperator((r, c), matvec=counted(mv), rmatvec=counted(rmv), dtype=np.float64)
        v0 = np.random.default_rng(START_SEED).standard_normal(side)
        try:
            u, sv, vt = svds(op, k=1, tol=tol, maxiter=max_iter, v0=v0, solver="arpack")
        except ArpackNoConvergence:
            return NormEstimate(float("nan"), "lanczos", calls[0], float("inf"), False)
        sigma = float(sv[0])
        resid = float(np.linalg.norm(rmv(u[:, 0]) - sigma * vt[0]) / max(sigma, 1e-300))
        return NormEstimate(sigma, "lanczos", calls[0], resid, resid <= sqrt(tol))
    raise ValueError(f"unknown method {method!r}")


def trace_moment(matrix, q: int) -> float:
    """tr((M Mᵀ)^q), exactly."""
    if q < 1:
        raise ValueError("q must be ≥ 1")
    (r, c), mv, rmv = _ops(matrix)
    A = _as_dense(matrix)
    if A is None:
        if min(r, c) > TRACE_LIMIT:
            raise SizeInfeasible(f"exact trace needs min dimension ≤ {TRACE_LIMIT}")
        if max(r, c) <= TRACE_LIMIT:
            A = matrix.to_dense()
    if A is not None:
        if min(A.shape) == 0:
            return 0.0
        s = np.linalg.svd(A, compute_uv=False)
        return float(np.sum(s ** (2 * q)))
    # column sweep over the smaller side
    total = 0.0
    small_rows = r <= c
    for i in range(min(r, c)):
        e = np.zeros(min(r, c))
        e[i] = 1.0
        x = e
        for _ in range(q):
            x = mv(rmv(x)) if small_rows else rmv(mv(x))
        total += x[i]
    return float(total)


@dataclass(frozen=True)
class MCResult:
    mean: float
    stderr: float
    values: np.ndarray = field(repr=False)

    @property
    def num_seeds(self) -> int:
        return len(self.values)


def _summary(vals) -> MCResult:
    vals = np.asarray(vals, dtype=float)
    se = float(vals.std(ddof=1) / sqrt(len(vals))) if len(vals) > 1 else float("nan")
    return MCResult(float(vals.mean()), se, vals)


def monte_carlo(statistic: Callable[[gm.GraphSample], float], model: str, n: int, d,
                seeds: Sequence[int]) -> MCResult:
    return _summary([statistic(gm.sample(model, n, d, seed=s)) for s in seeds])


def expected_trace_mc(shape: Shape, model: str, n: int, d, q: int, num_seeds: int,
                      seed0: int = 0) -> MCResult:
    def stat(g):
        return trace_moment(build(shape, g), q)
    return monte_carlo(stat, model, n, d, range(seed0, seed0 + num_seeds))


def exact_expected_trace(shape: Shape, model: str, n: int, d, q: int) -> float:
    def stat(g):
        return trace_moment(build(shape, g), q)
    if gm.canonical_model(model) == gm.ER:
        return gm.exact_expectation_er(n, d / n, stat)
    return gm.exact_expectation_regular(n, int(d), stat)


# --- scalar statistics --------------------------------------------------------

def scalar_statistic(kind: str, sample: gm.GraphSample) -> float:
    X = sample.chi_matrix
    if kind == "floating_edge_sum":
        return float(X.sum() / 2)
    if kind == "path2_sum":
        r = X.sum(axis=0)
        return float(np.sum(r * r) - np.sum(X * X))
    raise ValueError(f"unknown statistic {kind!r}")


# --- empirical vs predicted ---------------------------------------------------

@dataclass(frozen=True)
class SpectralRow:
    shape: str
    model: str
    n: int
    d: float
    q: int
    seed: int
    norm: float
    bound: float
    ratio: float | None
    method: str
    converged: bool
    iterations: int = 0
    residual: float = 0.0


@dataclass
class SpectralReport:
    shape: str
    model: str
    n: int
    d: float
    q: int
    rows: list[SpectralRow]

    @property
    def seeds(self) -> list[int]:
        return [r.seed for r in self.rows]

    @property
    def norms(self) -> np.ndarray:
        return np.array([r.norm for r in self.rows])

    @property
    def median_norm(self) -> float:
        return float(np.median(self.norms))

    @property
    def max_norm(self) -> float:
        return float(self.norms.max())

    @property
    def bound(self) -> float:
        return self.rows[0].bound

    @property
    def fraction_within(self) -> float:
        return float(np.mean([r.norm <= r.bound for r in self.rows]))


def _ratio(a: float, b: float) -> float | None:
    if np.isfinite(a) and np.isfinite(b) and a > 0 and b > 0:
        return a / b
    return None


def verify_norm(shape: Shape, model: str, n: int, d, seeds: Sequence[int],
                q: int | None = None, c_norm: float = 1.0, method: str = "auto",
                tol: float = 1e-6) -> SpectralReport:
    params = BoundParams.for_shape(shape, n, d, q=q, c_norm=c_norm)
    bound = closed_form_bound(shape, params).value
    dense_ok = len(shape.U) + len(shape.V) <= 2
    rows = []
    for s in seeds:
        g = gm.sample(model, n, d, seed=s)
        M = build(shape, g, mode="explicit" if dense_ok else "implicit")
        est = spectral_norm(M, tol=tol, method=method)
        rows.append(SpectralRow(shape.name, g.model, n, d, params.q, s, est.value, bound,
                                _ratio(est.value, bound), est.method, est.converged,
                                est.iterations, est.residual))
    return SpectralReport(shape.name, gm.canonical_model(model), n, d, params.q, rows)
