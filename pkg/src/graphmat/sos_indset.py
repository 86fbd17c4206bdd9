"""Pseudo-calibrated moment matrices for independent set.

Notation used below.  For a vertex set ``W`` let ``Y_e = -sqrt(p/(1-p))·χ_e``,
so ``Y_e = -1`` on edges and ``Y_e = p/(1-p)`` on non-edges.  The moment is

    Ẽ[x_S] = Σ_{W ⊇ S, |W| ≤ D_V} (k/n)^{|W|} · c_S(G[W])

where ``c_S(W)`` sums ``∏_{e∈R} Y_e`` over edge sets ``R`` on ``W`` covering
``W \\ S`` whose every component meets ``S``.  Since
``Σ_{R ⊆ C(W,2)} ∏ Y_e = [W independent]·(1-p)^{-C(|W|,2)}``, peeling off
the part of ``R`` attached to ``S`` gives the subset recursion

    c_S(W) = T(W) − Σ_{S ⊆ W1 ⊊ W} c_S(W1)·T(W \\ W1).

Edges inside ``S`` factor out as ``∏(1 + Y_e)``, which vanishes on an edge,
so ``c_S ≡ 0`` when ``S`` is not independent.

Three evaluators are provided:

* ``engine="subsets"``: the recursion above over every ``W`` (budgeted).
* ``engine="typed"``: for ``D_V − |S| ≤ 3``, ``c_S`` depends only on how each
  extra vertex attaches to ``S`` and on the edges among the extras, so the
  sum over ``W`` collapses onto typed counts of vertices, edges, cherries
  and triangles (numba kernel).
* :func:`pseudo_moment_by_components`: an independent oracle through the
  connected-graph function and set partitions anchored at ``S``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb, log, sqrt

import numpy as np
from numba import njit

from .graph_models import GraphSample
from .shape_core import Shape, enumerate_separators, validate

TYPED_MAX_EXTRA = 3
DEFAULT_DV_EXTRA = 3
DEFAULT_BUDGET = 2_000_000
EIG_LIMIT = 4000


class BudgetExceeded(ValueError):
    def __init__(self, attempted: int, budget: int):
        super().__init__(f"enumeration of {attempted} vertex sets exceeds budget {budget}")
        self.attempted = attempted
        self.budget = budget


def default_k(n: int, d: float) -> int:
    return max(1, int(n / (sqrt(d) * log(n))))


def default_dv(n: int, dsos: int) -> int:
    return int(np.ceil(dsos * log(n)))


# --- small-graph recursion ----------------------------------------------------

def _independent(adj: list[int], mask: int) -> bool:
    m = mask
    while m:
        low = m & -m
        i = low.bit_length() - 1
        if adj[i] & mask:
            return False
        m ^= low
    return True


def anchored_sum(adj: list[int], s: int, p: float) -> float:
    """``c_S(W)`` for the local graph on ``W = {0..w-1}`` with ``S = {0..s-1}``.

    ``adj[i]`` is the neighbour bitmask of vertex ``i``.
    """
    w = len(adj)
    smask = (1 << s) - 1
    if not _independent(adj, smask):
        return 0.0
    f = 1.0 / (1.0 - p)

    def T(mask: int) -> float:
        if not _independent(adj, mask):
            return 0.0
        c = bin(mask).count("1")
        return f ** (c * (c - 1) // 2)

    extra = ((1 << w) - 1) ^ smask
    c: dict[int, float] = {}
    # submasks of `extra` in increasing numeric order visit subsets first
    subs = [x for x in range(extra + 1) if x & extra == x]
    for X in subs:
        val = T(smask | X)
        Y = (X - 1) & X
        while True:
            if Y != X:
                val -= c[Y] * T(X ^ Y)
            if Y == 0:
                break
            Y = (Y - 1) & X
        c[X] = val
    return c[extra]


def _local_adj(sample: GraphSample, verts) -> list[int]:
    A = sample.adjacency
    out = []
    for a in verts:
        m = 0
        for j, b in enumerate(verts):
            if A[a, b]:
                m |= 1 << j
        out.append(m)
    return out


# --- engine: subset recursion over all W ---------------------------------------

def _count_sets(n_free: int, emax: int) -> int:
    return sum(comb(n_free, e) for e in range(emax + 1))


def _pm_subsets(sample: GraphSample, S: tuple[int, ...], k: float, D_V: int,
                budget: int) -> float:
    n, p = sample.n, sample.p
    s = len(S)
    emax = min(D_V - s, n - s)
    attempted = _count_sets(n - s, emax)
    if attempted > budget:
        raise BudgetExceeded(attempted, budget)
    A = sample.adjacency
    if any(A[a, b] for a, b in combinations(S, 2)):
        return 0.0
    f = 1.0 / (1.0 - p)
    free = [v for v in range(n) if v not in set(S)]

    def T(verts) -> float:
        for a, b in combinations(verts, 2):
            if A[a, b]:
                return 0.0
        c = len(verts)
        return f ** (c * (c - 1) // 2)

    memo: dict[tuple[int, ...], float] = {}
    scale = k / n
    total = 0.0
    for e in range(emax + 1):
        for X in combinations(free, e):
            val = T(S + X)
            for r in range(e):
                for X1 in combinations(X, r):
                    rest = tuple(v for v in X if v not in X1)
                    val -= memo[X1] * T(rest)
            memo[X] = val
            total += scale ** (s + e) * val
    return total


# --- engine: typed counts --------------------------------------------------------

@lru_cache(maxsize=64)
def typed_tables(p: float, s: int):
    """Möbius-transformed ``c_S`` tables for 0..3 extra vertices.

    Returns ``(g0, h1, h2, h3)`` with ``h1[t]``, ``h2[t1, t2, F]`` and
    ``h3[t1, t2, t3, F]`` where ``t`` is an extra vertex's neighbour mask into
    ``S`` and ``F`` a bitmask of edges among extras (bit0 = 01, bit1 = 02,
    bit2 = 12).
    """
    nt = 1 << s
    pairs3 = [(0, 1), (0, 2), (1, 2)]

    def value(types, F, pairs):
        e = len(types)
        adj = [0] * (s + e)
        for j, t in enumerate(types):
            v = s + j
            for i in range(s):
                if t >> i & 1:
                    adj[i] |= 1 << v
                    adj[v] |= 1 << i
        for b, (x, y) in enumerate(pairs):
            if F >> b & 1:
                adj[s + x] |= 1 << (s + y)
                adj[s + y] |= 1 << (s + x)
        return anchored_sum(adj, s, p)

    def mobius(g, nbits):
        h = g.copy()
        for b in range(nbits):
            for F in range(1 << nbits):
                if F >> b & 1:
                    h[..., F] -= h[..., F ^ (1 << b)]
        return h

    g0 = value((), 0, [])
    h1 = np.array([value((t,), 0, []) for t in range(nt)])
    g2 = np.zeros((nt, nt, 2))
    for t1, t2, F in product(range(nt), range(nt), range(2)):
        g2[t1, t2, F] = value((t1, t2), F, [(0, 1)])
    g3 = np.zeros((nt, nt, nt, 8))
    for t1, t2, t3, F in product(range(nt), range(nt), range(nt), range(8)):
        g3[t1, t2, t3, F] = value((t1, t2, t3), F, pairs3)
    return g0, h1, mobius(g2, 1), mobius(g3, 3)


@njit(cache=True)
def _typed_kernel(S, A, nbr_ptr, nbr, tri, g0, h1, h2, h3, scale, emax):
    n = A.shape[0]
    s = S.shape[0]
    for a in range(s):
        for b in range(a + 1, s):
            if A[S[a], S[b]]:
                return 0.0
    nt = 1 << s
    typ = np.zeros(n, dtype=np.int64)
    for v in range(n):
        t = 0
        for j in range(s):
            if S[j] == v:
                t = -1
                break
            if A[v, S[j]]:
                t |= 1 << j
        typ[v] = t
    c = np.zeros(nt)
    for v in range(n):
        if typ[v] >= 0:
            c[typ[v]] += 1.0
    total = scale ** s * g0
    if emax < 1:
        return total
    acc = 0.0
    for t in range(nt):
        acc += c[t] * h1[t]
    total += scale ** (s + 1) * acc
    if emax < 2:
        return total
    N = np.zeros((n, nt))
    for v in range(n):
        if typ[v] < 0:
            continue
        for q in range(nbr_ptr[v], nbr_ptr[v + 1]):
            w = nbr[q]
            if typ[w] >= 0:
                N[v, typ[w]] += 1.0
    E2 = np.zeros((nt, nt))
    for v in range(n):
        if typ[v] >= 0:
            for t in range(nt):
                E2[typ[v], t] += N[v, t]
    acc = 0.0
    for t1 in range(nt):
        for t2 in range(nt):
            pairs = c[t1] * c[t2] - (c[t1] if t1 == t2 else 0.0)
            acc += pairs * h2[t1, t2, 0] + E2[t1, t2] * h2[t1, t2, 1]
    total += scale ** (s + 2) * acc / 2.0
    if emax < 3:
        return total
    Ch = np.zeros((nt, nt, nt))
    for v in range(n):
        t0 = typ[v]
        if t0 < 0:
            continue
        for t1 in range(nt):
            if N[v, t1] == 0.0:
                continue
            for t2 in range(nt):
                Ch[t0, t1, t2] += N[v, t1] * N[v, t2]
    for t0 in range(nt):
        for t1 in range(nt):
            Ch[t0, t1, t1] -= E2[t0, t1]
    Tr = np.zeros((nt, nt, nt))
    for q in range(tri.shape[0]):
        a = typ[tri[q, 0]]
        b = typ[tri[q, 1]]
        d = typ[tri[q, 2]]
        if a < 0 or b < 0 or d < 0:
            continue
        Tr[a, b, d] += 1.0
        Tr[a, d, b] += 1.0
        Tr[b, a, d] += 1.0
        Tr[b, d, a] += 1.0
        Tr[d, a, b] += 1.0
        Tr[d, b, a] += 1.0
    acc = 0.0
    for t1 in range(nt):
        for t2 in range(nt):
            d12 = 1.0 if t1 == t2 else 0.0
            for t3 in range(nt):
                d13 = 1.0 if t1 == t3 else 0.0
                d23 = 1.0 if t2 == t3 else 0.0
                n3 = (c[t1] * c[t2] * c[t3] - d12 * c[t1] * c[t3] - d13 * c[t1] * c[t2]
                      - d23 * c[t1] * c[t2] + 2.0 * d12 * d23 * c[t1])
                h = h3[t1, t2, t3]
                acc += (n3 * h[0]
                        + E2[t1, t2] * (c[t3] - d13 - d23) * h[1]
                        + E2[t1, t3] * (c[t2] - d12 - d23) * h[2]
                        + E2[t2, t3] * (c[t1] - d12 - d13) * h[4]
                        + Ch[t1, t2, t3] * h[3]
                        + Ch[t2, t1, t3] * h[5]
                        + Ch[t3, t1, t2] * h[6]
                        + Tr[t1, t2, t3] * h[7])
    total += scale ** (s + 3) * acc / 6.0
    return total


@njit(cache=True)
def _typed_batch(Ss, A, nbr_ptr, nbr, tri, g0, h1, h2, h3, scale, emax):
    out = np.empty(Ss.shape[0])
    for i in range(Ss.shape[0]):
        out[i] = _typed_kernel(Ss[i], A, nbr_ptr, nbr, tri, g0, h1, h2, h3, scale, emax)
    return out


@dataclass(frozen=True, eq=False)
class _GraphData:
    A: np.ndarray
    nbr_ptr: np.ndarray
    nbr: np.ndarray
    tri: np.ndarray


def _triangles(A: np.ndarray) -> np.ndarray:
    out = []
    n = A.shape[0]
    for u in range(n):
        nu = np.nonzero(A[u, u + 1:])[0] + u + 1
        for i, v in enumerate(nu):
            common = nu[i + 1:][A[v, nu[i + 1:]]]
            out.extend((u, v, w) for w in common)
    return np.array(out, dtype=np.int64).reshape(-1, 3)


_GRAPH_CACHE: dict[int, tuple[GraphSample, _GraphData]] = {}


def _graph_data(sample: GraphSample) -> _GraphData:
    hit = _GRAPH_CACHE.get(id(sample))
    if hit is not None and hit[0] is sample:
        return hit[1]
    A = np.ascontiguousarray(sample.adjacency)
    deg = A.sum(axis=1)
    ptr = np.concatenate([[0], np.cumsum(deg)]).astype(np.int64)
    nbr = np.nonzero(A)[1].astype(np.int64)
    data = _GraphData(A, ptr, nbr, _triangles(A))
    _GRAPH_CACHE.clear()
    _GRAPH_CACHE[id(sample)] = (sample, data)
    return data


def _typed_values(sample: GraphSample, sets: np.ndarray, k: float, emax: int) -> np.ndarray:
    sets = np.ascontiguousarray(sets, dtype=np.int64)
    s = sets.shape[1]
    g = _graph_data(sample)
    g0, h1, h2, h3 = typed_tables(sample.p, s)
    return _typed_batch(sets, g.A, g.nbr_ptr, g.nbr, g.tri, g0, h1, h2, h3,
                        k / sample.n, emax)


# --- public evaluators -----------------------------------------------------------

def _resolve_dv(S, D_V, dv_extra) -> int:
    if D_V is None:
        D_V = len(S) + (DEFAULT_DV_EXTRA if dv_extra is None else dv_extra)
    if len(S) > D_V:
        raise ValueError(f"|S| = {len(S)} exceeds D_V = {D_V}")
    return D_V


def pseudo_moment(sample: GraphSample, S, k: float, D_V: int | None = None,
                  dv_extra: int | None = None, engine: str = "auto",
                  budget: int = DEFAULT_BUDGET) -> float:
    """Ẽ[x_S] with vertex truncation ``D_V`` (default ``|S| + 3``)."""
    S = tuple(sorted(set(int(v) for v in S)))
    if any(not 0 <= v < sample.n for v in S):
        raise ValueError("vertex out of range")
    D_V = _resolve_dv(S, D_V, dv_extra)
    emax = min(D_V - len(S), sample.n - len(S))
    if engine == "auto":
        engine = "typed" if emax <= TYPED_MAX_EXTRA and len(S) <= 4 else "subsets"
    if engine == "typed":
        if emax > TYPED_MAX_EXTRA:
            raise ValueError(f"typed engine handles at most {TYPED_MAX_EXTRA} extra vertices")
        return float(_typed_values(sample, np.array([S], dtype=np.int64).reshape(1, -1),
                                   k, emax)[0])
    if engine == "subsets":
        return _pm_subsets(sample, S, k, D_V, budget)
    raise ValueError(f"unknown engine {engine!r}")


def pseudo_moment_by_components(sample: GraphSample, S, k: float,
                                D_V: int | None = None) -> float:
    """Oracle: split ``R`` into connected pieces, each anchored in ``S``.

    ``C(B)`` (sum over connected spanning ``R`` on ``B``) is built by the
    recursion anchored at the minimum vertex of ``B``; then ``c_S(W)`` sums
    ``∏ C(block)`` over partitions of ``W`` whose blocks all meet ``S``.
    """
    S = tuple(sorted(set(S)))
    n, p = sample.n, sample.p
    A = sample.adjacency
    f = 1.0 / (1.0 - p)
    D_V = n if D_V is None else D_V
    free = [v for v in range(n) if v not in S]

    @lru_cache(maxsize=None)
    def T(B: frozenset) -> float:
        for a, b in combinations(B, 2):
            if A[a, b]:
                return 0.0
        c = len(B)
        return f ** (c * (c - 1) // 2)

    @lru_cache(maxsize=None)
    def C(B: frozenset) -> float:
        if len(B) == 1:
            return 1.0
        m = min(B)
        rest = sorted(B - {m})
        val = T(B)
        for r in range(len(rest)):
            for sub in combinations(rest, r):
                B1 = frozenset((m,) + sub)
                val -= C(B1) * T(B - B1)
        return val

    def partitions(items):
        if not items:
            yield []
            return
        first, tail = items[0], items[1:]
        for part in partitions(tail):
            yield [[first]] + part
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]

    if not S:
        return 1.0
    s_parts = list(partitions(list(S)))
    scale = k / n
    total = 0.0
    for e in range(0, min(D_V - len(S), len(free)) + 1):
        for X in combinations(free, e):
            cw = 0.0
            for sp in s_parts:
                for assign in product(range(len(sp)), repeat=e):
                    blocks = [list(b) for b in sp]
                    for v, j in zip(X, assign):
                        blocks[j].append(v)
                    prod_ = 1.0
                    for b in blocks:
                        prod_ *= C(frozenset(b))
                        if prod_ == 0.0:
                            break
                    cw += prod_
            total += scale ** (len(S) + e) * cw
    return total


def pseudo_moment_bruteforce(sample: GraphSample, S, k: float, D_V: int | None = None) -> float:
    """Literal sum over every edge set ``R`` of the complete graph (tiny n)."""
    n, p = sample.n, sample.p
    if n > 6:
        raise BudgetExceeded(2 ** comb(n, 2), 2 ** 15)
    S = set(S)
    D_V = n if D_V is None else D_V
    X = sample.chi_matrix
    w = -sqrt(p / (1 - p))
    pairs = list(combinations(range(n), 2))
    total = 0.0
    for bits in range(1 << len(pairs)):
        R = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        verts = S | {v for e in R for v in e}
        if len(verts) > D_V:
            continue
        # every component of R ∪ S meets S
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for a, b in R:
            parent[find(a)] = find(b)
        roots = {find(v) for v in verts}
        if any(not any(find(s_) == r for s_ in S) for r in roots):
            continue
        term = (k / n) ** len(verts)
        for a, b in R:
            term *= w * X[a, b]
        total += term
    return total


# --- moment matrices ----------------------------------------------------------

@dataclass
class PseudoExpectation:
    n: int
    d: float
    k: float
    dsos: int
    D_V: int | None
    dv_extra: int | None
    values: dict = field(repr=False)
    sample: GraphSample | None = field(default=None, repr=False)

    def __getitem__(self, S) -> float:
        return self.values[frozenset(S)]

    def truncation(self, S) -> int:
        return _resolve_dv(tuple(S), self.D_V, self.dv_extra)


@dataclass
class MomentMatrix:
    index: list[tuple[int, ...]]
    M: np.ndarray
    pe: PseudoExpectation

    @property
    def dim(self) -> int:
        return len(self.index)

    def scaling(self) -> np.ndarray:
        sizes = np.array([len(I) for I in self.index])
        return np.sqrt(self.pe.n / self.pe.k) ** sizes

    def rescaled(self) -> np.ndarray:
        D = self.scaling()
        return D[:, None] * self.M * D[None, :]


def _sets_up_to(n: int, size: int):
    for r in range(size + 1):
        yield from combinations(range(n), r)


def pseudo_expectation(sample: GraphSample, k: float, dsos: int, D_V: int | None = None,
                       dv_extra: int | None = DEFAULT_DV_EXTRA, engine: str = "auto",
                       budget: int = DEFAULT_BUDGET) -> PseudoExpectation:
    """Ẽ[x_S] for every |S| ≤ dsos.  Pass ``D_V`` for an absolute truncation,
    otherwise ``|S| + dv_extra`` is used."""
    if dsos < 0 or dsos % 2:
        raise ValueError("dsos must be a nonnegative even integer")
    if D_V is not None:
        dv_extra = None
    n = sample.n
    count = sum(comb(n, r) for r in range(dsos + 1))
    if count > 5 * budget:
        raise BudgetExceeded(count, 5 * budget)
    values: dict[frozenset, float] = {}
    for s in range(dsos + 1):
        sets = list(combinations(range(n), s))
        dv = D_V if D_V is not None else s + dv_extra
        if dv < s:
            raise ValueError(f"D_V = {dv} below |S| = {s}")
        emax = min(dv - s, n - s)
        use_typed = engine == "typed" or (engine == "auto" and emax <= TYPED_MAX_EXTRA and s <= 4)
        if use_typed:
            arr = np.array(sets, dtype=np.int64).reshape(len(sets), s)
            vals = _typed_values(sample, arr, k, emax)
            values.update(zip(map(frozenset, sets), vals.tolist()))
        else:
            for S in sets:
                values[frozenset(S)] = _pm_subsets(sample, S, k, dv, budget)
    return PseudoExpectation(n, sample.d, k, dsos, D_V, dv_extra, values, sample)


def build_moment_matrix(sample: GraphSample, k: float, dsos: int, D_V: int | None = None,
                        dv_extra: int | None = DEFAULT_DV_EXTRA, engine: str = "auto",
                        budget: int = DEFAULT_BUDGET) -> MomentMatrix:
    half = dsos // 2
    dim = sum(comb(sample.n, r) for r in range(half + 1))
    if dim > EIG_LIMIT * 4:
        raise BudgetExceeded(dim, EIG_LIMIT * 4)
    pe = pseudo_expectation(sample, k, dsos, D_V, dv_extra, engine, budget)
    index = list(_sets_up_to(sample.n, half))
    M = np.empty((dim, dim))
    vals = pe.values
    for a, I in enumerate(index):
        for b in range(a, dim):
            v = vals[frozenset(I).union(index[b])]
            M[a, b] = v
            M[b, a] = v
    return MomentMatrix(index, M, pe)


@dataclass(frozen=True)
class ConstraintReport:
    max_violation: float
    violating_sets: int
    checked_sets: int
    normalization: float
    objective: float
    objective_ratio: float
    symmetry_defect: float

    def passed(self, tol: float = 1e-12) -> bool:
        return (self.max_violation <= tol and self.normalization == 1.0
                and self.symmetry_defect <= tol)


def check_constraints(mm: MomentMatrix, sample: GraphSample | None = None) -> ConstraintReport:
    pe = mm.pe
    sample = sample if sample is not None else pe.sample
    A = sample.adjacency
    worst, bad, checked = 0.0, 0, 0
    for S, v in pe.values.items():
        if len(S) < 2:
            continue
        if any(A[a, b] for a, b in combinations(sorted(S), 2)):
            checked += 1
            worst = max(worst, abs(v))
            bad += abs(v) > 1e-12
    obj = float(sum(pe.values[frozenset((i,))] for i in range(pe.n)))
    return ConstraintReport(worst, bad, checked, pe.values[frozenset()], obj,
                            obj / pe.k if pe.k else float("nan"),
                            float(np.abs(mm.M - mm.M.T).max()))


@dataclass(frozen=True)
class PSDResult:
    min_eigenvalue: float
    norm: float
    tol: float
    psd: bool


def psd_check(matrix, tol: float | None = None, rescale: bool = True) -> PSDResult:
    """Smallest eigenvalue of the (rescaled) moment matrix; ``tol`` defaults to 1e-8·‖M‖."""
    if isinstance(matrix, MomentMatrix):
        M = matrix.rescaled() if rescale else matrix.M
    else:
        M = np.asarray(matrix, dtype=float)
    if M.shape[0] > EIG_LIMIT:
        raise BudgetExceeded(M.shape[0], EIG_LIMIT)
    ev = np.linalg.eigvalsh((M + M.T) / 2)
    norm = float(np.abs(ev).max()) if ev.size else 0.0
    tol = 1e-8 * norm if tol is None else tol
    return PSDResult(float(ev[0]), norm, tol, bool(ev[0] >= -tol))


def truncation_delta(sample: GraphSample, k: float, i: int = 0, dv_extra: int = 3) -> float:
    """|Ẽ[x_i] at |S|+dv_extra − Ẽ[x_i] at |S|+dv_extra−1|."""
    a = pseudo_moment(sample, (i,), k, dv_extra=dv_extra)
    b = pseudo_moment(sample, (i,), k, dv_extra=dv_extra - 1)
    return abs(a - b)


# --- shapes in the moment decomposition -----------------------------------------

def is_middle_shape(shape: Shape) -> bool:
    res = validate(shape)
    if not res.ok:
        raise ValueError(f"invalid shape: {', '.join(res.violations)}")
    if len(shape.U) != len(shape.V):
        return False
    return min(len(S) for S in enumerate_separators(shape)) >= len(shape.U)


@dataclass(frozen=True)
class ShapeCoefficient:
    shape: Shape
    lambda_tilde: float
    lam: float


def coefficient(shape: Shape, n: int, k: float, d: float) -> ShapeCoefficient:
    p = d / n
    m = len(shape.edges)
    lt = (k / n) ** shape.k * (p / (1 - p)) ** (m / 2) * (-1) ** m
    lam = (n / k) ** ((len(shape.U) + len(shape.V)) / 2) * lt
    return ShapeCoefficient(shape, lt, lam)


# --- experiment row --------------------------------------------------------------

@dataclass(frozen=True)
class SosRow:
    seed: int
    model: str
    min_eig: float
    psd_tol: float
    objective: float
    objective_ratio: float
    is_constraint_pass: bool
    dim: int
    runtime: float

    @property
    def psd(self) -> bool:
        return self.min_eig >= -self.psd_tol


def run_sos(sample: GraphSample, k: float, dsos: int = 2, D_V: int | None = None,
            dv_extra: int | None = DEFAULT_DV_EXTRA) -> SosRow:
    t0 = time.perf_counter()
    mm = build_moment_matrix(sample, k, dsos, D_V, dv_extra)
    rep = check_constraints(mm, sample)
    psd = psd_check(mm)
    return SosRow(sample.seed, sample.model, psd.min_eigenvalue, psd.tol, rep.objective,
                  rep.objective_ratio, rep.passed(), mm.dim, time.perf_counter() - t0)
