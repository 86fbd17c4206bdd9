"""Graph samplers for G(n, d/n) and G_d(n), exact tiny-n enumerators, and
p-biased edge characters.

Throughout, ``p = d/n`` exactly (never ``d/(n-1)``).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb, sqrt
from typing import Callable, Iterator

import numpy as np
from numba import njit

ER = "erdos_renyi"
REG = "d_regular"
_MODEL_ALIASES = {"er": ER, ER: ER, "reg": REG, "regular": REG, REG: REG}


def canonical_model(model: str) -> str:
    try:
        return _MODEL_ALIASES[model]
    except KeyError:
        raise ValueError(f"unknown model {model!r}") from None


class InfeasibleParameters(ValueError):
    pass


@dataclass(frozen=True)
class CharacterTable:
    p: float

    @property
    def chi_present(self) -> float:
        return sqrt((1 - self.p) / self.p)

    @property
    def chi_absent(self) -> float:
        return -sqrt(self.p / (1 - self.p))


@dataclass(frozen=True, eq=False)
class GraphSample:
    n: int
    model: str
    d: float
    edges: np.ndarray  # (m, 2) int64, rows sorted with i < j
    seed: int | None = None

    @property
    def p(self) -> float:
        return self.d / self.n

    @property
    def characters(self) -> CharacterTable:
        return CharacterTable(self.p)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=bool)
        if self.m:
            A[self.edges[:, 0], self.edges[:, 1]] = True
            A[self.edges[:, 1], self.edges[:, 0]] = True
        A.setflags(write=False)
        return A

    @cached_property
    def chi_matrix(self) -> np.ndarray:
        """n×n matrix of χ({i,j}); the diagonal is 0."""
        ct = self.characters
        X = np.where(self.adjacency, ct.chi_present, ct.chi_absent)
        np.fill_diagonal(X, 0.0)
        X.setflags(write=False)
        return X

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def relabel(self, perm) -> "GraphSample":
        perm = np.asarray(perm)
        e = perm[self.edges]
        return _make(self.n, self.model, self.d, e, self.seed)

    def __repr__(self) -> str:
        return f"GraphSample(n={self.n}, model={self.model}, d={self.d}, m={self.m}, seed={self.seed})"


def _make(n, model, d, edges, seed) -> GraphSample:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    e = np.sort(e, axis=1)
    if len(e):
        e = e[np.lexsort((e[:, 1], e[:, 0]))]
    e.setflags(write=False)
    return GraphSample(n, model, d, e, seed)


def from_edges(n: int, edges, d: float, model: str = REG, seed=None) -> GraphSample:
    s = _make(n, canonical_model(model), d, edges, seed)
    if len(s.edges) and (s.edges[:, 0] == s.edges[:, 1]).any():
        raise ValueError("self-loop in edge list")
    if len({tuple(x) for x in s.edges.tolist()}) != len(s.edges):
        raise ValueError("parallel edge in edge list")
    return s


# --- characters -------------------------------------------------------------

def chi(sample: GraphSample, edge) -> float:
    i, j = edge
    if i == j:
        raise ValueError("self-loop pair has no character")
    ct = sample.characters
    return ct.chi_present if sample.adjacency[i, j] else ct.chi_absent


def chi_set(sample: GraphSample, S) -> float:
    out = 1.0
    for e in S:
        out *= chi(sample, e)
    return out


# --- samplers ---------------------------------------------------------------

def _seed_u32(seed) -> int:
    return int(np.random.SeedSequence(seed).generate_state(1)[0])


def sample_er(n: int, d: float, seed=None) -> GraphSample:
    if not 0 < d < n:
        raise InfeasibleParameters(f"need 0 < d < n, got d={d}, n={n}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < d / n
    return _make(n, ER, d, np.column_stack([iu[keep], ju[keep]]), seed)


def circulant(n: int, d: int) -> np.ndarray:
    """Edges of the circulant d-regular graph: i ~ i±1..i±⌊d/2⌋, plus the
    antipode when d is odd."""
    out = []
    for i in range(n):
        for s in range(1, d // 2 + 1):
            out.append((i, (i + s) % n))
        if d % 2:
            j = i + n // 2
            if j < n:
                out.append((i, j))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


@njit(cache=True)
def _swap_chain(edges, adj, budget, count_accepted, max_attempts, seed):
    np.random.seed(seed)
    m = edges.shape[0]
    accepted = 0
    attempts = 0
    while attempts < max_attempts:
        if count_accepted:
            if accepted >= budget:
                break
        elif attempts >= budget:
            break
        attempts += 1
        i = np.random.randint(m)
        j = np.random.randint(m)
        if i == j:
            continue
        a = edges[i, 0]
        b = edges[i, 1]
        c = edges[j, 0]
        dd = edges[j, 1]
        if np.random.random() < 0.5:
            c, dd = dd, c
        if a == c or a == dd or b == c or b == dd:
            continue
        if adj[a, c] or adj[b, dd]:
            continue
        adj[a, b] = False
        adj[b, a] = False
        adj[c, dd] = False
        adj[dd, c] = False
        adj[a, c] = True
        adj[c, a] = True
        adj[b, dd] = True
        adj[dd, b] = True
        edges[i, 0] = a
        edges[i, 1] = c
        edges[j, 0] = b
        edges[j, 1] = dd
        accepted += 1
    return accepted, attempts


def sample_regular(n: int, d: int, seed=None, swaps: int | None = None,
                   count: str = "attempts", max_attempt_factor: int = 50) -> GraphSample:
    """Approximately uniform d-regular graph via the double-edge-swap chain.

    Starts from :func:`circulant` and runs ``swaps`` swap proposals (default
    ``100·n·d``).  With ``count="attempts"`` rejected proposals are kept as
    self-loops of the chain, so the uniform law is stationary.  With
    ``count="accepted"`` the budget counts accepted moves only.
    """
    if not 0 < d < n:
        raise InfeasibleParameters(f"need 0 < d < n, got d={d}, n={n}")
    if (n * d) % 2:
        raise InfeasibleParameters(f"n·d must be even (n={n}, d={d})")
    if count not in ("attempts", "accepted"):
        raise ValueError("count must be 'attempts' or 'accepted'")
    edges = circulant(n, d)
    if d == n - 1:
        return _make(n, REG, d, edges, seed)
    if swaps is None:
        swaps = 100 * n * d
    adj = np.zeros((n, n), dtype=np.bool_)
    adj[edges[:, 0], edges[:, 1]] = True
    adj[edges[:, 1], edges[:, 0]] = True
    max_attempts = max(swaps, 1) * max_attempt_factor
    accepted, attempts = _swap_chain(edges, adj, swaps, count == "accepted", max_attempts,
                                     _seed_u32(seed))
    if count == "accepted" and accepted < swaps:
        warnings.warn(f"swap chain stopped after {attempts} attempts with "
                      f"{accepted}/{swaps} accepted swaps")
    return _make(n, REG, d, edges, seed)


def sample(model: str, n: int, d, seed=None, **kw) -> GraphSample:
    model = canonical_model(model)
    if model == ER:
        return sample_er(n, d, seed)
    return sample_regular(n, int(d), seed, **kw)


# --- exact enumerators ------------------------------------------------------

def iter_regular_edge_sets(n: int, d: int) -> Iterator[list[tuple[int, int]]]:
    """Every labeled d-regular graph on n vertices exactly once (backtracking:
    vertex v picks all its neighbours above v in one step)."""
    if (n * d) % 2 or d >= n or d < 0:
        return
    deg = [0] * n
    edges: list[tuple[int, int]] = []

    def rec(v: int):
        if v == n:
            yield list(edges)
            return
        need = d - deg[v]
        if need < 0:
            return
        cand = [w for w in range(v + 1, n) if deg[w] < d]
        if need > len(cand):
            return
        for chosen in combinations(cand, need):
            for w in chosen:
                deg[w] += 1
                edges.append((v, w))
            deg[v] += need
            yield from rec(v + 1)
            deg[v] -= need
            for w in chosen:
                deg[w] -= 1
                edges.pop()

    yield from rec(0)


def enumerate_regular(n: int, d: int) -> list[GraphSample]:
    if n > 10:
        raise InfeasibleParameters(f"exact enumeration supports n ≤ 10, got {n}")
    return [_make(n, REG, d, es, None) for es in iter_regular_edge_sets(n, d)]


def er_graph_table(n: int, p: float):
    """All 2^C(n,2) graphs as an indicator table with their G(n,p) weights.

    Returns ``(pairs, present, weights)`` where ``present[g, e]`` says whether
    pair ``pairs[e]`` is an edge of graph ``g``.
    """
    if n > 6:
        raise InfeasibleParameters(f"exact G(n,p) enumeration supports n ≤ 6, got {n}")
    pairs = list(combinations(range(n), 2))
    N = len(pairs)
    codes = np.arange(2 ** N, dtype=np.int64)
    present = ((codes[:, None] >> np.arange(N)) & 1).astype(bool)
    k = present.sum(axis=1)
    weights = p ** k * (1 - p) ** (N - k)
    return pairs, present, weights


def exact_expectation_er(n: int, p: float, statistic: Callable[[GraphSample], float]) -> float:
    pairs, present, weights = er_graph_table(n, p)
    parr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    total = 0.0
    for row, w in zip(present, weights):
        total += w * statistic(_make(n, ER, p * n, parr[row], None))
    return total


def exact_expectation_regular(n: int, d: int, statistic: Callable[[GraphSample], float]) -> float:
    graphs = enumerate_regular(n, d)
    if not graphs:
        raise InfeasibleParameters(f"no {d}-regular graphs on {n} vertices")
    return float(np.mean([statistic(g) for g in graphs]))


def edge_subsets(n: int, max_size: int) -> list[tuple[tuple[int, int], ...]]:
    pairs = list(combinations(range(n), 2))
    return [S for r in range(max_size + 1) for S in combinations(pairs, r)]


def _character_gram(n, p, present, weights, max_size):
    pairs = list(combinations(range(n), 2))
    pos = {e: i for i, e in enumerate(pairs)}
    ct = CharacterTable(p)
    vals = np.where(present, ct.chi_present, ct.chi_absent)  # graphs × pairs
    sets = edge_subsets(n, max_size)
    Phi = np.ones((len(present), len(sets)))
    for j, S in enumerate(sets):
        for e in S:
            Phi[:, j] *= vals[:, pos[e]]
    G = Phi.T @ (weights[:, None] * Phi)
    return sets, G


def er_character_gram(n: int, p: float, max_size: int = 3):
    """Exact ``E[χ_S χ_T]`` under G(n, p) for all edge sets of size ≤ max_size."""
    _, present, weights = er_graph_table(n, p)
    return _character_gram(n, p, present, weights, max_size)


def regular_character_gram(n: int, d: int, max_size: int = 3):
    """Exact ``E[χ_S χ_T]`` under uniform G_d(n), with ``p = d/n``."""
    pairs = list(combinations(range(n), 2))
    pos = {e: i for i, e in enumerate(pairs)}
    graphs = list(iter_regular_edge_sets(n, d))
    if not graphs:
        raise InfeasibleParameters(f"no {d}-regular graphs on {n} vertices")
    present = np.zeros((len(graphs), len(pairs)), dtype=bool)
    for g, es in enumerate(graphs):
        present[g, [pos[e] for e in es]] = True
    weights = np.full(len(graphs), 1.0 / len(graphs))
    return _character_gram(n, d / n, present, weights, max_size)


# --- edge-list text ---------------------------------------------------------

def to_edgelist(sample: GraphSample) -> str:
    model = "er" if sample.model == ER else "reg"
    lines = [f"{sample.n} {sample.d:g} {model} {sample.seed if sample.seed is not None else -1}"]
    lines += [f"{i} {j}" for i, j in sample.edges.tolist()]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> GraphSample:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    n, d, model, seed = rows[0]
    d = float(d)
    if d.is_integer():
        d = int(d)
    seed = int(seed)
    edges = [(int(a), int(b)) for a, b in rows[1:]]
    return from_edges(int(n), edges, d, model, None if seed < 0 else seed)


def expected_regular_marginal(n: int, d: int) -> float:
    """P[{i,j} ∈ G] under G_d(n), forced to d/(n-1) by symmetry."""
    return d / (n - 1)


def num_pairs(n: int) -> int:
    return comb(n, 2)
