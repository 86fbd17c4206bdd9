"""Graph matrices M_τ of a shape over a graph sample.

Rows/columns are ordered duplicate-free tuples.  Two evaluation routes:

* ``entry`` walks injective labelings of the middle vertices directly
  (backtracking); it is the literal definition and is used as an oracle.
* ``build`` / ``matvec`` use Möbius inversion over set partitions of the
  shape's vertices: the injective sum equals Σ_π μ(π)·(unrestricted sum over
  the quotient shape), and every unrestricted sum is one ``np.einsum``
  contraction of χ-matrices.  Quotients with an edge inside a block vanish
  because χ has zero diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import factorial, perm

import numpy as np
from numpy.lib.stride_tricks import as_strided
from scipy.sparse.linalg import LinearOperator

from .graph_models import GraphSample
from .shape_core import Shape, transpose, validate

DEFAULT_MEMORY_BUDGET = 25_000_000  # float64 entries
MAX_PARTITION_VERTICES = 8


class MemoryBudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class TupleIndex:
    arity: int
    n: int

    @property
    def size(self) -> int:
        return perm(self.n, self.arity)

    def encode(self, tup) -> int:
        tup = tuple(int(x) for x in tup)
        if len(tup) != self.arity or len(set(tup)) != self.arity:
            raise ValueError(f"not a duplicate-free tuple of arity {self.arity}: {tup}")
        if any(not 0 <= x < self.n for x in tup):
            raise ValueError(f"label out of range [0,{self.n}): {tup}")
        idx = 0
        used: list[int] = []
        for pos, x in enumerate(tup):
            smaller = x - sum(1 for u in used if u < x)
            idx += smaller * perm(self.n - pos - 1, self.arity - pos - 1)
            used.append(x)
        return idx

    def decode(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < self.size:
            raise ValueError(f"index {idx} out of range")
        avail = list(range(self.n))
        out = []
        for pos in range(self.arity):
            block = perm(self.n - pos - 1, self.arity - pos - 1)
            q, idx = divmod(idx, block)
            out.append(avail.pop(q))
        return tuple(out)

    def tuples(self) -> np.ndarray:
        """All tuples in index order, shape (size, arity)."""
        if self.arity == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices((self.n,) * self.arity).reshape(self.arity, -1).T
        ok = np.ones(len(grids), dtype=bool)
        for a in range(self.arity):
            for b in range(a + 1, self.arity):
                ok &= grids[:, a] != grids[:, b]
        return grids[ok]

    def flat_positions(self) -> np.ndarray:
        """Position of each tuple inside the dense n^arity tensor."""
        t = self.tuples()
        if self.arity == 0:
            return np.zeros(1, dtype=np.int64)
        return np.ravel_multi_index(tuple(t.T), (self.n,) * self.arity)


# --- partition plans --------------------------------------------------------

def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@dataclass
class _Term:
    coef: float
    factors: list  # (block_a, block_b, multiplicity)
    nblocks: int
    block_of: dict


def _partition_terms(shape: Shape) -> list[_Term]:
    if shape.k > MAX_PARTITION_VERTICES:
        raise MemoryBudgetExceeded(
            f"partition expansion supports ≤ {MAX_PARTITION_VERTICES} shape vertices")
    terms = []
    for part in _set_partitions(list(shape.vertices)):
        block_of = {v: b for b, blk in enumerate(part) for v in blk}
        if len({block_of[u] for u in shape.U}) < len(shape.U):
            continue
        if len({block_of[v] for v in shape.V}) < len(shape.V):
            continue
        if any(block_of[a] == block_of[b] for a, b in shape.edges):
            continue
        coef = 1.0
        for blk in part:
            coef *= (-1) ** (len(blk) - 1) * factorial(len(blk) - 1)
        mult: dict[tuple[int, int], int] = {}
        for a, b in shape.edges:
            key = tuple(sorted((block_of[a], block_of[b])))
            mult[key] = mult.get(key, 0) + 1
        factors = [(a, b, m) for (a, b), m in sorted(mult.items())]
        terms.append(_Term(coef, factors, len(part), block_of))
    return terms


def _powers(sample: GraphSample, terms: list[_Term]) -> dict[int, np.ndarray]:
    X = sample.chi_matrix
    ms = {m for t in terms for (_, _, m) in t.factors}
    return {m: (X if m == 1 else X ** m) for m in ms}


def _operands(term: _Term, P, ones, extra_ids=()):
    ops = []
    present = set()
    for a, b, m in term.factors:
        ops += [P[m], [a, b]]
        present |= {a, b}
    for bid in extra_ids:
        if bid not in present:
            ops += [ones, [bid]]
            present.add(bid)
    return ops, present


def _reduce_lonely(ops, out):
    """Sum away indices owned by a single operand before contracting.

    ``np.einsum`` path search never does this on its own, which turns
    e.g. ``ab,bc,bc->cb`` into an O(n^3) product instead of O(n^2).
    """
    subs = [list(s) for s in ops[1::2]]
    count: dict[int, int] = {}
    for s in subs:
        for i in set(s):
            count[i] = count.get(i, 0) + 1
    keep_out = set(out)
    new = []
    for arr, s in zip(ops[0::2], subs):
        keep = [i for i in s if count[i] > 1 or i in keep_out]
        if len(keep) < len(s):
            arr = np.einsum(arr, s, keep)
        new += [arr, keep]
    return new


def _contract(ops, out, cache=None, key=None):
    ops = _reduce_lonely(ops, out)
    if cache is None:
        return np.einsum(*ops, out, optimize="greedy")
    if key not in cache:
        cache[key] = np.einsum_path(*ops, out, optimize="greedy")[0]
    return np.einsum(*ops, out, optimize=cache[key])


@dataclass(eq=False)
class MaterializedMatrix:
    shape: Shape
    sample: GraphSample
    row_index: TupleIndex
    col_index: TupleIndex
    mode: str
    dense: np.ndarray | None = None
    _terms: list = field(default=None, repr=False)
    _tterms: list = field(default=None, repr=False)
    _paths: dict = field(default_factory=dict, repr=False)

    @property
    def dims(self) -> tuple[int, int]:
        return self.row_index.size, self.col_index.size

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return matvec(self, v)

    def rmatvec(self, v: np.ndarray) -> np.ndarray:
        return matvec(self, v, transposed=True)

    def to_dense(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense
        return _dense_from_terms(self.shape, self.sample, self._terms)

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator(self.dims, matvec=self.matvec, rmatvec=self.rmatvec,
                              dtype=np.float64)


def _dense_from_terms(shape: Shape, sample: GraphSample, terms) -> np.ndarray:
    n = sample.n
    a, b = len(shape.U), len(shape.V)
    full = np.zeros((n,) * (a + b))
    P = _powers(sample, terms)
    ones = np.ones(n)
    for t in terms:
        out_ids = [t.block_of[u] for u in shape.U] + [t.block_of[v] for v in shape.V]
        uniq = list(dict.fromkeys(out_ids))
        ops, present = _operands(t, P, ones, uniq)
        free = t.nblocks - len(present)
        scale = t.coef * float(n) ** free
        T = _contract(ops, uniq) if ops else np.array(1.0)
        strides = [sum(full.strides[ax] for ax, o in enumerate(out_ids) if o == u) for u in uniq]
        view = as_strided(full, shape=(n,) * len(uniq), strides=strides, writeable=True)
        view += scale * T
    rows = TupleIndex(a, n).flat_positions()
    cols = TupleIndex(b, n).flat_positions()
    full2 = full.reshape(n ** a, n ** b)
    return full2[np.ix_(rows, cols)]


def build(shape: Shape, sample: GraphSample, mode: str = "explicit",
          memory_budget: int = DEFAULT_MEMORY_BUDGET) -> MaterializedMatrix:
    res = validate(shape)
    if not res.ok:
        raise ValueError(f"invalid shape: {', '.join(res.violations)}")
    if mode not in ("explicit", "implicit"):
        raise ValueError("mode must be 'explicit' or 'implicit'")
    n = sample.n
    ri, ci = TupleIndex(len(shape.U), n), TupleIndex(len(shape.V), n)
    terms = _partition_terms(shape)
    mm = MaterializedMatrix(shape, sample, ri, ci, mode, None, terms,
                            _partition_terms(transpose(shape)))
    if mode == "explicit":
        if n ** (len(shape.U) + len(shape.V)) > memory_budget:
            raise MemoryBudgetExceeded(
                f"dense {ri.size}×{ci.size} exceeds budget {memory_budget}; use mode='implicit'")
        mm.dense = _dense_from_terms(shape, sample, terms)
    return mm


def _term_plan(shape: Shape, sample: GraphSample, terms, idx, P, ones):
    """Scale, constant operands and boundary ids of one term.

    The vector-independent factors are contracted once when the result
    keeps at most two indices.
    """
    t = terms[idx]
    out_ids = [t.block_of[u] for u in shape.U]
    in_ids = [t.block_of[x] for x in shape.V]
    ops, present = _operands(t, P, ones)
    present |= set(in_ids)
    for bid in out_ids:
        if bid not in present:
            ops += [ones, [bid]]
            present.add(bid)
    scale = t.coef * float(sample.n) ** (t.nblocks - len(present))
    if ops:
        linked = set(out_ids) | set(in_ids)
        kept = sorted({i for s in ops[1::2] for i in s} & linked)
        if len(kept) <= 2:
            ops = [_contract(ops, kept), kept]
    return scale, ops, out_ids, in_ids


@lru_cache(maxsize=16)
def _positions(arity: int, n: int) -> np.ndarray:
    return TupleIndex(arity, n).flat_positions()


def _implicit_matvec(shape: Shape, sample: GraphSample, terms, v, cache) -> np.ndarray:
    n = sample.n
    a, b = len(shape.U), len(shape.V)
    vt = np.zeros(n ** b)
    vt[_positions(b, n)] = v
    vt = vt.reshape((n,) * b)
    out = np.zeros((n,) * a)
    P = ones = None
    for idx in range(len(terms)):
        key = (id(terms), idx)
        if key not in cache:
            if P is None:
                P, ones = _powers(sample, terms), np.ones(n)
            cache[key] = _term_plan(shape, sample, terms, idx, P, ones)
        scale, ops, out_ids, in_ids = cache[key]
        out += scale * _contract(ops + [vt, in_ids], out_ids, cache, key + ("path",))
    return out.reshape(-1)[_positions(a, n)]


def matvec(matrix: MaterializedMatrix, v: np.ndarray, transposed: bool = False) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim == 2 and v.shape[1] == 1:
        v = v[:, 0]
    rows, cols = matrix.dims
    expect = rows if transposed else cols
    if v.shape != (expect,):
        raise ValueError(f"vector length {v.shape} does not match dimension {expect}")
    if matrix.dense is not None:
        return matrix.dense.T @ v if transposed else matrix.dense @ v
    if transposed:
        return _implicit_matvec(transpose(matrix.shape), matrix.sample, matrix._tterms, v,
                                matrix._paths)
    return _implicit_matvec(matrix.shape, matrix.sample, matrix._terms, v, matrix._paths)


# --- literal route ------------------------------------------------------------

def _boundary_assignment(shape: Shape, row, col):
    row, col = tuple(int(x) for x in row), tuple(int(x) for x in col)
    if len(row) != len(shape.U) or len(col) != len(shape.V):
        raise ValueError("tuple arity does not match the shape boundary")
    if len(set(row)) != len(row) or len(set(col)) != len(col):
        raise ValueError("row/column tuples must be duplicate-free")
    psi: dict[int, int] = {}
    for vert, lab in list(zip(shape.U, row)) + list(zip(shape.V, col)):
        if psi.get(vert, lab) != lab:
            return None
        psi[vert] = lab
    if len(set(psi.values())) != len(psi):
        return None
    return psi


def _embeddings(shape: Shape, n: int, psi: dict[int, int]):
    middle = [v for v in shape.vertices if v not in psi]
    used = set(psi.values())
    free = [x for x in range(n) if x not in used]
    for labs in permutations(free, len(middle)):
        full = dict(psi)
        full.update(zip(middle, labs))
        yield full


def entry(matrix: MaterializedMatrix, row, col) -> float:
    shape, sample = matrix.shape, matrix.sample
    if any(not 0 <= x < sample.n for x in tuple(row) + tuple(col)):
        raise ValueError("label out of range")
    psi = _boundary_assignment(shape, row, col)
    if psi is None:
        return 0.0
    X = sample.chi_matrix
    total = 0.0
    for full in _embeddings(shape, sample.n, psi):
        prod = 1.0
        for a, b in shape.edges:
            prod *= X[full[a], full[b]]
        total += prod
    return total


def embedding_count(matrix: MaterializedMatrix, row, col) -> int:
    """Number of injective labelings summed into one entry."""
    psi = _boundary_assignment(matrix.shape, row, col)
    if psi is None:
        return 0
    return sum(1 for _ in _embeddings(matrix.shape, matrix.sample.n, psi))
