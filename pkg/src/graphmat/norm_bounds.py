"""Predicted norm bounds for graph matrices.

Two independent routes:

* :func:`closed_form_bound` maximizes a product of factors over all vertex
  separators of the shape.
* :func:`block_value` / :func:`block_value_sum` evaluate the step-labeling
  bookkeeping (vertex costs times edge values) for every labeling.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from math import ceil, log, log2, sqrt

from .shape_core import (EnumerationInfeasible, Shape, component_report_relative,
                         enumerate_separators, validate)

MAX_LABELED_EDGES = 12


class UnsupportedShape(ValueError):
    pass


class Step(str, enum.Enum):
    F = "F"
    S = "S"
    R = "R"
    H = "H"
    SINGLETON = "Singleton"


class VertexKind(str, enum.Enum):
    FIRST_AND_LAST_SAME_BLOCK = "first_and_last_same_block"
    FIRST_OR_LAST = "first_or_last"
    MIDDLE = "middle"


@dataclass(frozen=True)
class BoundParams:
    n: int
    d: float
    q: int
    q_tau: int
    c_norm: float = 1.0
    epsilon: float = 0.0
    warnings: tuple[str, ...] = ()

    @property
    def p(self) -> float:
        return self.d / self.n

    @classmethod
    def for_shape(cls, shape: Shape, n: int, d: float, q: int | None = None,
                  c_norm: float = 1.0, epsilon: float = 0.0) -> "BoundParams":
        if not 0 < d < n:
            raise ValueError(f"need 0 < d < n, got d={d}, n={n}")
        if q is None:
            q = default_q(shape, n)
        if q < 1:
            raise ValueError("q must be positive")
        warn = []
        if q < max(1, len(shape.U)) * log(n):
            warn.append("q below |U|·log n")
        if q >= d ** 0.1:
            warn.append("q not below d^(1/10)")
        return cls(n, d, q, 2 * q * shape.k, c_norm, epsilon, tuple(warn))

    @property
    def in_regime(self) -> bool:
        return not self.warnings


def default_q(shape: Shape, n: int) -> int:
    return ceil(log2(n)) * max(1, len(shape.U))


@dataclass(frozen=True)
class SeparatorTerm:
    separator: frozenset[int]
    vertex_factor: float
    edge_factor: float
    isolated_factor: float
    float_factor: float
    norm_factor: float

    @property
    def value(self) -> float:
        return (self.vertex_factor * self.edge_factor * self.isolated_factor
                * self.float_factor * self.norm_factor)


@dataclass(frozen=True)
class NormBoundReport:
    value: float
    maximizing_separator: frozenset[int]
    factor_breakdown: SeparatorTerm
    terms: tuple[SeparatorTerm, ...]
    theorem: str
    per_labeling: tuple | None = field(default=None, repr=False)

    def as_text(self) -> str:
        fb = self.factor_breakdown
        lines = [
            f"theorem: {self.theorem}",
            f"value: {self.value:.12g}",
            f"maximizing_separator: {sorted(self.maximizing_separator)}",
            f"vertex_factor: {fb.vertex_factor:.12g}",
            f"edge_factor: {fb.edge_factor:.12g}",
            f"isolated_factor: {fb.isolated_factor:.12g}",
            f"float_factor: {fb.float_factor:.12g}",
            f"norm_factor: {fb.norm_factor:.12g}",
            f"separators_evaluated: {len(self.terms)}",
        ]
        return "\n".join(lines)


def _require_simple(shape: Shape) -> None:
    res = validate(shape)
    if not res.ok:
        raise ValueError(f"invalid shape: {', '.join(res.violations)}")
    if not shape.is_simple():
        raise UnsupportedShape("closed-form bound needs multiplicity-1 edges")


def separator_term(shape: Shape, S, params: BoundParams, with_float: bool = True) -> SeparatorTerm:
    S = frozenset(S)
    n, p = params.n, params.p
    outside = sum(1 for v in shape.vertices if v not in S)
    inside_edges = sum(1 for a, b in shape.edges if a in S and b in S)
    rep = component_report_relative(shape, S)
    flt = 1.0
    if with_float:
        floating_trees = sum(f and t for f, t in zip(rep.floating_flags, rep.tree_flags))
        flt = sqrt(n) ** floating_trees
    return SeparatorTerm(
        S,
        (sqrt(n) * params.q) ** outside,
        ((1 - p) / p) ** (inside_edges / 2),
        sqrt(n) ** len(rep.isolated_vertices),
        flt,
        params.c_norm ** len(shape.edges),
    )


def closed_form_bound(shape: Shape, params: BoundParams, theorem: str = "full",
                      per_labeling: bool = False) -> NormBoundReport:
    """Maximize the factor product over every separator of ``shape``.

    ``theorem="user"`` drops the floating-tree factor.
    """
    if theorem not in ("full", "user"):
        raise ValueError("theorem must be 'full' or 'user'")
    _require_simple(shape)
    terms = tuple(separator_term(shape, S, params, theorem == "full")
                  for S in enumerate_separators(shape))
    best = max(terms, key=lambda t: t.value)  # first maximizer in (size, lex) order
    table = None
    if per_labeling:
        table = tuple((lab, block_value(shape, lab, params)) for lab in iter_labelings(shape))
    return NormBoundReport(best.value, best.separator, best, terms, theorem, table)


# --- step labelings ---------------------------------------------------------

def step_value(label: Step | str, params: BoundParams) -> float:
    label = Step(label)
    if label is Step.SINGLETON:
        return sqrt(1 / params.n)
    if label in (Step.F, Step.R):
        return 1.0
    if label is Step.S:
        return (2 * params.q) ** 2
    p = params.p
    return sqrt((1 - p) / p)


def vertex_cost(kind: VertexKind | str, params: BoundParams) -> float:
    kind = VertexKind(kind)
    if kind is VertexKind.FIRST_AND_LAST_SAME_BLOCK:
        return float(params.n)
    if kind is VertexKind.FIRST_OR_LAST:
        return sqrt(params.n) * params.q_tau
    return float(params.q_tau)


def _as_labels(shape: Shape, labeling) -> tuple[Step, ...]:
    labs = tuple(Step(x) for x in labeling)
    if len(labs) != len(shape.edges):
        raise ValueError(f"labeling has {len(labs)} labels for {len(shape.edges)} edges")
    return labs


def build_separator_from_labeling(shape: Shape, labeling) -> frozenset[int]:
    labs = _as_labels(shape, labeling)
    inc: dict[int, set[Step]] = {v: set() for v in shape.vertices}
    for (a, b), lab in zip(shape.edges, labs):
        inc[a].add(lab)
        inc[b].add(lab)
    U, V = set(shape.U), set(shape.V)
    out = set(shape.shared)
    for v, ls in inc.items():
        if Step.H in ls or Step.S in ls:
            out.add(v)
        elif Step.F in ls and Step.R in ls:
            out.add(v)
        elif v in U and Step.F in ls:
            out.add(v)
        elif v in V and Step.R in ls:
            out.add(v)
    return frozenset(out)


def vertex_kinds(shape: Shape, labeling) -> dict[int, VertexKind | None]:
    """Per-vertex appearance kind inside one block; ``None`` marks U∩V (free)."""
    labs = _as_labels(shape, labeling)
    sb = build_separator_from_labeling(shape, labs)
    inc: dict[int, set[Step]] = {v: set() for v in shape.vertices}
    for (a, b), lab in zip(shape.edges, labs):
        inc[a].add(lab)
        inc[b].add(lab)
    boundary, shared = shape.boundary, shape.shared
    kinds: dict[int, VertexKind | None] = {}
    for v in shape.vertices:
        if v in shared:
            kinds[v] = None
        elif v not in boundary and inc[v] <= {Step.SINGLETON}:
            # isolated middle vertices land here too
            kinds[v] = VertexKind.FIRST_AND_LAST_SAME_BLOCK
        elif v in sb:
            kinds[v] = VertexKind.MIDDLE
        else:
            kinds[v] = VertexKind.FIRST_OR_LAST
    return kinds


def block_value(shape: Shape, labeling, params: BoundParams) -> float:
    labs = _as_labels(shape, labeling)
    val = 1.0
    for kind in vertex_kinds(shape, labs).values():
        if kind is not None:
            val *= vertex_cost(kind, params)
    for lab in labs:
        val *= step_value(lab, params)
    return val


def iter_labelings(shape: Shape, alphabet=tuple(Step)):
    if len(shape.edges) > MAX_LABELED_EDGES:
        raise EnumerationInfeasible(
            f"{len(alphabet)}^{len(shape.edges)} labelings exceeds the cap of "
            f"{MAX_LABELED_EDGES} edges")
    return product(alphabet, repeat=len(shape.edges))


def block_value_sum(shape: Shape, params: BoundParams) -> float:
    return sum(block_value(shape, lab, params) for lab in iter_labelings(shape))


def dominance_slack(shape: Shape, params: BoundParams) -> float:
    """Fixed poly(q_tau) slack allowed between a labeling and the best separator."""
    return float(params.q_tau) ** (2 * shape.k + len(shape.edges))


# --- walk values ------------------------------------------------------------

@dataclass(frozen=True)
class WalkSummary:
    num_surprise: int = 0
    num_singleton_edges: int = 0
    num_nonsingleton_edges: int = 0
    total_multiplicity: int = 0

    def __post_init__(self):
        if min(self.num_surprise, self.num_singleton_edges, self.num_nonsingleton_edges,
               self.total_multiplicity) < 0:
            raise ValueError("walk counts must be nonnegative")


def walk_value_bound(walk: WalkSummary, params: BoundParams, scaled: bool = False) -> float:
    p = params.p
    pq = p * (1 - p)
    val = ((2 + params.epsilon) * (2 * params.q) ** (2 * walk.num_surprise)
           * (pq / params.n) ** (walk.num_singleton_edges / 2)
           * pq ** walk.num_nonsingleton_edges)
    if scaled:
        val *= (1 / pq) ** (walk.total_multiplicity / 2)
    return val
