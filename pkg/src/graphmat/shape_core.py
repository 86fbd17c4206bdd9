"""Shapes: small multigraphs with ordered left/right boundary tuples.

Vertex ids are dense integers ``0..k-1``.  Everything here is purely
combinatorial and exhaustive; shapes are capped at ``MAX_VERTICES`` so the
``2^|V|`` separator sweep and the automorphism search stay cheap.
"""
from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from math import factorial
from typing import Iterable, Sequence

MAX_VERTICES = 12


class EnumerationInfeasible(ValueError):
    """Raised when an exhaustive enumeration would exceed its configured cap."""


@dataclass(frozen=True)
class Shape:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    U: tuple[int, ...]
    V: tuple[int, ...]
    name: str = field(default="", compare=False)

    @classmethod
    def build(cls, k: int, edges: Iterable[Sequence[int]], U: Sequence[int] = (),
              V: Sequence[int] = (), name: str = "") -> "Shape":
        es = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        return cls(tuple(range(k)), es, tuple(U), tuple(V), name)

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def boundary(self) -> frozenset[int]:
        return frozenset(self.U) | frozenset(self.V)

    @property
    def middle(self) -> tuple[int, ...]:
        b = self.boundary
        return tuple(v for v in self.vertices if v not in b)

    @property
    def shared(self) -> frozenset[int]:
        """U ∩ V, decided by vertex id."""
        return frozenset(self.U) & frozenset(self.V)

    def multiplicities(self) -> Counter:
        return Counter(self.edges)

    def is_simple(self) -> bool:
        return all(m == 1 for m in self.multiplicities().values())

    def neighbors(self) -> dict[int, set[int]]:
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            if a != b:
                nb[a].add(b)
                nb[b].add(a)
        return nb

    def __str__(self) -> str:
        label = self.name or "shape"
        return f"{label}(k={self.k}, E={list(self.edges)}, U={self.U}, V={self.V})"


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(shape: Shape, cap: int = MAX_VERTICES) -> ValidationResult:
    out = []
    vs = set(shape.vertices)
    if len(vs) != len(shape.vertices):
        out.append("duplicate vertex id")
    for side, tup in (("U", shape.U), ("V", shape.V)):
        if any(v not in vs for v in tup):
            out.append(f"boundary id unknown ({side})")
        if len(set(tup)) != len(tup):
            out.append(f"duplicate boundary id ({side})")
    for a, b in shape.edges:
        if a not in vs or b not in vs:
            out.append(f"edge endpoint unknown ({a},{b})")
        if a == b:
            out.append(f"self-loop ({a},{a})")
    if len(shape.vertices) > cap:
        out.append(f"too many vertices ({len(shape.vertices)} > {cap})")
    return ValidationResult(tuple(out))


def _require_valid(shape: Shape) -> None:
    res = validate(shape)
    if not res.ok:
        raise ValueError(f"invalid shape: {', '.join(res.violations)}")


def transpose(shape: Shape) -> Shape:
    name = f"{shape.name}^T" if shape.name else ""
    return Shape(shape.vertices, shape.edges, shape.V, shape.U, name)


def _reaches(nb: dict[int, set[int]], sources: Iterable[int], targets: set[int],
             blocked: frozenset[int]) -> bool:
    start = [s for s in sources if s not in blocked]
    seen = set(start)
    queue = deque(start)
    while queue:
        v = queue.popleft()
        if v in targets:
            return True
        for w in nb[v]:
            if w not in blocked and w not in seen:
                seen.add(w)
                queue.append(w)
    return False


def is_separator(shape: Shape, S: Iterable[int]) -> bool:
    """True iff every U→V path (including the trivial one through U∩V) meets ``S``."""
    blocked = frozenset(S)
    return not _reaches(shape.neighbors(), shape.U, set(shape.V), blocked)


def enumerate_separators(shape: Shape) -> list[frozenset[int]]:
    _require_valid(shape)
    nb = shape.neighbors()
    targets = set(shape.V)
    found = []
    for r in range(shape.k + 1):
        for S in combinations(shape.vertices, r):
            fs = frozenset(S)
            if not _reaches(nb, shape.U, targets, fs):
                found.append(fs)
    found.sort(key=lambda s: (len(s), sorted(s)))
    return found


@dataclass(frozen=True)
class ComponentReport:
    edge_components: tuple[frozenset[int], ...]
    floating_flags: tuple[bool, ...]
    tree_flags: tuple[bool, ...]
    multi_edge_flags: tuple[bool, ...]
    isolated_vertices: frozenset[int]

    def floating_tree_count(self) -> int:
        return sum(f and t for f, t in zip(self.floating_flags, self.tree_flags))


def _edge_components(shape: Shape) -> list[frozenset[int]]:
    nb = shape.neighbors()
    touched = sorted({v for e in shape.edges for v in e})
    seen: set[int] = set()
    comps = []
    for v in touched:
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for w in nb[x]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def component_report(shape: Shape) -> ComponentReport:
    return component_report_relative(shape, ())


def component_report_relative(shape: Shape, S: Iterable[int]) -> ComponentReport:
    """Like :func:`component_report`, but a component also stops floating
    when it contains a vertex of ``S``."""
    _require_valid(shape)
    anchors = shape.boundary | frozenset(S)
    simple = set(shape.edges)
    mult = shape.multiplicities()
    comps = _edge_components(shape)
    floating, tree, multi = [], [], []
    for c in comps:
        floating.append(not (c & anchors))
        ne = sum(1 for a, b in simple if a in c)
        tree.append(len(c) == ne + 1)
        multi.append(any(mult[e] > 1 for e in simple if e[0] in c))
    touched = {v for e in shape.edges for v in e}
    isolated = frozenset(v for v in shape.middle if v not in touched)
    return ComponentReport(tuple(comps), tuple(floating), tuple(tree), tuple(multi), isolated)


def automorphism_count(shape: Shape, cap: int = MAX_VERTICES) -> int:
    """Permutations fixing U and V pointwise and preserving the edge multiset."""
    _require_valid(shape)
    if shape.k > cap:
        raise EnumerationInfeasible(f"{shape.k} vertices exceeds cap {cap}")
    mult = shape.multiplicities()
    middle = shape.middle
    fixed = {v: v for v in shape.boundary}
    adj_mult = {}
    for (a, b), m in mult.items():
        adj_mult[(a, b)] = m
        adj_mult[(b, a)] = m

    def m_of(a, b):
        return adj_mult.get((a, b), 0)

    count = 0
    order = list(middle)

    def extend(i: int, phi: dict[int, int], used: set[int]) -> None:
        nonlocal count
        if i == len(order):
            count += 1
            return
        v = order[i]
        for w in order:
            if w in used:
                continue
            ok = True
            for x, y in phi.items():
                if m_of(v, x) != m_of(w, y):
                    ok = False
                    break
            if ok and m_of(v, v) == m_of(w, w):
                phi[v] = w
                used.add(w)
                extend(i + 1, phi, used)
                del phi[v]
                used.discard(w)

    extend(0, dict(fixed), set())
    return count


def middle_factorial(shape: Shape) -> int:
    return factorial(len(shape.middle))


# --- structured text -----------------------------------------------------

def to_text(shape: Shape) -> str:
    """Canonical JSON record: ``vertices``, ``edges``, ``U``, ``V`` (+ ``name``)."""
    rec = {
        "vertices": shape.k,
        "edges": [list(e) for e in sorted(shape.edges)],
        "U": list(shape.U),
        "V": list(shape.V),
    }
    if shape.name:
        rec["name"] = shape.name
    return json.dumps(rec, sort_keys=True, separators=(", ", ": "))


def from_text(text: str) -> Shape:
    rec = json.loads(text)
    missing = {"vertices", "edges", "U", "V"} - set(rec)
    if missing:
        raise ValueError(f"shape record missing fields: {sorted(missing)}")
    k = rec["vertices"]
    if not isinstance(k, int) or k < 0:
        raise ValueError("'vertices' must be a nonnegative integer count")
    return Shape.build(k, rec["edges"], rec["U"], rec["V"], rec.get("name", ""))


def load(path) -> Shape:
    with open(path) as fh:
        return from_text(fh.read())


def save(shape: Shape, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_text(shape) + "\n")
