"""Built-in shape corpus."""
from __future__ import annotations

from .shape_core import Shape


def identity() -> Shape:
    return Shape.build(1, [], U=(0,), V=(0,), name="identity")


def line() -> Shape:
    return Shape.build(2, [(0, 1)], U=(0,), V=(1,), name="line")


def z_shape() -> Shape:
    # a=0, b=1 | t=2 | c=3, d=4
    return Shape.build(5, [(0, 1), (1, 2), (2, 3), (3, 4)], U=(0, 1), V=(3, 4), name="z")


def floating_edge() -> Shape:
    return Shape.build(2, [(0, 1)], name="floating_edge")


def path2_scalar() -> Shape:
    # i=0, j=1 (center), k=2
    return Shape.build(3, [(0, 1), (1, 2)], name="path2")


def star3() -> Shape:
    return Shape.build(4, [(0, 1), (0, 2), (0, 3)], U=(0,), V=(0,), name="star3")


def triangle_middle() -> Shape:
    return Shape.build(3, [(0, 1), (0, 2), (1, 2)], U=(0,), V=(1,), name="triangle_middle")


def floating_triangle() -> Shape:
    # boundary edge u-v plus a triangle touching neither boundary
    return Shape.build(5, [(0, 1), (2, 3), (2, 4), (3, 4)], U=(0,), V=(1,),
                       name="floating_triangle")


def isolated_middle() -> Shape:
    return Shape.build(3, [(0, 1)], U=(0,), V=(1,), name="isolated_middle")


def line_with_floating_edge() -> Shape:
    # M[i,j] = χ({i,j}) · Σ_{a≠b, {a,b}∩{i,j}=∅} χ({a,b})
    return Shape.build(4, [(0, 1), (2, 3)], U=(0,), V=(1,), name="line_floating_edge")


def path_uwv() -> Shape:
    return Shape.build(3, [(0, 2), (2, 1)], U=(0,), V=(1,), name="path_uwv")


_BUILDERS = {
    "identity": identity,
    "line": line,
    "z": z_shape,
    "floating_edge": floating_edge,
    "path2": path2_scalar,
    "star3": star3,
    "triangle_middle": triangle_middle,
    "floating_triangle": floating_triangle,
    "isolated_middle": isolated_middle,
    "line_floating_edge": line_with_floating_edge,
    "path_uwv": path_uwv,
}


def corpus() -> list[Shape]:
    return [b() for b in _BUILDERS.values()]


def get(name: str) -> Shape:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown corpus shape {name!r}; known: {sorted(_BUILDERS)}") from None


def names() -> list[str]:
    return list(_BUILDERS)
