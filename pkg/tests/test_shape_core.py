from math import factorial

import pytest
from hypothesis import given

from graphmat import corpus
from graphmat.shape_core import (EnumerationInfeasible, Shape, automorphism_count,
                                 component_report, component_report_relative,
                                 enumerate_separators, from_text, is_separator, load, save,
                                 to_text, transpose, validate)
from strategies import shapes


def fs(*xs):
    return frozenset(xs)


class TestValidate:
    def test_line_ok(self):
        assert validate(corpus.line()).ok

    def test_unknown_boundary(self):
        bad = Shape((0, 1), ((0, 1),), (7,), (1,))
        assert any("boundary id unknown" in v for v in validate(bad).violations)

    def test_self_loop(self):
        bad = Shape((0, 1), ((0, 0),), (0,), (1,))
        assert any("self-loop" in v for v in validate(bad).violations)

    def test_cap(self):
        big = Shape.build(13, [], (0,), (0,))
        assert not validate(big).ok
        assert validate(big, cap=13).ok

    def test_duplicate_boundary(self):
        bad = Shape((0, 1), (), (0, 0), ())
        assert any("duplicate boundary" in v for v in validate(bad).violations)


class TestTranspose:
    def test_line(self):
        t = transpose(corpus.line())
        assert (t.U, t.V) == ((1,), (0,))
        assert t.edges == corpus.line().edges

    def test_z(self):
        t = transpose(corpus.z_shape())
        assert (t.U, t.V) == ((3, 4), (0, 1))

    @given(shapes())
    def test_involution(self, s):
        assert transpose(transpose(s)) == s


class TestSeparators:
    def test_line(self):
        assert enumerate_separators(corpus.line()) == [fs(0), fs(1), fs(0, 1)]

    def test_edge_free_shared(self):
        s = Shape.build(3, [], (0,), (0,))
        assert enumerate_separators(s) == [fs(0), fs(0, 1), fs(0, 2), fs(0, 1, 2)]

    def test_scalar_edge(self):
        assert enumerate_separators(corpus.floating_edge()) == [fs(), fs(0), fs(1), fs(0, 1)]

    def test_sorted_by_size_then_lex(self):
        seps = enumerate_separators(corpus.z_shape())
        keys = [(len(s), sorted(s)) for s in seps]
        assert keys == sorted(keys)

    @given(shapes())
    def test_empty_iff_no_path(self, s):
        seps = enumerate_separators(s)
        assert (fs() in seps) == is_separator(s, ())

    @given(shapes())
    def test_transpose_invariant(self, s):
        assert set(enumerate_separators(s)) == set(enumerate_separators(transpose(s)))

    @given(shapes())
    def test_upward_closed(self, s):
        seps = set(enumerate_separators(s))
        for S in seps:
            for v in s.vertices:
                assert S | {v} in seps


class TestComponents:
    def test_floating_edge_on_line(self):
        rep = component_report(corpus.line_with_floating_edge())
        idx = rep.edge_components.index(fs(2, 3))
        assert rep.floating_flags[idx] and rep.tree_flags[idx]
        other = rep.edge_components.index(fs(0, 1))
        assert not rep.floating_flags[other]

    def test_isolated_middle(self):
        rep = component_report(corpus.isolated_middle())
        assert rep.isolated_vertices == fs(2)
        assert all(2 not in c for c in rep.edge_components)

    def test_floating_triangle(self):
        rep = component_report(corpus.floating_triangle())
        idx = rep.edge_components.index(fs(2, 3, 4))
        assert rep.floating_flags[idx] and not rep.tree_flags[idx]

    def test_relative_to_separator(self):
        s = corpus.floating_edge()
        assert component_report_relative(s, ()).floating_tree_count() == 1
        assert component_report_relative(s, (0,)).floating_tree_count() == 0

    def test_multi_edge_flag(self):
        s = Shape.build(2, [(0, 1), (0, 1)], (0,), (1,))
        rep = component_report(s)
        assert rep.multi_edge_flags == (True,)
        assert rep.tree_flags == (True,)

    @given(shapes(simple=False))
    def test_partition_of_vertices(self, s):
        rep = component_report(s)
        seen = []
        for c in rep.edge_components:
            seen.extend(c)
        seen.extend(rep.isolated_vertices)
        edge_free_boundary = [v for v in s.boundary if all(v not in e for e in s.edges)]
        seen.extend(edge_free_boundary)
        assert sorted(seen) == list(s.vertices)
        assert not (rep.isolated_vertices & s.boundary)


class TestAutomorphisms:
    def test_line(self):
        assert automorphism_count(corpus.line()) == 1

    def test_star(self):
        assert automorphism_count(corpus.star3()) == 6

    def test_floating_edge(self):
        assert automorphism_count(corpus.floating_edge()) == 2

    def test_cap(self):
        with pytest.raises(EnumerationInfeasible):
            automorphism_count(Shape.build(5, [], (), ()), cap=4)

    @given(shapes(simple=False))
    def test_divides_middle_factorial(self, s):
        assert factorial(len(s.middle)) % automorphism_count(s) == 0


class TestText:
    @given(shapes(simple=False))
    def test_roundtrip(self, s):
        assert from_text(to_text(s)) == s
        assert to_text(from_text(to_text(s))) == to_text(s)

    def test_missing_field(self):
        with pytest.raises(ValueError):
            from_text('{"vertices": 2, "edges": []}')

    def test_file_roundtrip(self, tmp_path):
        p = tmp_path / "z.shape"
        save(corpus.z_shape(), p)
        assert load(p) == corpus.z_shape()


def test_corpus_contents():
    names = corpus.names()
    for required in ("identity", "line", "z", "floating_edge", "path2", "star3",
                     "triangle_middle", "floating_triangle", "isolated_middle"):
        assert required in names
    z = corpus.get("z")
    assert len(z.U) == len(z.V) == 2
    assert all(validate(s).ok for s in corpus.corpus())
