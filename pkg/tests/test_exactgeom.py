from __future__ import annotations

from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from ptilde.exactgeom import (
    Cone, GeometryError, Infeasible, LPValue, Polyhedron, Unbounded, VectorConfiguration, double_description,
    dot, dual_cone, maximize, nullspace, primitive, rank, region_covered, regular_subdivision, solve_linear,
    solve_lp_sup, strictly_feasible, triangulate_cone,
)

from _oracles import lp_brute_force_bounded, lp_by_generators

small = st.integers(min_value=-3, max_value=3)


def vectors(dim, min_size=1, max_size=5):
    return st.lists(st.tuples(*[small] * dim).filter(any), min_size=min_size, max_size=max_size)


def test_primitive_clears_denominators_and_content():
    assert primitive((Fr(1, 2), Fr(1, 3))) == (3, 2)
    assert primitive((4, -6)) == (2, -3)
    with pytest.raises(GeometryError):
        primitive((0, 0))


def test_rank_nullspace_and_solve():
    rows = [(1, 2, 3), (2, 4, 6), (0, 1, 1)]
    assert rank(rows, 3) == 2
    for v in nullspace(rows, 3):
        assert all(dot(r, v) == 0 for r in rows)
    assert solve_linear([(1, 1), (1, -1)], (3, 1), 2) == (2, 1)
    assert solve_linear([(1, 1), (2, 2)], (1, 3), 2) is None


def test_quadrant_facets_and_rays():
    C = Cone([(1, 0), (1, 1), (0, 1)])
    assert sorted(C.rays) == [(0, 1), (1, 0)]
    assert sorted(C.facets) == [(0, 1), (1, 0)]
    assert C.is_pointed() and C.is_simplicial()
    assert C.contains((1, 1)) and not C.relative_interior_contains((1, 0))


def test_halfplane_has_lineality():
    C = Cone([(1, 0), (-1, 0), (0, 1)])
    assert not C.is_pointed()
    assert len(C.lineality) == 1
    assert C.facets == ((0, 1),)


def test_lower_dimensional_cone_has_equations():
    C = Cone([(1, 0, 0), (0, 1, 0)])
    assert C.span_dim() == 2
    assert len(C.equations) == 1


def test_face_labels_of_square_cone():
    C = Cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], labels="abcd")
    faces = set(C.face_label_sets())
    assert frozenset("ab") in faces and frozenset("ac") not in faces
    assert frozenset() in faces and frozenset("abcd") in faces
    assert len(faces) == 10


@settings(max_examples=60, deadline=None)
@given(vectors(3))
def test_generators_satisfy_facets_and_rays_generate_back(gens):
    C = Cone(gens, dim=3)
    for g in gens:
        assert all(dot(f, g) >= 0 for f in C.facets)
        assert all(dot(e, g) == 0 for e in C.equations)
    back = Cone(list(C.rays) + list(C.lineality) + [tuple(-x for x in l) for l in C.lineality], dim=3)
    assert back.same_set(C)


@settings(max_examples=60, deadline=None)
@given(vectors(3))
def test_every_facet_is_tight_on_a_hyperplane_of_generators(gens):
    C = Cone(gens, dim=3)
    k = C.span_dim()
    for f in C.facets:
        tight = [g for g in gens if dot(f, g) == 0]
        assert rank(tight, 3) == k - 1


@settings(max_examples=40, deadline=None)
@given(vectors(3))
def test_double_dual_is_identity(gens):
    C = Cone(gens, dim=3)
    assert dual_cone(dual_cone(C)).same_set(C)


def test_double_description_of_orthant():
    lin, rays = double_description([(1, 0), (0, 1)], 2)
    assert lin == [] and sorted(rays) == [(0, 1), (1, 0)]


def test_polyhedron_vertices_of_triangle():
    P = Polyhedron([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)], 2)
    assert P.vertices() == [(0, 0), (0, 1), (1, 0)]


def test_maximize_outcomes():
    box = [((1, 0), 0), ((0, 1), 0), ((-1, 0), -2), ((0, -1), -3)]
    res = maximize((1, 1), box)
    assert isinstance(res, LPValue) and res.value == 5 and res.argmax == (2, 3)
    assert isinstance(maximize((1, 0), [((0, 1), 0)]), Unbounded)
    assert isinstance(maximize((0, 0), [((1, 0), 1), ((-1, 0), 0)]), Infeasible)


def test_strict_feasibility():
    assert strictly_feasible([(1, 0), (0, 1)])
    assert not strictly_feasible([(1, 0), (-1, 0)])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.tuples(small, small), st.integers(-4, 4)), min_size=0, max_size=4),
       st.tuples(small, small))
def test_maximize_matches_brute_force_on_bounded_regions(extra, c):
    box = [((1, 0), -3), ((0, 1), -3), ((-1, 0), -3), ((0, -1), -3)]
    hs = box + [(a, b) for a, b in extra if any(a)]
    best = lp_brute_force_bounded(hs, c, 2)
    res = maximize(c, hs)
    if best is None:
        assert isinstance(res, Infeasible)
    else:
        assert isinstance(res, LPValue) and res.value == best


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.tuples(small, small, small), st.integers(-3, 3)), min_size=1, max_size=4),
       vectors(3, 0, 4), st.tuples(small, small, small))
def test_solve_lp_sup_matches_vertex_enumeration(hs, tg, c):
    P = Polyhedron([(a, b) for a, b in hs], 3)
    T = Cone(tg, dim=3)
    got, want = solve_lp_sup(P, T, c), lp_by_generators(P, T, c)
    assert type(got) is type(want)
    if isinstance(want, LPValue):
        assert got.value == want.value
        assert P.contains(got.argmax) and T.contains(got.argmax)


def test_regular_subdivision_of_line_configuration():
    A = VectorConfiguration([("p", (1,)), ("m", (-1,))], {"p": 1, "m": 1})
    assert set(regular_subdivision(A, "lower", dim=1).cells) == {frozenset("p"), frozenset("m"), frozenset()}


def test_regular_subdivision_with_non_convex_heights_splits_square():
    vecs = [("a", (1, 0, 1)), ("b", (0, 1, 1)), ("c", (-1, 0, 1)), ("d", (0, -1, 1))]
    flat = regular_subdivision(VectorConfiguration(vecs, dict.fromkeys("abcd", 1)), "lower", dim=3)
    assert frozenset("abcd") in flat.cells
    bent = regular_subdivision(VectorConfiguration(vecs, {"a": 0, "b": 1, "c": 0, "d": 1}), "lower", dim=3)
    top = {c for c in bent.cells if len(c) == 3}
    assert top == {frozenset("abc"), frozenset("acd")}


def test_placing_triangulation_uses_label_order():
    C = Cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], labels="abcd")
    pieces = triangulate_cone(C, list("abcd"))
    assert all(p.is_simplicial() for p in pieces)
    spans = sorted(sorted(p.labels) for p in pieces)
    assert spans == [["a", "b", "c"], ["a", "c", "d"]]


def test_region_covered_by_two_halves():
    halves = [Cone([(1, 0), (0, 1)]), Cone([(0, 1), (-1, 0)])]
    assert region_covered([(0, 1)], [], halves, 2)
    assert not region_covered([(0, 1)], [], halves[:1], 2)
    assert region_covered([], [], halves + [Cone([(0, -1), (1, 0), (-1, 0)])], 2)
