import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import box, simplex
from vecbkk.errors import PreconditionError
from vecbkk.generators import random_polytope, random_virtual_sequence
from vecbkk.polyhedra import (VirtualPolytope, common_refinement, convex_hull, face,
                              fan_from_json, fan_to_json, is_refinement, minkowski_sum,
                              mixed_volume, mixed_volume_recursive, mixed_volume_segments,
                              mixed_volume_sublattice, mixed_volume_virtual, minkowski_sum_all,
                              normal_fan, point,
                              support_value, volume, volume_or_zero, volume_sublattice)
from vecbkk.polyhedra.fan import simplicial_refinement, strict_refinement
from vecbkk.polyhedra.hull import PREFILTER_MIN, _boundary, hull_facets

points2 = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=7)


def _vs(p):
    return sorted(tuple(int(x) for x in v) for v in p.vertices)


def test_hull_examples():
    assert _vs(convex_hull([(0, 0)])) == [(0, 0)]
    tri = convex_hull([(0, 0), (1, 0), (0, 1), (Fraction(1, 2), Fraction(1, 4))])
    assert len(tri.vertices) == 3
    assert _vs(convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_support_value_examples():
    s, q = simplex(2), box(2)
    assert support_value(s, (-1, -1)) == -1
    assert support_value(q, (-1, -1)) == -2
    assert support_value(VirtualPolytope.difference(q, s), (-1, -1)) == -1


def test_face_examples():
    assert _vs(face(box(2), (1, 0))) == [(0, 0), (0, 1)]
    assert face(simplex(2), (0, 0)) == simplex(2)
    assert _vs(face(simplex(2), (-1, -1))) == [(0, 1), (1, 0)]


def test_minkowski_examples():
    assert minkowski_sum(box(2), point((2, 3))) == box(2).translate((2, 3))
    pent = minkowski_sum(box(2), simplex(2))
    assert _vs(pent) == [(0, 0), (0, 2), (1, 2), (2, 0), (2, 1)]
    hexagon = minkowski_sum(simplex(2), convex_hull([(0, 0), (-1, 0), (0, -1)]))
    assert len(hexagon.vertices) == 6 and volume(hexagon) == 3


def test_volume_examples():
    assert volume(box(2)) == 1
    assert volume(simplex(2)) == Fraction(1, 2)
    assert volume(convex_hull([(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)])) == Fraction(7, 2)
    assert volume_sublattice(convex_hull([(0, 0), (2, 2)])) == 2
    assert volume_sublattice(point((1, 1))) == 1
    tri = convex_hull([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert mixed_volume_sublattice([tri, tri], [(1, -1, 0), (0, 1, -1)]) == Fraction(1, 2)


def test_volume_needs_full_dimension():
    with pytest.raises(PreconditionError):
        volume(convex_hull([(0, 0), (1, 1)]))


@given(points2, st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_volume_positive_iff_full_and_translation_invariant(pts, t):
    p = convex_hull(pts)
    v = volume_or_zero(p)
    assert (v > 0) == p.is_full_dimensional
    assert volume_or_zero(p.translate(t)) == v


@given(points2, points2, st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_support_additive_under_minkowski_sum(a, b, xi):
    p, q = convex_hull(a), convex_hull(b)
    assert support_value(minkowski_sum(p, q), xi) == support_value(p, xi) + support_value(q, xi)


def test_prefiltered_hull_matches_exact_pass():
    rng = random.Random(3)
    for d in (3, 4):
        pts = [tuple(rng.randint(-4, 4) for _ in range(d)) for _ in range(PREFILTER_MIN + 30)]
        pts = sorted(set(pts))
        fast = hull_facets(pts)
        bd = _boundary(pts)
        exact = sorted({q for verts, _, _ in bd.simplices.values() for q in verts})
        assert set(fast[1]) <= set(exact)
        assert {pts[i] for i in fast[1]} == set(convex_hull(pts).vertices)


def test_mixed_volume_examples():
    s, q = simplex(2), box(2)
    assert mixed_volume([s, s]) == Fraction(1, 2)
    assert mixed_volume([convex_hull([(0, 0), (1, 0)]), convex_hull([(0, 0), (0, 1)])]) == Fraction(1, 2)
    assert mixed_volume([s, q]) == 1
    assert mixed_volume_virtual([q, VirtualPolytope.difference(s, s)]) == 0


@given(st.lists(points2, min_size=2, max_size=2))
def test_mixed_volume_symmetric_and_diagonal(pp):
    p, q = (convex_hull(x) for x in pp)
    assert mixed_volume([p, q]) == mixed_volume([q, p])
    assert mixed_volume([p, p]) == volume_or_zero(p)


@given(st.lists(points2, min_size=3, max_size=3), st.integers(0, 3), st.integers(0, 3))
def test_mixed_volume_multilinear(pp, a, b):
    p, q, r = (convex_hull(x) for x in pp)
    combo = minkowski_sum(p.scale(a), q.scale(b))
    assert mixed_volume([combo, r]) == a * mixed_volume([p, r]) + b * mixed_volume([q, r])


def test_normal_fan_examples():
    assert len(normal_fan(box(2)).maximal_cones) == 4
    assert set(normal_fan(simplex(2)).rays) == {(1, 0), (0, 1), (-1, -1)}
    moved = simplex(2).translate((3, -2))
    assert fan_to_json(normal_fan(moved)) == fan_to_json(normal_fan(simplex(2)))


def test_common_refinement_examples():
    sq = normal_fan(box(2))
    assert fan_to_json(common_refinement([sq, sq])) == fan_to_json(sq)
    fine = common_refinement([sq, normal_fan(simplex(2))])
    assert set(fine.rays) == {(1, 0), (0, 1), (-1, 0), (0, -1), (-1, -1)}
    assert is_refinement(fine, sq) and not is_refinement(sq, fine)


def test_fan_json_round_trip():
    fan = normal_fan(minkowski_sum(box(3), simplex(3)))
    assert fan_to_json(fan_from_json(fan_to_json(fan))) == fan_to_json(fan)
    assert fan.audit()["complete"]


def test_simplicial_and_strict_refinement():
    cube = normal_fan(box(3))
    tri = simplicial_refinement(cube)
    assert len(tri.maximal_cones) == 8 and tri.audit()["complete"]
    octa = normal_fan(convex_hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]))
    assert len(simplicial_refinement(octa).maximal_cones) == 12
    fine = strict_refinement(normal_fan(simplex(2)))
    assert is_refinement(fine, normal_fan(simplex(2)))
    assert len(fine.maximal_cones) > 3


def test_recursive_examples():
    q = box(2)
    assert mixed_volume_recursive([q, q], normal_fan(q)) == 1
    seg = convex_hull([(2,), (7,)])
    assert mixed_volume_recursive([seg], normal_fan(seg)) == 5


def test_recursive_rejects_fan_where_support_is_not_linear():
    with pytest.raises(PreconditionError):
        mixed_volume_recursive([simplex(2), simplex(2)], normal_fan(box(2)))


@pytest.mark.parametrize("seed", range(25))
def test_polarization_matches_recursion(seed):
    vps = random_virtual_sequence(seed)
    big = minkowski_sum_all([q for vp in vps for _, q in vp.terms])
    expected = mixed_volume_virtual(vps)
    if not big.is_full_dimensional:
        assert expected == 0
        return
    assert mixed_volume_recursive(vps, normal_fan(big)) == expected


@pytest.mark.parametrize("seed", range(20))
def test_segment_reduction_matches_expansion(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    ps = [convex_hull([(0,) * n, tuple(rng.randint(-2, 2) for _ in range(n))])]
    ps += [random_polytope(rng, n) for _ in range(n - 1)]
    assert mixed_volume_segments(ps) == mixed_volume_virtual(ps)


def test_virtual_equality_uses_cancellation():
    s, q = simplex(2), box(2)
    a = VirtualPolytope.difference(minkowski_sum(q, s), s)
    assert a.equals(VirtualPolytope.of(q))
    assert not a.equals(VirtualPolytope.of(s))
