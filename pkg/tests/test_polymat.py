from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from vecbkk.errors import InputError, PreconditionError
from vecbkk.fixtures import fano, u24, vamos6
from vecbkk.generators import random_subspace_arrangement
from vecbkk.polymat import (Polymatroid, admissible_by_selection, dual_matroid, from_arrangement,
                            greedy_min_sequence, independence_polytope, is_admissible,
                            natural_matroid, natural_matroid_rank_bruteforce,
                            polymatroid_from_json, uniform_matroid)
from vecbkk.polyhedra import convex_hull
from vecbkk.ratlin import Subspace


def _all_masks(p):
    return range(1 << p.size)


def test_sq2_rank_table(sq2):
    p = sq2.polymatroid
    assert p.rank_of([(0, 0)]) == 2
    assert p.rank_of([(1, 0)]) == 1 and p.rank_of([(0, 1)]) == 1
    for pair in combinations(p.ground, 2):
        assert p.rank_of(pair) == 2
    assert p.total_rank == 2


def test_full_space_ranks():
    p = from_arrangement([("a", Subspace.full(3)), ("b", Subspace.full(3))])
    assert all(p.rank(m) == 3 for m in range(1, 4))


def test_u23_is_uniform(u23):
    p = u23.polymatroid
    assert all(p.rank(m) == min(bin(m).count("1"), 2) for m in _all_masks(p))
    assert p.is_matroid()


def test_admissibility_examples(sq2):
    p = sq2.polymatroid
    assert is_admissible(p, [])
    assert not is_admissible(p, [(1, 0), (1, 0)])
    assert is_admissible(p, [(0, 0), (0, 0)])


def test_admissibility_matches_spanning_selection(sq2, u23):
    for L in (sq2, u23):
        p = L.polymatroid
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    mult = [a, b, c][:p.size]
                    tup = [g for g, k in zip(p.ground, mult) for _ in range(k)]
                    assert is_admissible(p, tup) == admissible_by_selection(list(L.subspaces), mult)


def test_greedy_examples(u23, sq2):
    assert [s for _, s in greedy_min_sequence(u23.polymatroid, (1, 0))] == [0, 1]
    assert [s for _, s in greedy_min_sequence(sq2.polymatroid, (1, 1))] == [0, 0]
    assert [s for _, s in greedy_min_sequence(sq2.polymatroid, (0, 0))] == [0, 0]


def test_natural_matroid_of_sq2(sq2):
    p = sq2.polymatroid
    m = natural_matroid(p)
    assert m.size == 4 and m.total_rank == 2
    for mask in _all_masks(m):
        assert m.rank(mask) == natural_matroid_rank_bruteforce(p, m, mask)
    m.validate()


def test_natural_matroid_of_matroid_is_a_copy():
    m = u24()
    nat = natural_matroid(m)
    assert nat.size == m.size
    assert all(nat.rank(x) == m.rank(x) for x in _all_masks(m))


def test_dual_matroid():
    m = u24()
    d = dual_matroid(m)
    assert all(d.rank(x) == m.rank(x) for x in _all_masks(m))
    u34 = uniform_matroid(3, 4)
    assert all(dual_matroid(u34).rank(x) == min(bin(x).count("1"), 1) for x in _all_masks(u34))
    f = fano()
    dd = dual_matroid(dual_matroid(f))
    assert all(dd.rank(x) == f.rank(x) for x in _all_masks(f))


def test_independence_polytopes():
    m = uniform_matroid(2, 3)
    assert independence_polytope(m, 0) == convex_hull([(0, 0, 0)])
    assert independence_polytope(m, 1) == convex_hull([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert independence_polytope(m, 2) == convex_hull([(1, 1, 0), (1, 0, 1), (0, 1, 1)])
    with pytest.raises(PreconditionError):
        independence_polytope(m, 3)


def test_named_matroids_satisfy_axioms():
    for m in (u24(), fano(), vamos6()):
        m.validate()
    v = vamos6()
    assert v.total_rank == 4
    assert sum(1 for s in combinations(range(8), 4) if v.rank(sum(1 << i for i in s)) == 3) == 5


def test_json_round_trip(sq2):
    p = sq2.polymatroid
    q = polymatroid_from_json(p.to_json())
    assert q.rank_table() == p.rank_table()


def test_json_rejects_bad_input():
    with pytest.raises(InputError):
        polymatroid_from_json({"ground": [[0]], "rank": [{"subset": [3], "value": 1}]})
    with pytest.raises(InputError):
        polymatroid_from_json({"ground": [[0]], "rank": [], "closure": "lazy"})


def test_validate_flags_broken_rank():
    bad = Polymatroid(["a", "b"], lambda m: {0: 0, 1: 2, 2: 1, 3: 1}[m])
    with pytest.raises(InputError, match="rank decreases"):
        bad.validate()


@given(st.integers(0, 10_000))
def test_random_arrangement_polymatroids_are_valid(seed):
    random_subspace_arrangement(seed).polymatroid.validate()
