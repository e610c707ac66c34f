from fractions import Fraction
from itertools import combinations

from hypothesis import given, strategies as st

from vecbkk.ratlin import (Flag, Subspace, change_of_basis, compatible_decomposition, det,
                           generic_flag, inverse, is_transverse, nullspace, rank, solve,
                           subspace_sum, to_fraction)

small = st.integers(-4, 4)


def matrices(rows=3, cols=3):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_rank_examples():
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([[0] * 3] * 3) == 0
    assert rank([[1, 0], [0, 1], [1, 1]]) == 2


def test_to_fraction_parses_strings():
    assert to_fraction("3/6") == Fraction(1, 2)
    assert to_fraction("-2") == -2


@given(matrices(), st.permutations(range(3)), st.lists(st.integers(1, 5), min_size=3, max_size=3))
def test_rank_invariant_under_permutation_and_scaling(m, perm, scales):
    moved = [[Fraction(scales[i]) * x for x in m[p]] for i, p in enumerate(perm)]
    assert rank(moved) == rank(m)


@given(matrices())
def test_nullspace_dimension_and_membership(m):
    ns = nullspace(m, 3)
    assert len(ns) == 3 - rank(m)
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@given(matrices())
def test_inverse_and_det(m):
    if det(m) == 0:
        return
    inv = inverse(m)
    for i in range(3):
        for j in range(3):
            assert sum(m[i][k] * inv[k][j] for k in range(3)) == int(i == j)


def test_solve_inconsistent_returns_none():
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
    assert solve([[1, 0], [0, 2]], [3, 4]) == (3, 2)


def test_subspace_sum_examples():
    e1, e2 = Subspace.span([(1, 0)], 2), Subspace.span([(0, 1)], 2)
    assert (e1 + e2).dim == 2
    assert e1 + e1 == e1
    assert (e1 + Subspace.span([(1, 1)], 2)).is_full()


@given(st.lists(matrices(2, 3), min_size=3, max_size=3))
def test_subspace_sum_laws(ms):
    a, b, c = (Subspace.span(m, 3) for m in ms)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + a == a


def _audit_flag(flag, arrangement):
    for k in range(1, len(arrangement) + 1):
        for combo in combinations(arrangement, k):
            s = subspace_sum(list(combo), flag.ambient_dim)
            for w in flag.subspaces:
                assert is_transverse(w, s)


def test_generic_flag_avoids_coordinate_lines():
    arr = [Subspace.span([(1, 0)], 2), Subspace.span([(0, 1)], 2)]
    for seed in range(5):
        f = generic_flag(arr, seed)
        assert f.is_complete
        assert f.subspaces[0] not in arr
        _audit_flag(f, arr)


def test_generic_flag_sq2_passes_all_subset_checks(sq2):
    f = generic_flag(list(sq2.subspaces), 0)
    _audit_flag(f, list(sq2.subspaces))


def test_compatible_decomposition_examples():
    e = Subspace.full(2)
    assert compatible_decomposition(Flag(2, (e,)), generic_flag([e], 0)) == [e]
    f = Flag(2, (Subspace.span([(1, 0)], 2), e))
    w = Flag(2, (Subspace.span([(1, 1)], 2), e))
    parts = compatible_decomposition(f, w)
    assert parts == [Subspace.span([(1, 0)], 2), Subspace.span([(1, 1)], 2)]


@given(st.integers(0, 10_000))
def test_compatible_decomposition_reconstructs_flag(seed):
    r = 3
    f = generic_flag([Subspace.span([(1, 0, 0)], r)], seed)
    w = generic_flag([Subspace.span([(0, 1, 0)], r)], seed + 1)
    parts = compatible_decomposition(f, w)
    inv, blocks = change_of_basis(parts)
    assert sum(p.dim for p in parts) == r
    assert subspace_sum(parts, r).is_full()
    acc = Subspace.zero(r)
    prefixes = []
    for p in parts:
        acc = acc + p
        prefixes.append(acc)
    assert [s for s in prefixes if s.dim in f.dims] == [s for s in f.subspaces]
