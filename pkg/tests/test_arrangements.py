import pytest

from vecbkk.arrangements import (HyperplaneArrangement, generic_formula_count, hyperplane_count,
                                 random_generic_arrangement, standard_simplex, subspace_of,
                                 sum_zero_basis)
from vecbkk.charseq import characteristic_polytopes
from vecbkk.errors import InputError, PreconditionError
from vecbkk.polyhedra import convex_hull
from vecbkk.fixtures import hyp4_arrangement


def test_hyp4_is_rank_one_with_simplex():
    L = subspace_of(hyp4_arrangement())
    assert L.r == 1
    assert characteristic_polytopes(L)[1] == standard_simplex(4)


def test_independent_forms_have_rank_zero():
    arr = HyperplaneArrangement.from_rows([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    with pytest.raises(PreconditionError, match="rank 0"):
        subspace_of(arr)


def test_generic_n2_N4_sequence():
    arr = random_generic_arrangement(2, 4, seed=1)
    L = subspace_of(arr)
    seq = characteristic_polytopes(L)
    assert L.r == 2
    assert seq[1] == standard_simplex(5)
    # generic: any two of the five functionals are independent
    pairs = {tuple(a + b for a, b in zip(u, v))
             for i, u in enumerate(L.characters) for v in L.characters[i + 1:]}
    assert set(seq[2].vertices) == pairs


@pytest.mark.parametrize("N", [3, 4])
def test_generic_count_matches_formula(N):
    for seed in range(3):
        arr = random_generic_arrangement(2, N, seed)
        s = standard_simplex(N + 1)
        assert hyperplane_count(arr, [s, s]).count == generic_formula_count(arr, [s, s])


def test_hyp4_with_segments():
    arr = hyp4_arrangement()
    seg = convex_hull([(0, 0, 0, 0), (1, -1, 0, 0)])
    other = convex_hull([(0, 0, 0, 0), (0, 0, 1, -1)])
    assert hyperplane_count(arr, [seg, seg]).count == 0 == generic_formula_count(arr, [seg, seg])
    assert hyperplane_count(arr, [seg, other], validate=True).count == 1


def test_scalar_polytopes_must_be_parallel():
    s = convex_hull([(0, 0, 0, 0), (1, 0, 0, 0)])
    with pytest.raises(PreconditionError, match="parallel"):
        hyperplane_count(hyp4_arrangement(), [s, s])
    with pytest.raises(InputError):
        hyperplane_count(hyp4_arrangement(), [standard_simplex(4)])


def test_sum_zero_basis():
    basis = sum_zero_basis(4)
    assert len(basis) == 3 and all(sum(b) == 0 for b in basis)


def test_json_round_trip():
    arr = hyp4_arrangement()
    assert HyperplaneArrangement.from_json(arr.to_json()).to_json() == arr.to_json()
