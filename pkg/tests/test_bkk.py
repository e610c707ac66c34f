from math import factorial

import pytest

from conftest import simplex
from vecbkk.arrangements import standard_simplex, sum_zero_basis
from vecbkk.bkk import coordinate_embedding, count_mixed, count_solutions, minkowski_weights
from vecbkk.charseq import InvariantSubspace, direct_sum, quotient_reduction
from vecbkk.errors import InputError, PreconditionError
from vecbkk.generators import random_coordinate_supports, random_rank_one
from vecbkk.polyhedra import convex_hull, mixed_volume
from vecbkk.ratlin import Subspace


def test_fixture_counts(sq2, u23):
    assert count_solutions(sq2).count == 1
    assert count_solutions(u23, validate=True).count == 1


@pytest.mark.parametrize("a,b", [(1, 1), (2, 3), (3, 1)])
def test_scaled_simplices_give_product(a, b):
    A = [(0, 0), (a, 0), (0, a)]
    B = [(0, 0), (b, 0), (0, b)]
    assert count_solutions(coordinate_embedding([A, B])).count == a * b


@pytest.mark.parametrize("seed", range(15))
def test_coordinate_embedding_matches_scalar_mixed_volume(seed):
    supports = random_coordinate_supports(seed)
    n = len(supports)
    expected = factorial(n) * mixed_volume([convex_hull(s) for s in supports])
    assert count_solutions(coordinate_embedding(supports)).count == expected


def test_count_needs_full_rank(hyp4):
    with pytest.raises(PreconditionError):
        count_solutions(hyp4)


def test_count_mixed_with_no_scalars_is_count(sq2):
    assert count_mixed(sq2, []).count == count_solutions(sq2).count
    with pytest.raises(InputError):
        count_mixed(sq2, [simplex(2)])


def test_count_mixed_of_direct_sum():
    a = random_rank_one(4, 2)
    b = random_rank_one(9, 2)
    s = direct_sum(a, b)
    assert count_mixed(s, []).count == count_mixed(a, [convex_hull(b.characters)]).count


def test_count_mixed_in_sum_zero_lattice(hyp4):
    s = standard_simplex(4)
    rep = count_mixed(hyp4, [s, s], lattice=sum_zero_basis(4), validate=True)
    assert rep.count == 1


def test_weights_rank_one_simplex():
    L = InvariantSubspace([(0, 0), (1, 0), (0, 1)], [Subspace.full(1)] * 3)
    table = minkowski_weights(L)
    assert sorted(table.weights.values()) == [1, 1, 1]
    assert set(table.weights) == {((1, 0),), ((0, 1),), ((-1, -1),)}


def test_weights_hyp4_are_unit_on_two_dimensional_cones(hyp4):
    table = minkowski_weights(quotient_reduction(hyp4).reduced)
    assert len(table.weights) == 6 and set(table.weights.values()) == {1}


def test_weights_of_full_rank_are_the_count(sq2):
    table = minkowski_weights(sq2)
    assert list(table.weights.values()) == [1]
