"""Seeded random inputs for property checks and the validation suite.

Every generator takes an integer seed and is a pure function of it.
"""

from __future__ import annotations

import random
from itertools import product

from .charseq import InvariantSubspace
from .polyhedra import LatticePolytope, VirtualPolytope, convex_hull
from .ratlin import Subspace


def _random_subspace(rng: random.Random, r: int, dim: int, bound: int = 3) -> Subspace:
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(r)] for _ in range(dim)]
        s = Subspace.span(rows, r)
        if s.dim == dim:
            return s


def random_subspace_arrangement(seed: int, n: int | None = None, r: int | None = None,
                                max_characters: int = 5, max_dim: int = 3, box: int = 2,
                                full_rank: bool = False) -> InvariantSubspace:
    """Distinct characters in [0, box]^n with random subspaces of Q^r summing to Q^r."""
    rng = random.Random(seed)
    n = n if n is not None else rng.choice((2, 3))
    r = r if r is not None else (n if full_rank else rng.randint(1, n))
    cells = list(product(range(box + 1), repeat=n))
    while True:
        k = rng.randint(1, max_characters)
        chars = rng.sample(cells, k)
        spaces = [_random_subspace(rng, r, rng.randint(1, min(max_dim, r))) for _ in chars]
        total = spaces[0]
        for s in spaces[1:]:
            total = total + s
        if total.is_full():
            return InvariantSubspace(chars, spaces, n=n)


def random_coordinate_supports(seed: int, n: int | None = None, max_points: int = 5,
                               box: int = 3) -> list[list[tuple[int, ...]]]:
    """n supports of 1..max_points distinct points in [0, box]^n."""
    rng = random.Random(seed)
    n = n if n is not None else rng.choice((2, 3))
    cells = list(product(range(box + 1), repeat=n))
    return [sorted(rng.sample(cells, rng.randint(1, max_points))) for _ in range(n)]


def random_polytope(rng: random.Random, n: int, max_points: int = 4, box: int = 2) -> LatticePolytope:
    cells = list(product(range(box + 1), repeat=n))
    return convex_hull(rng.sample(cells, rng.randint(1, min(max_points, len(cells)))))


def random_virtual_sequence(seed: int, n: int | None = None) -> list[VirtualPolytope]:
    """n virtual polytopes; about half are differences of two random polytopes."""
    rng = random.Random(seed)
    n = n if n is not None else rng.randint(1, 3)
    out = []
    for _ in range(n):
        p = random_polytope(rng, n)
        if rng.random() < 0.5:
            out.append(VirtualPolytope.difference(p, random_polytope(rng, n)))
        else:
            out.append(VirtualPolytope.of(p))
    return out


def random_pair(seed: int, max_rank: int = 3) -> tuple[InvariantSubspace, InvariantSubspace]:
    """Two subspaces over the same torus whose ranks add up to at most n <= 3."""
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    total = rng.randint(2, min(n, max_rank))
    r1 = rng.randint(1, total - 1)
    a = random_subspace_arrangement(rng.randrange(1 << 30), n=n, r=r1)
    b = random_subspace_arrangement(rng.randrange(1 << 30), n=n, r=total - r1)
    return a, b


def random_rank_one(seed: int, n: int, max_characters: int = 4, box: int = 2) -> InvariantSubspace:
    """A scalar space: random distinct characters, each with the line Q."""
    rng = random.Random(seed)
    cells = list(product(range(box + 1), repeat=n))
    chars = rng.sample(cells, rng.randint(1, min(max_characters, len(cells))))
    return InvariantSubspace(chars, [Subspace.full(1)] * len(chars), n=n)


def random_af_triple(seed: int, n: int = 3) -> tuple[InvariantSubspace, ...]:
    """Ranks 1, 1 and n - 2; the last may be a vector space of rank n - 2 > 1."""
    rng = random.Random(seed)
    l1 = random_rank_one(rng.randrange(1 << 30), n)
    l2 = random_rank_one(rng.randrange(1 << 30), n)
    if n - 2 == 1:
        l3 = random_rank_one(rng.randrange(1 << 30), n)
    elif n == 2:
        l3 = InvariantSubspace([], [], n=n)
    else:
        l3 = random_subspace_arrangement(rng.randrange(1 << 30), n=n, r=n - 2)
    return l1, l2, l3
