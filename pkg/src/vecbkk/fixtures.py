"""Shipped example inputs and loading of any input JSON into a source object.

Each fixture is built in code by the functions below and also stored under
``vecbkk/data``; the tests check the two agree byte for byte.
"""

from __future__ import annotations

import json
from importlib import resources
from itertools import combinations
from typing import Callable

from .arrangements import HyperplaneArrangement, subspace_of
from .charseq import InvariantSubspace
from .errors import InputError
from .polymat import Matroid, Polymatroid, polymatroid_from_json
from .ratlin import Subspace
from .serialize import pretty_dumps


def _unit(i: int, n: int) -> tuple[int, ...]:
    return tuple(int(i == j) for j in range(n))


def sq2() -> InvariantSubspace:
    return InvariantSubspace([(0, 0), (1, 0), (0, 1)],
                             [Subspace.full(2), Subspace.span([(1, 0)], 2), Subspace.span([(0, 1)], 2)])


def u23() -> InvariantSubspace:
    return InvariantSubspace([(1, 0), (0, 1), (1, 1)],
                             [Subspace.span([v], 2) for v in [(1, 0), (0, 1), (1, 1)]])


HYP4_FORMS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


def hyp4_arrangement() -> HyperplaneArrangement:
    return HyperplaneArrangement.from_rows(HYP4_FORMS)


def hyp4() -> InvariantSubspace:
    return subspace_of(hyp4_arrangement())


def uniform(rank: int, size: int, characters) -> Matroid:
    return Matroid([tuple(c) for c in characters],
                   lambda mask: min(bin(mask).count("1"), rank))


def u24() -> Matroid:
    return uniform(2, 4, [(0, 0), (1, 0), (0, 1), (1, 1)])


def fano() -> Matroid:
    """Points of the Fano plane as the nonzero 0/1 vectors of length 3.

    Lines are the triples summing to zero mod 2; those have rank 2.
    """
    pts = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1) if (a, b, c) != (0, 0, 0)]
    lines = {frozenset(t) for t in combinations(range(7), 3)
             if all(sum(pts[i][k] for i in t) % 2 == 0 for k in range(3))}

    def rank_fn(mask: int) -> int:
        s = frozenset(i for i in range(7) if mask >> i & 1)
        if len(s) == 3 and s in lines:
            return 2
        return min(len(s), 3)

    return Matroid(pts, rank_fn)


def vamos6() -> Matroid:
    """Vamos matroid: elements a a' b b' c c' d d' with characters e1..e6, 0 and (1,...,1).

    Rank is min(|S|, 4) except for five of the six unions of two pairs
    (all but c c' d d'), which have rank 3.
    """
    chars = [_unit(i, 6) for i in range(6)] + [(0,) * 6, (1,) * 6]
    pairs = [frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5}), frozenset({6, 7})]
    planes = {pairs[i] | pairs[j] for i, j in combinations(range(4), 2)} - {pairs[2] | pairs[3]}

    def rank_fn(mask: int) -> int:
        s = frozenset(i for i in range(8) if mask >> i & 1)
        if s in planes:
            return 3
        return min(len(s), 4)

    return Matroid(chars, rank_fn)


def _subspace_doc(L: InvariantSubspace, name: str) -> dict:
    return {"name": name, **L.to_json()}


def _matroid_doc(m: Polymatroid, name: str) -> dict:
    return {"name": name, "matroid": True, **m.to_json()}


def _hyp4_doc() -> dict:
    return {"arrangement": hyp4_arrangement().to_json(), **_subspace_doc(hyp4(), "hyp4")}


FIXTURES: dict[str, Callable[[], dict]] = {
    "sq2": lambda: _subspace_doc(sq2(), "sq2"),
    "u23": lambda: _subspace_doc(u23(), "u23"),
    "hyp4": _hyp4_doc,
    "vamos6": lambda: _matroid_doc(vamos6(), "vamos6"),
    "fano": lambda: _matroid_doc(fano(), "fano"),
    "u24": lambda: _matroid_doc(u24(), "u24"),
}


def fixture_json(name: str) -> dict:
    try:
        build = FIXTURES[name]
    except KeyError:
        raise InputError(f"unknown fixture {name!r}; choose from {', '.join(sorted(FIXTURES))}") from None
    return build()


def fixture_text(name: str) -> str:
    return pretty_dumps(fixture_json(name)) + "\n"


def shipped_text(name: str) -> str:
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}")
    return resources.files("vecbkk").joinpath("data", f"{name}.json").read_text(encoding="utf-8")


def load_source(obj: dict):
    """InvariantSubspace, polymatroid or arrangement JSON, told apart by their keys."""
    if not isinstance(obj, dict):
        raise InputError("input JSON must be an object")
    if "subspaces" in obj:
        return InvariantSubspace.from_json(obj)
    if "ground" in obj:
        p = polymatroid_from_json(obj)
        if p.characters is None:
            raise InputError("polymatroid input needs integer-vector ground labels or 'characters'")
        return p
    if "forms" in obj:
        return subspace_of(HyperplaneArrangement.from_json(obj))
    raise InputError("input has none of 'subspaces', 'ground' or 'forms'")


def load_fixture(name: str):
    return load_source(json.loads(shipped_text(name)))
