"""Solution counts and Minkowski weights from characteristic sequences."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .charseq import (InvariantSubspace, _source_n, _source_polymatroid, characteristic_polytopes,
                      fan_of)
from .errors import InputError, PreconditionError
from .polyhedra import (Fan, LatticePolytope, VirtualPolytope, face, is_refinement,
                        minkowski_sum_all, mixed_volume_recursive, mixed_volume_virtual,
                        normal_fan)
from .polyhedra.lattice import LatticeChart, integer_kernel_basis
from .polyhedra.mixed import MixedVolumeTrace
from .polyhedra.polytope import convex_hull
from .ratlin import Subspace


@dataclass
class CountReport:
    n: int
    count: Fraction
    mixed_volume: Fraction
    trace: MixedVolumeTrace
    cross_check: Fraction | None = None

    def to_json(self) -> dict:
        out = {"count": str(self.count), "mixed_volume": str(self.mixed_volume), "n": self.n,
               "trace": self.trace.to_json()}
        if self.cross_check is not None:
            out["recursive_mixed_volume"] = str(self.cross_check)
        return out


def _rank(src) -> int:
    return src.r if isinstance(src, InvariantSubspace) else _source_polymatroid(src).total_rank


def _report(terms: Sequence[VirtualPolytope], dim: int, validate: bool) -> CountReport:
    tr = mixed_volume_virtual(terms, trace=True)
    count = factorial(dim) * tr.value
    if count.denominator != 1 or count < 0:
        raise AssertionError(f"count {count} is not a nonnegative integer")
    cross = None
    if validate:
        big = minkowski_sum_all([q for t in terms for _, q in VirtualPolytope.of(t).terms])
        if big.is_full_dimensional:
            cross = mixed_volume_recursive(terms, normal_fan(big))
        else:
            cross = Fraction(0)
        if cross != tr.value:
            raise AssertionError(f"mixed volume routes disagree: {tr.value} vs {cross}")
    return CountReport(dim, count, tr.value, tr, cross)


def count_solutions(src, validate: bool = False) -> CountReport:
    """n! times the mixed volume of Delta_1, Delta_2 - Delta_1, ..., Delta_n - Delta_{n-1}."""
    n = _source_n(src)
    r = _rank(src)
    if r != n:
        raise PreconditionError(f"counting needs rank equal to n (rank {r}, n {n})")
    seq = characteristic_polytopes(src)
    return _report(seq.differences(), n, validate)


def _to_sublattice(p: LatticePolytope, chart: LatticeChart) -> LatticePolytope:
    a = p.vertices[0]
    return convex_hull(chart.coordinates(tuple(x - y for x, y in zip(v, a))) for v in p.vertices)


def count_mixed(src, scalars: Sequence[LatticePolytope], lattice: Sequence[Sequence[int]] | None = None,
                validate: bool = False) -> CountReport:
    """Mixed count with the first r slots from the characteristic sequence.

    With `lattice`, every term is translated by its least vertex and written
    in that Z-basis; the slot count is then the lattice rank.
    """
    seq = characteristic_polytopes(src)
    terms = seq.differences() + [VirtualPolytope.of(p) for p in scalars]
    dim = seq.n
    if lattice is not None:
        chart = LatticeChart(lattice, seq.n)
        terms = [t.map_terms(lambda q: _to_sublattice(q, chart)) for t in terms]
        dim = len(lattice)
    if len(terms) != dim:
        raise InputError(f"rank {seq.r} plus {len(scalars)} scalar polytopes must equal {dim}")
    return _report(terms, dim, validate)


@dataclass
class WeightTable:
    fan: Fan
    r: int
    weights: dict[tuple, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"r": self.r,
                "weights": [{"cone": [list(g) for g in c], "weight": w}
                            for c, w in sorted(self.weights.items())]}


def orthogonal_basis(gens: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    if not gens:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel_basis([list(g) for g in gens], n)


def cone_weight(seq, gens: Sequence[Sequence[int]], n: int) -> Fraction:
    """r! times the mixed volume of the face differences, in the lattice orthogonal to the cone."""
    r = seq.r
    xi = tuple(sum(g[k] for g in gens) for k in range(n))
    faces = [face(p, xi) for p in seq.polytopes]
    diffs = [VirtualPolytope.of(faces[1])] + [VirtualPolytope.difference(faces[i], faces[i - 1])
                                             for i in range(2, r + 1)]
    basis = orthogonal_basis(gens, n)
    chart = LatticeChart(basis, n)
    diffs = [t.map_terms(lambda q: _to_sublattice(q, chart)) for t in diffs]
    return factorial(r) * mixed_volume_virtual(diffs)


def minkowski_weights(src, fan: Fan | None = None) -> WeightTable:
    """Weights on the cones of dimension n - r of a complete fan refining the fan of src."""
    seq = characteristic_polytopes(src)
    n, r = seq.n, seq.r
    base = fan_of(src)
    fan = fan or base
    if not fan.complete:
        raise PreconditionError("weights need a complete fan")
    if not is_refinement(fan, base):
        raise PreconditionError("fan does not refine the normal fan of the characteristic sequence")
    table = WeightTable(fan, r)
    for gens in fan.cones_of_dim(n - r):
        w = cone_weight(seq, gens, n)
        if w.denominator != 1 or w < 0:
            raise AssertionError(f"weight {w} on cone {gens} is not a nonnegative integer")
        table.weights[tuple(gens)] = int(w)
    return table


def coordinate_embedding(supports: Sequence[Sequence[Sequence[int]]]) -> InvariantSubspace:
    """Scalar system with supports A_1..A_n as a rank-n invariant subspace.

    E_alpha is spanned by the coordinate vectors e_i with alpha in A_i.
    """
    n = len(supports)
    owners: dict[tuple, list[int]] = {}
    for i, pts in enumerate(supports):
        for a in pts:
            owners.setdefault(tuple(int(x) for x in a), []).append(i)
    chars = sorted(owners)
    spaces = [Subspace.span([[int(j == i) for j in range(n)] for i in owners[a]], n) for a in chars]
    L = InvariantSubspace(chars, spaces, n=len(chars[0]))
    return L
