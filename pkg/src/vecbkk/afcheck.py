"""Alexandrov-Fenchel certificates and the auxiliary-variable identity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .bkk import count_solutions
from .charseq import InvariantSubspace, characteristic_polytopes, direct_sum, multi_support
from .errors import InputError, PreconditionError
from .polymat import Matroid, independence_polytope, natural_matroid
from .polyhedra import (LatticePolytope, VirtualPolytope, convex_hull, mixed_volume_virtual)
from .polyhedra.lattice import LatticeChart
from .polyhedra.mixed import MixedVolumeTrace, mixed_volume_segments


@dataclass
class AFReport:
    a: Fraction
    b: Fraction
    c: Fraction
    traces: dict = field(default_factory=dict)
    scale: int = 1  # n! for the dimension the mixed volumes live in

    @property
    def verdict(self) -> bool:
        return self.b * self.b >= self.a * self.c

    @property
    def nonnegative(self) -> dict:
        return {"a": self.a >= 0, "b": self.b >= 0, "c": self.c >= 0}

    @property
    def equality(self) -> bool:
        return self.b * self.b == self.a * self.c

    def scaled(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.a * self.scale, self.b * self.scale, self.c * self.scale

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c),
                "verdict": self.verdict, "nonnegative": self.nonnegative,
                "scaled": [str(x) for x in self.scaled()],
                "trace": {k: v.to_json() for k, v in self.traces.items()}}


def _canonical_mvol(L: InvariantSubspace) -> MixedVolumeTrace:
    return mixed_volume_virtual(multi_support(L).terms, trace=True)


def af_subspaces(L1: InvariantSubspace, L2: InvariantSubspace, L3: InvariantSubspace) -> AFReport:
    """a, b, c from the canonical representations of L1+L1+L3, L1+L2+L3 and L2+L2+L3."""
    n = L1.n
    if L2.n != n or L3.n != n:
        raise InputError("all three subspaces must live over the same torus")
    if L1.r != 1 or L2.r != 1 or L3.r != n - 2:
        raise PreconditionError(f"ranks must be 1, 1 and {n - 2}; got {L1.r}, {L2.r}, {L3.r}")
    traces = {
        "a": _canonical_mvol(direct_sum(direct_sum(L1, L1), L3)),
        "b": _canonical_mvol(direct_sum(direct_sum(L1, L2), L3)),
        "c": _canonical_mvol(direct_sum(direct_sum(L2, L2), L3)),
    }
    return AFReport(traces["a"].value, traces["b"].value, traces["c"].value, traces, factorial(n))


def _to_sublattice(p: LatticePolytope, chart: LatticeChart) -> LatticePolytope:
    a = p.vertices[0]
    return convex_hull(chart.coordinates(tuple(x - y for x, y in zip(v, a))) for v in p.vertices)


def af_polytopes(src, p1: LatticePolytope, p2: LatticePolytope, rest: Sequence[LatticePolytope] = (),
                 lattice: Sequence[Sequence[int]] | None = None) -> AFReport:
    """Swap two scalar slots after the characteristic differences of src.

    Segment slots are split off before expanding, which keeps six-dimensional
    polymatroid inputs within minutes.
    """
    seq = characteristic_polytopes(src)
    head = seq.differences()
    dim = len(lattice) if lattice is not None else seq.n
    if seq.r + 2 + len(rest) != dim:
        raise InputError(f"rank {seq.r} plus {2 + len(rest)} scalar slots must equal {dim}")
    tail = [VirtualPolytope.of(p) for p in rest]

    def mv(x, y) -> MixedVolumeTrace:
        terms = head + [VirtualPolytope.of(x), VirtualPolytope.of(y)] + tail
        if lattice is not None:
            chart = LatticeChart(lattice, seq.n)
            terms = [t.map_terms(lambda q: _to_sublattice(q, chart)) for t in terms]
        return mixed_volume_segments(terms, trace=True)

    traces = {"a": mv(p1, p1), "b": mv(p1, p2), "c": mv(p2, p2)}
    return AFReport(traces["a"].value, traces["b"].value, traces["c"].value, traces, factorial(dim))


@dataclass
class AuxIdentityReport:
    lhs: Fraction
    rhs: Fraction
    n: int
    k: int

    @property
    def lhs_count(self) -> Fraction:
        return factorial(self.n) * self.lhs

    @property
    def rhs_count(self) -> Fraction:
        return factorial(self.n + self.k) * self.rhs

    @property
    def equal(self) -> bool:
        return self.lhs_count == self.rhs_count

    def to_json(self) -> dict:
        return {"lhs": str(self.lhs), "rhs": str(self.rhs), "n": self.n, "k": self.k,
                "lhs_count": str(self.lhs_count), "rhs_count": str(self.rhs_count),
                "equal": self.equal}


def _lift(p: LatticePolytope, offset: int, total: int) -> LatticePolytope:
    z = Fraction(0)
    return convex_hull((z,) * offset + tuple(v) + (z,) * (total - offset - p.ambient_dim)
                       for v in p.vertices)


def _bp_differences(m: Matroid, n: int, k: int) -> list[VirtualPolytope]:
    bps = [independence_polytope(m, i) for i in range(m.total_rank + 1)]
    lifted = [_lift(p, n, n + k) for p in bps]
    out = [VirtualPolytope.of(lifted[1])]
    out += [VirtualPolytope.difference(lifted[i], lifted[i - 1]) for i in range(2, len(lifted))]
    return out


def aux_identity(m: Matroid, scalars: Sequence[LatticePolytope] = ()) -> AuxIdentityReport:
    """Mixed volume of the matroid's characteristic data against its lift with segments.

    Coordinates on the right are (x, y) with x in R^n and y in R^k.  The
    independence polytopes sit in y, the scalars in x, and segment i joins
    (0, e_i) to (character_i, 0).  The two sides count the same solutions,
    so n! * lhs = (n + k)! * rhs.
    """
    if m.characters is None:
        raise InputError("the matroid needs characters in Z^n")
    n = len(m.characters[0])
    k = m.size
    r = m.total_rank
    if r + len(scalars) != n:
        raise InputError(f"rank {r} plus {len(scalars)} scalars must equal {n}")
    seq = characteristic_polytopes(m)
    lhs = mixed_volume_virtual(seq.differences() + [VirtualPolytope.of(p) for p in scalars])
    segments = []
    for i, a in enumerate(m.characters):
        top = tuple([0] * n + [int(i == j) for j in range(k)])
        bottom = tuple(list(a) + [0] * k)
        segments.append(VirtualPolytope.of(convex_hull([top, bottom])))
    right = (_bp_differences(m, n, k) + [VirtualPolytope.of(_lift(p, 0, n + k)) for p in scalars]
             + segments)
    rhs = mixed_volume_virtual(right)
    return AuxIdentityReport(lhs, rhs, n, k)


@dataclass
class AuxReductionReport:
    count: Fraction
    auxiliary_count: Fraction
    dimension: int

    @property
    def agree(self) -> bool:
        return self.count == self.auxiliary_count

    def to_json(self) -> dict:
        return {"count": str(self.count), "auxiliary_count": str(self.auxiliary_count),
                "dimension": self.dimension, "agree": self.agree}


def aux_reduction_demo(L: InvariantSubspace) -> AuxReductionReport:
    """Count on the torus of (x, w) after one auxiliary variable per basis vector.

    The vector equation sum b w = 0 uses the independence polytopes of the
    natural matroid in the w coordinates; each scalar equation w x^alpha = c
    has the segment from 0 to (alpha, e_j) as Newton polytope.
    """
    n = L.n
    if L.r != n:
        raise PreconditionError(f"the reduction needs rank equal to n (rank {L.r}, n {n})")
    m = natural_matroid(L.polymatroid)
    k = m.size
    terms = _bp_differences(m, n, k)
    for j, a in enumerate(m.characters):
        end = tuple(list(a) + [int(j == t) for t in range(k)])
        terms.append(VirtualPolytope.of(convex_hull([(0,) * (n + k), end])))
    aux = factorial(n + k) * mixed_volume_virtual(terms)
    return AuxReductionReport(count_solutions(L).count, aux, n + k)
