"""Mixed volumes of lattice and virtual polytopes by two independent routes.

Route one is the polarization identity, extended multilinearly to virtual
polytopes.  Route two is the recursion over the rays of a complete fan,
with faces measured in the lattice orthogonal to each ray.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Sequence

from ..errors import InputError, PreconditionError
from .fan import Fan, linearity_witness, normal_fan
from .lattice import LatticeChart, integer_kernel_basis, orthogonal_lattice_basis, primitive
from .polytope import (LatticePolytope, VirtualPolytope, convex_hull, minkowski_sum,
                       minkowski_sum_all, support_value, to_lattice_coordinates,
                       volume_or_zero)


class _PolarizationCache:
    """Minkowski sums and volumes keyed by sorted multisets of polytope ids."""

    def __init__(self):
        self.ids: dict[LatticePolytope, int] = {}
        self.polys: list[LatticePolytope] = []
        self.sums: dict[tuple[int, ...], LatticePolytope] = {}
        self.vols: dict[tuple[int, ...], Fraction] = {}
        self.mvols: dict[tuple[int, ...], Fraction] = {}

    def intern(self, p: LatticePolytope) -> int:
        i = self.ids.get(p)
        if i is None:
            i = self.ids[p] = len(self.polys)
            self.polys.append(p)
        return i

    def minkowski(self, key: tuple[int, ...]) -> LatticePolytope:
        s = self.sums.get(key)
        if s is None:
            # P + ... + P (k times) is the dilate kP, which needs no hull
            last = key[-1]
            k = key.count(last)
            block = self.polys[last] if k == 1 else self.polys[last].scale(k)
            head = key[:-k]
            s = minkowski_sum(self.minkowski(head), block) if head else block
            self.sums[key] = s
        return s

    def volume(self, key: tuple[int, ...]) -> Fraction:
        v = self.vols.get(key)
        if v is None:
            v = self.vols[key] = volume_or_zero(self.minkowski(key))
        return v

    def mixed(self, key: tuple[int, ...]) -> Fraction:
        """Polarization over sub-multisets, weighted by binomial multiplicities."""
        m = self.mvols.get(key)
        if m is not None:
            return m
        n = len(key)
        mult = sorted(Counter(key).items())
        total = Fraction(0)
        for choice in product(*(range(k + 1) for _, k in mult)):
            size = sum(choice)
            if size == 0:
                continue
            sub = tuple(i for (i, _), c in zip(mult, choice) for _ in range(c))
            weight = 1
            for (_, k), c in zip(mult, choice):
                weight *= comb(k, c)
            term = self.volume(sub)
            if term:
                total += (-1) ** (n - size) * weight * term
        m = self.mvols[key] = total / factorial(n)
        return m


def _check_arity(ps: Sequence, n: int) -> None:
    if len(ps) != n:
        raise InputError(f"mixed volume in R^{n} needs {n} polytopes, got {len(ps)}")


def mixed_volume(ps: Sequence[LatticePolytope]) -> Fraction:
    """Normalized so that the mixed volume of (P, ..., P) is the volume of P."""
    if not ps:
        return Fraction(1)
    n = ps[0].ambient_dim
    _check_arity(ps, n)
    cache = _PolarizationCache()
    return cache.mixed(tuple(sorted(cache.intern(p) for p in ps)))


@dataclass
class MixedVolumeTrace:
    value: Fraction
    terms: list[tuple[int, tuple[int, ...], Fraction]] = field(default_factory=list)
    polytopes: list[LatticePolytope] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "terms": [{"sign": s, "polytopes": list(k), "mixed_volume": str(v)}
                      for s, k, v in self.terms],
        }


def mixed_volume_virtual(ps: Sequence[LatticePolytope | VirtualPolytope],
                         trace: bool = False):
    """Multilinear expansion of virtual polytopes into ordinary mixed volumes.

    With trace=True a MixedVolumeTrace is returned; its terms list the sign,
    the interned polytope ids and the mixed volume of every nonzero summand.
    """
    vps = [VirtualPolytope.of(p) for p in ps]
    n = vps[0].ambient_dim if vps else 0
    _check_arity(vps, n)
    cache = _PolarizationCache()
    slots = [[(s, cache.intern(q)) for s, q in vp.terms] for vp in vps]
    grouped: Counter = Counter()
    for choice in product(*slots):
        sign = 1
        for s, _ in choice:
            sign *= s
        grouped[tuple(sorted(i for _, i in choice))] += sign
    total = Fraction(0)
    terms = []
    for key in sorted(grouped):
        coeff = grouped[key]
        if coeff == 0:
            continue
        mv = cache.mixed(key) if n else Fraction(1)
        if mv:
            total += coeff * mv
            terms.append((coeff, key, mv))
    if trace:
        return MixedVolumeTrace(total, terms, list(cache.polys))
    return total


def _project_face(q: LatticePolytope, basis) -> LatticePolytope:
    return to_lattice_coordinates(q, basis)


def _recurse(vps: list[VirtualPolytope], rays: Sequence[tuple[int, ...]]) -> Fraction:
    n = len(vps)
    total = Fraction(0)
    last = vps[-1]
    for ray in rays:
        h = support_value(last, ray)
        if h == 0:
            continue
        basis = orthogonal_lattice_basis(ray, n)
        faces = [vp.face(ray).map_terms(lambda q: _project_face(q, basis)) for vp in vps[:-1]]
        total += h * _recurse_auto(faces)
    # inner normals under the min convention contribute with a minus sign
    return -total / n


def _recurse_auto(vps: list[VirtualPolytope]) -> Fraction:
    if not vps:
        return Fraction(1)
    big = minkowski_sum_all([q for vp in vps for _, q in vp.terms])
    if not big.is_full_dimensional:
        return Fraction(0)  # every summand lies in a translate of a proper subspace
    return _recurse(vps, normal_fan(big).rays)


def mixed_volume_recursive(ps: Sequence[LatticePolytope | VirtualPolytope], fan: Fan,
                           audit: bool = True) -> Fraction:
    """Ray recursion on a complete fan on which every term's support is linear.

    Lower levels use the normal fan of the Minkowski sum of all remaining
    terms, which every term's support function is linear on.
    """
    vps = [VirtualPolytope.of(p) for p in ps]
    n = fan.ambient_dim
    _check_arity(vps, n)
    if not fan.complete:
        raise PreconditionError("recursive mixed volume needs a complete fan")
    if audit:
        report = fan.audit()
        if not report["complete"]:
            raise PreconditionError("fan failed the completeness audit: "
                                    + "; ".join(report["problems"]))
        for vp in vps:
            w = linearity_witness(vp, fan)
            if w is not None:
                raise PreconditionError(
                    f"support function is not linear on maximal cone {w[0]} "
                    f"spanned by {[list(g) for g in w[1]]}")
    if n == 0:
        return Fraction(1)
    return _recurse(vps, fan.rays)


def mixed_volume_sublattice(ps: Sequence[LatticePolytope | VirtualPolytope],
                            basis: Sequence[Sequence[int]]) -> Fraction:
    """Mixed volume of polytopes lying in translates of span(basis), in that lattice.

    Each term is translated by its lexicographically least vertex before
    taking coordinates; the result is invariant under these translations.
    """
    chart = LatticeChart(basis, len(basis[0]) if basis else 0)

    def coords(q: LatticePolytope) -> LatticePolytope:
        a = q.vertices[0]
        return convex_hull(chart.coordinates(tuple(x - y for x, y in zip(v, a)))
                           for v in q.vertices)

    vps = [VirtualPolytope.of(p).map_terms(coords) for p in ps]
    return mixed_volume_virtual(vps)


def _segment_slot(vp: VirtualPolytope) -> LatticePolytope | None:
    if len(vp.terms) == 1 and vp.terms[0][0] == 1 and vp.terms[0][1].dim <= 1:
        return vp.terms[0][1]
    return None


def split_segments(ps: Sequence[LatticePolytope | VirtualPolytope]
                   ) -> tuple[Fraction, list[VirtualPolytope]]:
    """Remove lattice-segment slots one at a time.

    A slot [a, a + l u] with u primitive contributes l/n and the remaining
    slots are pushed to Z^n / Z u.  Returns (factor, remaining slots) with
    MVol(ps) = factor * MVol(remaining); a point slot gives factor 0.
    """
    vps = [VirtualPolytope.of(p) for p in ps]
    n = vps[0].ambient_dim if vps else 0
    _check_arity(vps, n)
    factor = Fraction(1)
    while True:
        idx = next((i for i, vp in enumerate(vps) if _segment_slot(vp) is not None), None)
        if idx is None:
            return factor, vps
        seg = _segment_slot(vps.pop(idx))
        if seg.dim == 0:
            return Fraction(0), []
        step = [b - a for a, b in zip(seg.vertices[0], seg.vertices[1])]
        if any(Fraction(x).denominator != 1 for x in step):
            raise PreconditionError("segment endpoints must differ by an integer vector")
        step = [int(x) for x in step]
        u = primitive(step)
        k = next(i for i, x in enumerate(u) if x)
        length = Fraction(step[k], u[k])
        quotient = integer_kernel_basis([u], n)  # rows w with w.u = 0; x -> (w.x) has kernel Z u
        matrix = [[w[i] for w in quotient] for i in range(n)]
        factor *= abs(length) / n
        n -= 1
        vps = [vp.map_terms(lambda q: q.map_linear(matrix)) for vp in vps]


def mixed_volume_segments(ps: Sequence[LatticePolytope | VirtualPolytope], trace: bool = False):
    """Mixed volume with segment slots removed first, then the multilinear expansion."""
    factor, rest = split_segments(ps)
    if not factor:
        return MixedVolumeTrace(Fraction(0)) if trace else Fraction(0)
    if not rest:
        return MixedVolumeTrace(factor) if trace else factor
    tr = mixed_volume_virtual(rest, trace=True)
    if trace:
        return MixedVolumeTrace(factor * tr.value, [(c, k, factor * v) for c, k, v in tr.terms],
                                tr.polytopes)
    return factor * tr.value
