"""Lattice polytopes, virtual polytopes, support values and volumes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from ..errors import InputError, PreconditionError
from ..ratlin import rref, to_fraction, vec
from . import hull as _hull
from .lattice import LatticeChart, saturated_basis

Point = tuple  # tuple[Fraction, ...]


def _scale_to_int(points: Sequence[Point]) -> tuple[list[tuple[int, ...]], int]:
    den = lcm(*(x.denominator for p in points for x in p)) if points and points[0] else 1
    return [tuple(int(x * den) for x in p) for p in points], den


def _affine_frame(points: Sequence[Point]):
    """(base point, echelon basis of directions, pivot columns)."""
    p0 = points[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in points[1:]]
    red, pivots = rref(diffs, len(p0)) if diffs else ((), ())
    return p0, red, pivots


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many rational points, stored by its sorted vertices."""

    ambient_dim: int
    vertices: tuple[Point, ...]
    dim: int  # dimension of the affine hull

    def __repr__(self) -> str:
        vs = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"LatticePolytope[{self.dim}/{self.ambient_dim}]({vs})"

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def translate(self, t: Sequence) -> "LatticePolytope":
        t = vec(t)
        return LatticePolytope(self.ambient_dim,
                               tuple(sorted(tuple(a + b for a, b in zip(v, t)) for v in self.vertices)),
                               self.dim)

    def scale(self, k) -> "LatticePolytope":
        k = to_fraction(k)
        if k < 0:
            raise PreconditionError("only nonnegative dilates are polytopes")
        if k == 0:
            return point(tuple(Fraction(0) for _ in range(self.ambient_dim)))
        return LatticePolytope(self.ambient_dim,
                               tuple(tuple(k * x for x in v) for v in self.vertices), self.dim)

    def map_linear(self, matrix: Sequence[Sequence]) -> "LatticePolytope":
        """Image under x -> x M for an ambient_dim x m matrix M (rows indexed by input coords)."""
        m = [vec(r) for r in matrix]
        cols = len(m[0])
        pts = [tuple(sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(cols))
               for v in self.vertices]
        return convex_hull(pts)

    def lexmin_vertex(self) -> Point:
        return self.vertices[0]


def point(p: Sequence) -> LatticePolytope:
    p = vec(p)
    return LatticePolytope(len(p), (p,), 0)


def convex_hull(points: Iterable[Sequence]) -> LatticePolytope:
    pts = sorted({vec(p) for p in points})
    if not pts:
        raise InputError("convex hull of an empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise InputError("points of different dimensions")
    if len(pts) == 1:
        return LatticePolytope(n, (pts[0],), 0)
    p0, red, pivots = _affine_frame(pts)
    k = len(red)
    if k == 0:
        return LatticePolytope(n, (pts[0],), 0)
    if k == 1:
        c = pivots[0]
        lo = min(pts, key=lambda p: p[c])
        hi = max(pts, key=lambda p: p[c])
        return LatticePolytope(n, tuple(sorted((lo, hi))), 1)
    # coordinates on the pivot columns determine a point of the affine hull
    proj = [tuple(p[c] for c in pivots) for p in pts]
    ints, _ = _scale_to_int(proj)
    _, vidx = _hull.hull_facets(ints)
    return LatticePolytope(n, tuple(pts[i] for i in vidx), k)


def support_value(p, xi: Sequence) -> Fraction:
    """min over the polytope of <xi, .>; signed sum of term supports for virtual polytopes."""
    xi = vec(xi)
    if isinstance(p, VirtualPolytope):
        return sum((s * support_value(q, xi) for s, q in p.terms), Fraction(0))
    if len(xi) != p.ambient_dim:
        raise InputError("direction and polytope dimensions differ")
    return min(sum((a * b for a, b in zip(xi, v)), Fraction(0)) for v in p.vertices)


def face(p: LatticePolytope, xi: Sequence) -> LatticePolytope:
    xi = vec(xi)
    vals = [sum((a * b for a, b in zip(xi, v)), Fraction(0)) for v in p.vertices]
    m = min(vals)
    return convex_hull([v for v, x in zip(p.vertices, vals) if x == m])


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.ambient_dim != q.ambient_dim:
        raise InputError("Minkowski sum of polytopes in different dimensions")
    return convex_hull(tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices)


def minkowski_sum_all(ps: Sequence[LatticePolytope], ambient_dim: int | None = None) -> LatticePolytope:
    if not ps:
        if ambient_dim is None:
            raise InputError("empty Minkowski sum needs a dimension")
        return point((0,) * ambient_dim)
    acc = ps[0]
    for q in ps[1:]:
        acc = minkowski_sum(acc, q)
    return acc


def _full_volume(p: LatticePolytope) -> Fraction:
    ints, den = _scale_to_int(list(p.vertices))
    return _hull.volume_full(ints) / Fraction(den) ** p.ambient_dim


def volume(p: LatticePolytope) -> Fraction:
    """Euclidean volume; the polytope must be full-dimensional."""
    if not p.is_full_dimensional:
        raise PreconditionError(
            f"volume needs a full-dimensional polytope (affine hull has dim {p.dim} in R^{p.ambient_dim})")
    if p.ambient_dim == 0:
        return Fraction(1)
    return _full_volume(p)


def volume_or_zero(p: LatticePolytope) -> Fraction:
    return volume(p) if p.is_full_dimensional else Fraction(0)


def affine_lattice_basis(p: LatticePolytope) -> list[tuple[int, ...]]:
    """Z-basis of V ∩ Z^n where V is the linear space parallel to aff(p)."""
    p0 = p.vertices[0]
    diffs = [tuple(a - b for a, b in zip(v, p0)) for v in p.vertices[1:]]
    return saturated_basis(diffs, p.ambient_dim)


def to_lattice_coordinates(p: LatticePolytope, basis: Sequence[Sequence[int]],
                           anchor: Sequence | None = None) -> LatticePolytope:
    """Translate by -anchor (default: lexicographically least vertex) and express in the basis."""
    chart = LatticeChart(basis, p.ambient_dim)
    a = vec(anchor) if anchor is not None else p.vertices[0]
    pts = [chart.coordinates(tuple(x - y for x, y in zip(v, a))) for v in p.vertices]
    return convex_hull(pts) if pts[0] else LatticePolytope(0, ((),), 0)


def volume_sublattice(p: LatticePolytope) -> Fraction:
    """Volume of p inside its own affine hull, measured in the lattice V ∩ Z^n."""
    if p.dim == 0:
        return Fraction(1)
    basis = affine_lattice_basis(p)
    return volume(to_lattice_coordinates(p, basis))


@dataclass(frozen=True)
class VirtualPolytope:
    """Formal signed Minkowski combination of polytopes."""

    terms: tuple[tuple[int, LatticePolytope], ...]

    def __post_init__(self):
        if not self.terms:
            raise InputError("a virtual polytope needs at least one term")
        dims = {q.ambient_dim for _, q in self.terms}
        if len(dims) != 1:
            raise InputError("terms of a virtual polytope live in different dimensions")
        if any(s not in (1, -1) for s, _ in self.terms):
            raise InputError("term signs must be +1 or -1")

    @classmethod
    def of(cls, p: "LatticePolytope | VirtualPolytope") -> "VirtualPolytope":
        return p if isinstance(p, VirtualPolytope) else cls(((1, p),))

    @classmethod
    def difference(cls, p: LatticePolytope, q: LatticePolytope) -> "VirtualPolytope":
        return cls(((1, p), (-1, q)))

    @property
    def ambient_dim(self) -> int:
        return self.terms[0][1].ambient_dim

    def __add__(self, other: "VirtualPolytope") -> "VirtualPolytope":
        return VirtualPolytope(self.terms + VirtualPolytope.of(other).terms)

    def __neg__(self) -> "VirtualPolytope":
        return VirtualPolytope(tuple((-s, q) for s, q in self.terms))

    def __sub__(self, other: "VirtualPolytope") -> "VirtualPolytope":
        return self + (-VirtualPolytope.of(other))

    def positive_part(self) -> LatticePolytope:
        return minkowski_sum_all([q for s, q in self.terms if s > 0], self.ambient_dim)

    def negative_part(self) -> LatticePolytope:
        return minkowski_sum_all([q for s, q in self.terms if s < 0], self.ambient_dim)

    def equals(self, other: "VirtualPolytope") -> bool:
        """A - B = C - D as support functions iff A + D = B + C as polytopes."""
        other = VirtualPolytope.of(other)
        lhs = minkowski_sum(self.positive_part(), other.negative_part())
        rhs = minkowski_sum(self.negative_part(), other.positive_part())
        return lhs.vertices == rhs.vertices

    def face(self, xi: Sequence) -> "VirtualPolytope":
        return VirtualPolytope(tuple((s, face(q, xi)) for s, q in self.terms))

    def map_terms(self, fn) -> "VirtualPolytope":
        return VirtualPolytope(tuple((s, fn(q)) for s, q in self.terms))
