"""Rational polyhedral cones and fans (min convention for normal fans)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from ..errors import InputError, PreconditionError
from ..ratlin import to_fraction
from . import hull as _hull
from .lattice import is_primitive_integral, primitive
from .polytope import LatticePolytope, VirtualPolytope, _scale_to_int, convex_hull

IntVec = tuple  # tuple[int, ...]


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def cone_facet_normals(generators: Sequence[IntVec]) -> list[IntVec]:
    """Primitive inner normals of the facets of a full-dimensional pointed cone."""
    n = len(generators[0])
    pts = [tuple([0] * n)] + [tuple(g) for g in generators]
    if _hull.affine_dim(pts) < n:
        raise PreconditionError("cone is not full-dimensional")
    facets, vertices = _hull.hull_facets(pts)
    if 0 not in vertices:
        raise PreconditionError("cone is not pointed")
    return sorted({a for a, b, _ in facets if b == 0})


def extreme_rays(inequalities: Sequence[IntVec]) -> list[IntVec] | None:
    """Extreme rays of {x : a . x >= 0 for all a}, or None when it is not full-dimensional.

    Rays of a full-dimensional pointed cone are the facet normals of its dual
    cone, read off the hull of the origin and the inequality normals.
    """
    n = len(inequalities[0])
    pts = [tuple([0] * n)] + sorted({tuple(a) for a in inequalities})
    if _hull.affine_dim(pts) < n:
        return None  # the cone contains a line; never produced from pointed inputs
    facets, vertices = _hull.hull_facets(pts)
    if 0 not in vertices:
        return None
    return sorted({a for a, b, _ in facets if b == 0})


@dataclass(frozen=True)
class Cone:
    ambient_dim: int
    generators: tuple[IntVec, ...]
    lineality: tuple[IntVec, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.ambient_dim or not is_primitive_integral(g):
                raise InputError(f"cone generator {g} is not a primitive integer vector")

    @cached_property
    def inequalities(self) -> tuple[IntVec, ...]:
        return tuple(cone_facet_normals(self.generators))

    @property
    def dim(self) -> int:
        return _hull.int_rank(self.generators)

    def contains(self, x: Sequence) -> bool:
        x = [to_fraction(t) for t in x]
        return all(_dot(a, x) >= 0 for a in self.inequalities)

    def interior_point(self) -> tuple[int, ...]:
        return tuple(sum(g[i] for g in self.generators) for i in range(self.ambient_dim))

    def facets(self) -> list[tuple[IntVec, ...]]:
        """Generator subsets spanning each facet."""
        return [tuple(g for g in self.generators if _dot(a, g) == 0) for a in self.inequalities]

    def faces(self, dim: int) -> list[tuple[IntVec, ...]]:
        """Generator subsets of the faces of the given dimension (0 gives the apex)."""
        full = frozenset(self.generators)
        faces = {full}
        frontier = {frozenset(f) for f in self.facets()}
        while frontier:
            faces |= frontier
            nxt = set()
            for f in frontier:
                for g in self.facets():
                    h = f & frozenset(g)
                    if h not in faces:
                        nxt.add(h)
            frontier = nxt
        out = [tuple(sorted(f)) for f in faces if (_hull.int_rank(list(f)) if f else 0) == dim]
        return sorted(out)


@dataclass(frozen=True)
class Fan:
    """A fan given by its rays and maximal cones (as sorted ray-index tuples)."""

    ambient_dim: int
    rays: tuple[IntVec, ...]
    maximal_cones: tuple[tuple[int, ...], ...]
    complete: bool = False

    def __post_init__(self):
        for r in self.rays:
            if len(r) != self.ambient_dim or not is_primitive_integral(r):
                raise InputError(f"ray {r} is not a primitive integer vector")
        for c in self.maximal_cones:
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise InputError(f"cone {c} refers to a missing ray")

    @classmethod
    def from_cones(cls, ambient_dim: int, cones: Iterable[Iterable[IntVec]],
                   complete: bool = False) -> "Fan":
        cones = [sorted({tuple(g) for g in c}) for c in cones]
        rays = sorted({g for c in cones for g in c})
        index = {r: i for i, r in enumerate(rays)}
        mc = sorted({tuple(sorted(index[g] for g in c)) for c in cones})
        return cls(ambient_dim, tuple(rays), tuple(mc), complete)

    @property
    def cones(self) -> list[Cone]:
        return [self.cone(i) for i in range(len(self.maximal_cones))]

    def cone(self, i: int) -> Cone:
        return Cone(self.ambient_dim, tuple(self.rays[j] for j in self.maximal_cones[i]))

    def cones_of_dim(self, dim: int) -> list[tuple[IntVec, ...]]:
        """All cones of the given dimension, as generator tuples (deduplicated)."""
        out = set()
        for c in self.cones:
            out.update(c.faces(dim))
        return sorted(out)

    def locate(self, x: Sequence) -> int | None:
        for i, c in enumerate(self.cones):
            if c.contains(x):
                return i
        return None

    def audit(self, samples: int = 64, seed: int = 0) -> dict:
        """Facet pairing, direction coverage and disjoint interiors."""
        problems = []
        count: dict[frozenset, int] = {}
        for i, c in enumerate(self.cones):
            if c.dim != self.ambient_dim:
                problems.append(f"maximal cone {i} is not full-dimensional")
                continue
            for f in c.facets():
                key = frozenset(f)
                count[key] = count.get(key, 0) + 1
        unpaired = [sorted(k) for k, v in count.items() if v != 2]
        if unpaired:
            problems.append(f"{len(unpaired)} facets not shared by exactly two cones")
        rng = random.Random(seed)
        for _ in range(samples):
            x = [Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for _ in range(self.ambient_dim)]
            if self.locate(x) is None:
                problems.append(f"direction {[str(t) for t in x]} not covered")
                break
        cs = self.cones
        if len(cs) <= 60:  # pairwise overlap test is quadratic in hull calls
            for i in range(len(cs)):
                for j in range(i + 1, len(cs)):
                    if extreme_rays(cs[i].inequalities + cs[j].inequalities) is not None:
                        problems.append(f"cones {i} and {j} overlap in their interiors")
        return {"complete": not problems, "problems": problems}


def normal_fan(p: LatticePolytope) -> Fan:
    """Maximal cones are {xi : min of <xi, .> attained at v}, one per vertex."""
    if not p.is_full_dimensional:
        raise PreconditionError(
            f"normal fan needs a full-dimensional polytope (affine hull has dim {p.dim})")
    n = p.ambient_dim
    if n == 0:
        return Fan(0, (), ((),), True)
    ints, _ = _scale_to_int(list(p.vertices))
    facets, vertices = _hull.hull_facets(ints)
    rays = sorted({a for a, _, _ in facets})
    index = {r: i for i, r in enumerate(rays)}
    cones = []
    for v in vertices:
        cones.append(tuple(sorted(index[a] for a, _, m in facets if v in m)))
    return Fan(n, tuple(rays), tuple(sorted(cones)), True)


def common_refinement(fans: Sequence[Fan]) -> Fan:
    if not fans:
        raise InputError("no fans to refine")
    n = fans[0].ambient_dim
    if any(f.ambient_dim != n for f in fans):
        raise InputError("fans live in different dimensions")
    if any(not f.complete for f in fans):
        raise PreconditionError("common refinement needs complete fans")
    acc = fans[0]
    for other in fans[1:]:
        cones = []
        for c in acc.cones:
            for d in other.cones:
                rays = extreme_rays(c.inequalities + d.inequalities)
                if rays is not None:
                    cones.append(rays)
        acc = Fan.from_cones(n, cones, complete=True)
    return acc


def is_refinement(fine: Fan, coarse: Fan) -> bool:
    """Every maximal cone of `fine` lies in some maximal cone of `coarse`."""
    for c in fine.cones:
        if not any(all(d.contains(g) for g in c.generators) for d in coarse.cones):
            return False
    return True


def linearity_witness(p: LatticePolytope | VirtualPolytope, fan: Fan):
    """None if every term's support function is linear on every maximal cone.

    Otherwise (cone index, generators) of a cone on which some term's minimum
    is not attained at a single vertex for all generators.
    """
    terms = p.terms if isinstance(p, VirtualPolytope) else ((1, p),)
    for i, cone in enumerate(fan.cones):
        for _, q in terms:
            common = None
            for g in cone.generators:
                vals = [sum(a * b for a, b in zip(g, v)) for v in q.vertices]
                m = min(vals)
                arg = {k for k, x in enumerate(vals) if x == m}
                common = arg if common is None else common & arg
                if not common:
                    return i, cone.generators
    return None


def fan_to_json(fan: Fan) -> dict:
    return {"dim": fan.ambient_dim,
            "maximal_cones": [list(c) for c in fan.maximal_cones],
            "rays": [list(r) for r in fan.rays]}


def fan_from_json(obj: dict, complete: bool = True) -> Fan:
    try:
        n = int(obj["dim"])
        rays = tuple(tuple(int(x) for x in r) for r in obj["rays"])
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in obj["maximal_cones"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed fan JSON: {exc}") from exc
    return Fan(n, rays, cones, complete)


def primitive_ray(v: Sequence) -> IntVec:
    return primitive(v)


def _face_facets(cone: Cone, face_gens: tuple, dim: int) -> list[tuple]:
    return [f for f in cone.faces(dim - 1) if set(f) <= set(face_gens)]


def _pull(cone: Cone, gens: tuple, dim: int, order: dict) -> list[tuple]:
    if len(gens) == dim:
        return [tuple(sorted(gens))]
    apex = min(gens, key=order.__getitem__)
    out = []
    for f in _face_facets(cone, gens, dim):
        if apex in f:
            continue
        for simplex in _pull(cone, f, dim - 1, order):
            out.append(tuple(sorted(simplex + (apex,))))
    return out


def simplicial_refinement(fan: Fan) -> Fan:
    """Pulling triangulation of every maximal cone, in the global order of ray indices.

    Using one global order makes the triangulations agree on shared faces,
    so the result is again a fan with the same rays.
    """
    order = {r: i for i, r in enumerate(fan.rays)}
    cones = []
    for c in fan.cones:
        cones.extend(_pull(c, tuple(sorted(c.generators)), fan.ambient_dim, order))
    return Fan.from_cones(fan.ambient_dim, cones, fan.complete)


def strict_refinement(fan: Fan, seed: int = 0, attempts: int = 16) -> Fan:
    """A complete fan strictly finer than `fan`.

    Tries the normal fan of the cross-polytope first, then normal fans of
    seeded random lattice polytopes.
    """
    n = fan.ambient_dim
    if not fan.complete or n == 0:
        raise PreconditionError("strict refinement needs a complete fan in positive dimension")
    cross = [tuple(s * int(i == j) for j in range(n)) for i in range(n) for s in (1, -1)]
    candidates = [convex_hull(cross)]
    rng = random.Random(seed)
    for _ in range(attempts):
        pts = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n + 3)]
        candidates.append(convex_hull(pts))
    for p in candidates:
        if not p.is_full_dimensional:
            continue
        fine = common_refinement([fan, normal_fan(p)])
        if len(fine.maximal_cones) > len(fan.maximal_cones):
            return fine
    raise PreconditionError(f"no strict refinement found in {attempts} attempts")
