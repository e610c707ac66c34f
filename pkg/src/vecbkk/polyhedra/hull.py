"""Integer beneath-beyond convex hull and exact volume.

Points are integer tuples spanning R^d affinely.  The boundary is kept as a
triangulation into (d-1)-simplices, each with a primitive integer inequality
``a . x >= b``.  A facet through a horizon ridge and the new point is obtained
by combining the two adjacent inequalities, so no linear solves happen after
the initial simplex.  Coplanar simplices are merged into geometric facets at
the end.

Volume is the sum of |det| / d! over the cones from a base vertex to every
boundary simplex not containing it.

Large point sets are first thinned by a floating-point qhull pass.  The
exact hull of the survivors is then certified against every input point
with integer arithmetic, and any point found outside is put back, so the
result never depends on the floating-point step.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..errors import PreconditionError
from ..ratlin import nullspace

PREFILTER_MIN = 48  # below this many points the exact pass alone is faster
_INT64_SAFE = 1 << 62

IntPoint = tuple  # tuple[int, ...]


def int_rank(vectors: Sequence[Sequence[int]], stop_at: int | None = None) -> int:
    """Rank of integer vectors by fraction-free elimination."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return 0
    n = len(rows[0])
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        pc = p[col]
        for i in range(r + 1, len(rows)):
            x = rows[i][col]
            if x:
                new = [pc * a - x * b for a, b in zip(rows[i], p)]
                g = 0
                for a in new:
                    g = gcd(g, a)
                rows[i] = [a // g for a in new] if g > 1 else new
        r += 1
        if r == len(rows) or (stop_at is not None and r >= stop_at):
            break
    return r


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def affine_dim(points: Sequence[IntPoint], stop_at: int | None = None) -> int:
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    return int_rank([tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]], stop_at)


def _hyperplane_through(points: Sequence[IntPoint]) -> tuple[int, ...]:
    from .lattice import primitive
    d = len(points[0])
    diffs = [tuple(a - b for a, b in zip(p, points[0])) for p in points[1:]]
    ns = nullspace(diffs, d)
    assert len(ns) == 1
    return primitive(ns[0])


def _initial_simplex(pts: Sequence[IntPoint], d: int, subset: Sequence[int]) -> list[int]:
    first = subset[0]
    chosen = [first]
    basis: list[tuple[int, ...]] = []
    for i in subset[1:]:
        diff = tuple(a - b for a, b in zip(pts[i], pts[first]))
        if int_rank(basis + [diff]) > len(basis):
            basis.append(diff)
            chosen.append(i)
            if len(basis) == d:
                return chosen
    raise PreconditionError(f"points are not full-dimensional in R^{d}")


class _Boundary:
    """Triangulated boundary: simplices with inequalities and a ridge map."""

    def __init__(self, d: int):
        self.d = d
        self.simplices: dict[int, tuple[tuple[int, ...], tuple[int, ...], int]] = {}
        self.ridges: dict[tuple[int, ...], list[int]] = {}
        self.next_id = 0

    def add(self, verts: tuple[int, ...], a: tuple[int, ...], b: int) -> None:
        sid = self.next_id
        self.next_id += 1
        verts = tuple(sorted(verts))
        self.simplices[sid] = (verts, a, b)
        for k in range(len(verts)):
            self.ridges.setdefault(verts[:k] + verts[k + 1:], []).append(sid)

    def remove(self, sid: int) -> None:
        verts, _, _ = self.simplices.pop(sid)
        for k in range(len(verts)):
            key = verts[:k] + verts[k + 1:]
            lst = self.ridges[key]
            lst.remove(sid)
            if not lst:
                del self.ridges[key]

    def neighbour(self, sid: int, ridge: tuple[int, ...]) -> int:
        a, b = self.ridges[ridge]
        return b if a == sid else a


def _boundary(pts: Sequence[IntPoint], subset: Sequence[int] | None = None) -> _Boundary:
    """Beneath-beyond over the points indexed by subset (all points by default)."""
    d = len(pts[0])
    subset = list(range(len(pts))) if subset is None else list(subset)
    simplex = _initial_simplex(pts, d, subset)
    bd = _Boundary(d)
    for j in simplex:
        others = tuple(i for i in simplex if i != j)
        a = _hyperplane_through([pts[i] for i in others])
        b = sum(x * y for x, y in zip(a, pts[others[0]]))
        if sum(x * y for x, y in zip(a, pts[j])) < b:
            a, b = tuple(-x for x in a), -b
        bd.add(others, a, b)

    in_simplex = set(simplex)
    rest = [i for i in subset if i not in in_simplex]
    random.Random(0).shuffle(rest)
    for pi in rest:
        p = pts[pi]
        vals = {}
        strictly = False
        for sid, (_, a, b) in bd.simplices.items():
            v = sum(x * y for x, y in zip(a, p)) - b
            if v <= 0:
                vals[sid] = v
                if v < 0:
                    strictly = True
        if not strictly:
            continue
        # coplanar simplices are treated as visible; the horizon then re-triangulates
        # their patch around p, which keeps every surviving vertex on the boundary
        visible = vals
        new = []
        for sid, vF in visible.items():
            verts, aF, bF = bd.simplices[sid]
            for k in range(d):
                ridge = verts[:k] + verts[k + 1:]
                gid = bd.neighbour(sid, ridge)
                if gid in visible:
                    continue
                _, aG, bG = bd.simplices[gid]
                vG = sum(x * y for x, y in zip(aG, p)) - bG
                a = tuple(vG * x - vF * y for x, y in zip(aF, aG))
                b = vG * bF - vF * bG
                g = 0
                for x in a:
                    g = gcd(g, x)
                new.append((ridge + (pi,), tuple(x // g for x in a), b // g))
        for sid in visible:
            bd.remove(sid)
        for verts, a, b in new:
            bd.add(verts, a, b)
    return bd


def _float_candidates(pts: Sequence[IntPoint]) -> list[int] | None:
    try:
        return sorted(int(i) for i in ConvexHull(np.array(pts, dtype=float)).vertices)
    except (QhullError, ValueError):
        return None


def _outside(pts: Sequence[IntPoint], bd: _Boundary, skip: set[int]) -> list[int]:
    """Indices of points violating some boundary inequality."""
    rows = [(a, b) for _, a, b in bd.simplices.values()]
    others = [i for i in range(len(pts)) if i not in skip]
    if not others:
        return []
    amax = max(abs(x) for a, _ in rows for x in a)
    bmax = max(abs(b) for _, b in rows)
    pmax = max(abs(x) for i in others for x in pts[i])
    if amax * pmax * len(pts[0]) + bmax < _INT64_SAFE:
        a = np.array([a for a, _ in rows], dtype=np.int64)
        b = np.array([b for _, b in rows], dtype=np.int64)
        p = np.array([pts[i] for i in others], dtype=np.int64)
        bad = ((p @ a.T) < b).any(axis=1)
        return [others[k] for k in np.nonzero(bad)[0]]
    return [i for i in others
            if any(sum(x * y for x, y in zip(a, pts[i])) < b for a, b in rows)]


def _certified_boundary(pts: Sequence[IntPoint]) -> _Boundary:
    if len(pts) < PREFILTER_MIN:
        return _boundary(pts)
    cand = _float_candidates(pts)
    if cand is None or len(cand) <= len(pts[0]):
        return _boundary(pts)
    chosen = set(cand)
    while True:
        try:
            bd = _boundary(pts, sorted(chosen))
        except PreconditionError:
            return _boundary(pts)
        missing = _outside(pts, bd, chosen)
        if not missing:
            return bd
        chosen.update(missing)


def hull_facets(points: Sequence[IntPoint]):
    """Facets and vertices of the hull of full-dimensional integer points.

    Returns (facets, vertices): facets is a sorted list of
    (normal, offset, frozenset of vertex indices) with normal . x >= offset on
    the hull; vertices is the sorted list of indices of extreme points.
    """
    pts = list(points)
    d = len(pts[0])
    if d == 0:
        return [], [0]
    bd = _certified_boundary(pts)
    planes: dict[tuple, set[int]] = {}
    for verts, a, b in bd.simplices.values():
        planes.setdefault((a, b), set()).update(verts)
    inc: dict[int, list[tuple[int, ...]]] = {}
    for (a, _), members in planes.items():
        for q in members:
            inc.setdefault(q, []).append(a)
    vertices = sorted(q for q, normals in inc.items()
                      if len(normals) >= d and int_rank(normals, stop_at=d) == d)
    vset = set(vertices)
    facets = sorted((a, b, frozenset(m & vset)) for (a, b), m in planes.items())
    return facets, vertices


def volume_full(points: Sequence[IntPoint]) -> Fraction:
    """Euclidean volume of the hull of full-dimensional integer points."""
    pts = sorted(set(tuple(p) for p in points))
    return _volume(tuple(pts))


@lru_cache(maxsize=50000)
def _volume(pts: tuple) -> Fraction:
    d = len(pts[0])
    if d == 1:
        return Fraction(pts[-1][0] - pts[0][0])
    bd = _certified_boundary(pts)
    # any point of the boundary triangulation works as apex; use the smallest index
    apex = min(v for verts, _, _ in bd.simplices.values() for v in verts)
    v0 = pts[apex]
    total = 0
    for verts, a, b in bd.simplices.values():
        if sum(x * y for x, y in zip(a, v0)) == b:
            continue
        total += abs(int_det([[x - y for x, y in zip(pts[q], v0)] for q in verts]))
    return Fraction(total, factorial(d))
