"""Filtrations along rays, per-cone character data and equivariant Chern classes.

Two decreasing filtrations are exposed along a ray v:

* ``ray_filtration``: sum of E_alpha over <v, alpha> >= i;
* ``klyachko_filtration``: sum of E_alpha over <v, alpha> <= -i, the
  decreasing form of the increasing filtration by critical values.

The per-cone characters beta (from minimal critical values) satisfy the
compatibility condition for the second one with characters -beta.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, floor
from typing import Sequence

from .charseq import InvariantSubspace, critical_data, fan_of
from .errors import InputError, PreconditionError
from .polyhedra import Cone, Fan, primitive
from .polyhedra.fan import simplicial_refinement
from .polyhedra.lattice import is_primitive_integral
from .ratlin import (Subspace, compatible_decomposition, det, generic_flag, inverse, solve,
                     subspace_sum, vec)


def _dot(u, v) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class RayFiltration:
    """Decreasing filtration as steps (t, S): the space is S for prev_t < i <= t.

    Below the first threshold the space is the whole E, above the last it is 0.
    """

    ray: tuple[int, ...]
    r: int
    steps: tuple[tuple[Fraction, Subspace], ...]
    normalized_from: tuple | None = None

    def at(self, i) -> Subspace:
        i = Fraction(i)
        for t, s in self.steps:
            if i <= t:
                return s
        return Subspace.zero(self.r)

    def dimension_profile(self) -> list[tuple[Fraction, int]]:
        return [(t, s.dim) for t, s in self.steps]

    def to_json(self) -> dict:
        return {"ray": list(self.ray),
                "steps": [{"threshold": str(t), "dim": s.dim,
                           "basis": [[str(x) for x in b] for b in s.basis]}
                          for t, s in self.steps]}


def _normalize_ray(ray: Sequence) -> tuple[tuple[int, ...], tuple | None]:
    v = vec(ray)
    if is_primitive_integral(v):
        return tuple(int(x) for x in v), None
    return primitive(v), tuple(v)


def _filtration(L: InvariantSubspace, ray, key) -> RayFiltration:
    v, original = _normalize_ray(ray)
    if len(v) != L.n:
        raise InputError(f"ray must have {L.n} coordinates")
    by_threshold: dict[Fraction, list[Subspace]] = {}
    for a, s in L.items():
        by_threshold.setdefault(key(_dot(v, a)), []).append(s)
    # thresholds ascending; space at threshold t is the sum over keys >= t
    steps = []
    acc = Subspace.zero(L.r)
    for t in sorted(by_threshold, reverse=True):
        acc = subspace_sum([acc] + by_threshold[t])
        steps.append((t, acc))
    steps.reverse()
    dedup = []
    for t, s in steps:
        if dedup and dedup[-1][1] == s:
            dedup[-1] = (t, s)
        else:
            dedup.append((t, s))
    return RayFiltration(v, L.r, tuple(dedup), original)


def ray_filtration(L: InvariantSubspace, ray: Sequence) -> RayFiltration:
    """Sum of E_alpha over <ray, alpha> >= i.  Non-primitive rays are normalized."""
    return _filtration(L, ray, lambda value: value)


def klyachko_filtration(L: InvariantSubspace, ray: Sequence) -> RayFiltration:
    """Sum of E_alpha over <ray, alpha> <= -i."""
    return _filtration(L, ray, lambda value: -value)


@dataclass(frozen=True)
class ConeChernData:
    cone: Cone
    characters: tuple[tuple[Fraction, ...], ...]
    multiplicities: tuple[int, ...]
    parts: tuple[Subspace, ...]

    @property
    def roots(self) -> list[tuple[Fraction, ...]]:
        return [b for b, m in zip(self.characters, self.multiplicities) for _ in range(m)]

    def values(self, xi: Sequence) -> tuple[Fraction, ...]:
        return tuple(sorted(_dot(xi, b) for b in self.roots))

    def to_json(self) -> dict:
        return {"cone": [list(g) for g in self.cone.generators],
                "characters": [[str(x) for x in b] for b in self.characters],
                "multiplicities": list(self.multiplicities),
                "dims": [p.dim for p in self.parts]}


def cone_chern_data(L: InvariantSubspace, cone: Cone, seed: int = 0) -> ConeChernData:
    """Characters solving <g, beta_j> = j-th critical value at every generator g."""
    if cone.dim != L.n:
        raise PreconditionError("characters are determined only on full-dimensional cones")
    gens = list(cone.generators)
    interior = cone.interior_point()
    cd = critical_data(L, interior)
    values_at = [critical_data(L, g).multiset() for g in gens]
    betas, mults = [], []
    prev = 0
    for d in cd.dims:
        j = prev  # first slot of this block
        beta = solve([list(g) for g in gens], [vals[j] for vals in values_at])
        if beta is None:
            raise PreconditionError(
                f"multi-valued support function is not linear on the cone {[list(g) for g in gens]}")
        for k in range(prev, d):
            if any(_dot(g, beta) != vals[k] for g, vals in zip(gens, values_at)):
                raise PreconditionError(
                    f"slots {prev + 1}..{d} do not share one character on the cone "
                    f"{[list(g) for g in gens]}")
        betas.append(beta)
        mults.append(d - prev)
        prev = d
    w = generic_flag(list(L.subspaces), seed)
    parts = compatible_decomposition(cd.flag, w)
    return ConeChernData(cone, tuple(betas), tuple(mults), tuple(parts))


def _thresholds(values: Sequence[Fraction]) -> list[Fraction]:
    """Integers bracketing every jump, plus the values themselves."""
    out = set()
    for v in values:
        out.update({Fraction(floor(v) - 1), Fraction(floor(v)), Fraction(ceil(v)),
                    Fraction(ceil(v) + 1), v})
    return sorted(out)


@dataclass
class CompatibilityReport:
    rows: list[dict] = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return bool(self.rows) and all(r["pass"] for r in self.rows)

    def to_json(self) -> dict:
        return {"passes": self.passes, "rows": self.rows}


def verify_compatibility(L: InvariantSubspace, fan: Fan, seed: int = 0) -> CompatibilityReport:
    """Per (maximal cone, ray): the filtration along the ray equals the one built from characters.

    The check is klyachko_filtration(ray)_i = sum of V_j over <ray, -beta_j> >= i
    at every threshold where either side can jump.  Cones where the
    multi-valued support function is not linear are reported with a witness.
    """
    report = CompatibilityReport()
    for ci, cone in enumerate(fan.cones):
        try:
            data = cone_chern_data(L, cone, seed)
        except PreconditionError as exc:
            report.rows.append({"cone": ci, "ray": None, "pass": False,
                                "reason": str(exc), "witness": [str(x) for x in cone.interior_point()]})
            continue
        for g in cone.generators:
            filt = klyachko_filtration(L, g)
            values = [-_dot(g, a) for a in L.characters] + [-_dot(g, b) for b in data.characters]
            ok = True
            for i in _thresholds(values):
                rebuilt = subspace_sum([p for b, p in zip(data.characters, data.parts)
                                        if -_dot(g, b) >= i], L.r)
                if rebuilt != filt.at(i):
                    ok = False
                    break
            report.rows.append({"cone": ci, "ray": list(g), "pass": ok})
    return report


def _sympy():
    import sympy
    return sympy


@dataclass
class PiecewisePolynomial:
    """One polynomial per maximal cone, in coordinates x_1..x_n of the direction."""

    fan: Fan
    degree: int
    polys: list  # sympy Poly objects over QQ

    def evaluate(self, cone_index: int, xi: Sequence) -> Fraction:
        sp = _sympy()
        val = self.polys[cone_index].eval(tuple(sp.Rational(x.numerator, x.denominator)
                                                for x in vec(xi)))
        val = sp.Rational(val)
        return Fraction(int(val.p), int(val.q))

    def coefficients(self, cone_index: int) -> list[tuple[tuple[int, ...], Fraction]]:
        """Dense coefficients over all monomials of the degree, in lexicographic order."""
        n = self.fan.ambient_dim
        poly = self.polys[cone_index]
        monos = sorted(_monomials(n, self.degree), reverse=True)
        out = []
        for m in monos:
            c = poly.coeff_monomial(m) if n else poly.as_expr()
            out.append((m, Fraction(int(c.p), int(c.q))))
        return out

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "cones": [{"cone": list(self.fan.maximal_cones[i]),
                           "coefficients": [{"monomial": list(m), "coeff": str(c)}
                                            for m, c in self.coefficients(i)]}
                          for i in range(len(self.polys))]}


def _monomials(n: int, degree: int):
    if n == 0:
        return [()] if degree == 0 else []
    if n == 1:
        return [(degree,)]
    return [(k,) + rest for k in range(degree + 1) for rest in _monomials(n - 1, degree - k)]


def _elementary(linear_forms: Sequence[Sequence[Fraction]], i: int, n: int, negate: bool = False):
    sp = _sympy()
    xs = sp.symbols(f"x1:{n + 1}") if n else ()
    forms = [sum((sp.Rational(c.numerator, c.denominator) * x for c, x in zip(f, xs)), sp.Integer(0))
             for f in linear_forms]
    if negate:
        forms = [-f for f in forms]
    total = sp.Integer(0)
    for combo in combinations(forms, i):
        term = sp.Integer(1)
        for f in combo:
            term *= f
        total += term
    return sp.Poly(sp.expand(total), *xs, domain="QQ") if xs else sp.Poly(total, sp.Symbol("x"), domain="QQ")


def _fan_check(L: InvariantSubspace, fan: Fan) -> None:
    if fan.ambient_dim != L.n:
        raise InputError("fan and invariant subspace live in different dimensions")


def equivariant_chern(L: InvariantSubspace, fan: Fan, i: int, seed: int = 0,
                      negate_roots: bool = False, audit: bool = True) -> PiecewisePolynomial:
    """e_i of the linear functions <., beta_j> on each maximal cone.

    With negate_roots=True the roots are -<., beta_j>.  Continuity across
    shared facets is checked at facet-interior points when audit is set.
    """
    _fan_check(L, fan)
    if not 0 <= i <= L.r:
        raise InputError(f"Chern class index must lie in 0..{L.r}")
    polys, data = [], []
    for cone in fan.cones:
        d = cone_chern_data(L, cone, seed)
        data.append(d)
        polys.append(_elementary(d.roots, i, L.n, negate_roots))
    pp = PiecewisePolynomial(fan, i, polys)
    if audit:
        _continuity_audit(pp)
    return pp


def _continuity_audit(pp: PiecewisePolynomial) -> None:
    fan = pp.fan
    owners: dict[frozenset, list[int]] = {}
    for ci, cone in enumerate(fan.cones):
        for f in cone.facets():
            owners.setdefault(frozenset(f), []).append(ci)
    for facet, cs in owners.items():
        if len(cs) != 2:
            continue
        gens = sorted(facet)
        points = [tuple(sum(g[k] for g in gens) for k in range(fan.ambient_dim))]
        points += [tuple(sum((j + 2) * g[k] for j, g in enumerate(gens)) for k in range(fan.ambient_dim))]
        for pnt in points:
            a, b = (pp.evaluate(c, [Fraction(x) for x in pnt]) for c in cs)
            if a != b:
                raise AssertionError(f"piecewise polynomial jumps across the facet {gens}")


def _localization_sum(pp: PiecewisePolynomial, xi: Sequence[Fraction]) -> Fraction | None:
    total = Fraction(0)
    n = pp.fan.ambient_dim
    for ci, cone in enumerate(pp.fan.cones):
        gens = [list(map(Fraction, g)) for g in cone.generators]
        inv = inverse(gens)  # columns are the dual basis
        denom = abs(det(gens))
        for k in range(n):
            u = [inv[row][k] for row in range(n)]
            w = _dot(u, xi)
            if w == 0:
                return None
            denom *= w
        total += pp.evaluate(ci, xi) / denom
    return total


def top_chern_degree(L: InvariantSubspace, fan: Fan | None = None, seed: int = 0,
                     probes: int = 2) -> Fraction:
    """Degree of the top class with roots -h_j, by localization over a simplicial refinement.

    The sum over maximal cones of f_sigma(xi) / (|det sigma| * prod of dual
    basis values at xi) is evaluated at several random xi; all must agree.
    """
    if L.r != L.n:
        raise PreconditionError(f"top degree needs rank equal to n (rank {L.r}, n {L.n})")
    fan = fan or fan_of(L)
    fan = simplicial_refinement(fan)
    pp = equivariant_chern(L, fan, L.n, seed, negate_roots=True, audit=False)
    rng = random.Random(seed)
    results = []
    while len(results) < probes:
        xi = [Fraction(rng.randint(-97, 97), rng.randint(1, 5)) for _ in range(L.n)]
        val = _localization_sum(pp, xi)
        if val is not None:
            results.append(val)
    if len(set(results)) != 1:
        raise AssertionError(f"localization sum depends on the probe direction: {results}")
    return results[0]
