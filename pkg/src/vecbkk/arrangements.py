"""Hyperplane arrangements in projective space as rank N - n invariant subspaces."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Sequence

from .bkk import CountReport, count_mixed
from .charseq import InvariantSubspace
from .errors import GenericityError, InputError, PreconditionError
from .polymat import EXHAUSTIVE_LIMIT, Matroid, dual_matroid
from .polyhedra import LatticePolytope, convex_hull, mixed_volume_sublattice
from .polyhedra.lattice import integer_kernel_basis
from .ratlin import Subspace, nullspace, rank, to_fraction


@dataclass(frozen=True)
class HyperplaneArrangement:
    """Linear forms u_0..u_N on Q^(n+1), stored as rows."""

    forms: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.forms:
            raise InputError("an arrangement needs at least one form")
        width = len(self.forms[0])
        if any(len(u) != width for u in self.forms):
            raise InputError("forms have different lengths")
        for i, u in enumerate(self.forms):
            if not any(u):
                raise InputError(f"form {i} is zero")
        if rank(self.forms) != width:
            raise PreconditionError("forms do not span the dual space; the hyperplanes share a point")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "HyperplaneArrangement":
        return cls(tuple(tuple(to_fraction(x) for x in r) for r in rows))

    @property
    def n(self) -> int:
        """Dimension of the projective space."""
        return len(self.forms[0]) - 1

    @property
    def N(self) -> int:
        return len(self.forms) - 1

    def matroid(self) -> Matroid:
        forms = self.forms
        return Matroid(list(range(len(forms))),
                       lambda mask: rank([forms[i] for i in range(len(forms)) if mask >> i & 1]))

    def is_generic(self) -> bool:
        """Every n+1 of the forms are independent."""
        k = self.n + 1
        return all(rank([self.forms[i] for i in c]) == k for c in combinations(range(len(self.forms)), k))

    def to_json(self) -> dict:
        return {"n": self.n, "forms": [[str(x) for x in u] for u in self.forms]}

    @classmethod
    def from_json(cls, obj: dict) -> "HyperplaneArrangement":
        try:
            arr = cls.from_rows(obj["forms"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed arrangement JSON: {exc}") from exc
        if "n" in obj and int(obj["n"]) != arr.n:
            raise InputError(f"declared n={obj['n']} but forms have length {arr.n + 1}")
        return arr


def coordinate_functionals(arr: HyperplaneArrangement) -> list[tuple[Fraction, ...]]:
    """l_i = i-th coordinate restricted to K = {z : sum z_i u_i = 0}, in a basis of K."""
    cols = [[arr.forms[i][j] for i in range(len(arr.forms))] for j in range(arr.n + 1)]
    kernel = nullspace(cols, len(arr.forms))
    return [tuple(k[i] for k in kernel) for i in range(len(arr.forms))]


def subspace_of(arr: HyperplaneArrangement, audit: bool = True) -> InvariantSubspace:
    """Characters e_i in Z^(N+1) with E_(e_i) spanned by l_i; zero functionals are dropped."""
    ells = coordinate_functionals(arr)
    m = arr.N - arr.n
    if m <= 0:
        raise PreconditionError("the kernel of the forms is zero, so the subspace has rank 0")
    chars, spaces = [], []
    for i, l in enumerate(ells):
        if any(l):
            chars.append(tuple(int(i == j) for j in range(arr.N + 1)))
            spaces.append(Subspace.span([l], m))
    L = InvariantSubspace(chars, spaces, n=arr.N + 1)
    if audit and len(ells) <= EXHAUSTIVE_LIMIT:
        audit_dual_matroid(arr, ells)
    return L


def audit_dual_matroid(arr: HyperplaneArrangement, ells=None) -> None:
    """Subsets of the l_i are independent exactly when the complementary u_i span."""
    ells = ells if ells is not None else coordinate_functionals(arr)
    dual = dual_matroid(arr.matroid())
    size = len(ells)
    for mask in range(1 << size):
        got = rank([ells[i] for i in range(size) if mask >> i & 1]) if mask else 0
        if got != dual.rank(mask):
            raise AssertionError(f"functionals fail the dual-matroid check on subset {mask:b}")


def sum_zero_basis(dim: int) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^dim : sum x = 0}."""
    return integer_kernel_basis([[1] * dim], dim)


def _audit_parallel(p: LatticePolytope) -> None:
    sums = {sum(v) for v in p.vertices}
    if len(sums) != 1:
        raise PreconditionError(f"polytope {p} is not parallel to the coordinate-sum hyperplane")


def hyperplane_count(arr: HyperplaneArrangement, scalars: Sequence[LatticePolytope],
                     validate: bool = False) -> CountReport:
    """N! times the mixed volume of the characteristic differences and the scalars, in sum x = 0."""
    if len(scalars) != arr.n:
        raise InputError(f"{arr.n} scalar polytopes are needed, got {len(scalars)}")
    for p in scalars:
        if p.ambient_dim != arr.N + 1:
            raise InputError(f"scalar polytopes must live in R^{arr.N + 1}")
        _audit_parallel(p)
    L = subspace_of(arr)
    return count_mixed(L, scalars, lattice=sum_zero_basis(arr.N + 1), validate=validate)


def standard_simplex(dim: int) -> LatticePolytope:
    return convex_hull(tuple(int(i == j) for j in range(dim)) for i in range(dim))


def generic_formula_count(arr: HyperplaneArrangement, scalars: Sequence[LatticePolytope]) -> Fraction:
    """N! times the mixed volume with the standard simplex repeated N - n times."""
    if len(scalars) != arr.n:
        raise InputError(f"{arr.n} scalar polytopes are needed, got {len(scalars)}")
    simplex = standard_simplex(arr.N + 1)
    slots = [simplex] * (arr.N - arr.n) + list(scalars)
    return factorial(arr.N) * mixed_volume_sublattice(slots, sum_zero_basis(arr.N + 1))


def random_generic_arrangement(n: int, N: int, seed: int, bound: int = 5,
                               max_attempts: int = 200) -> HyperplaneArrangement:
    rng = random.Random(seed)
    for _ in range(max_attempts):
        rows = [[rng.randint(-bound, bound) for _ in range(n + 1)] for _ in range(N + 1)]
        if any(not any(r) for r in rows):
            continue
        try:
            arr = HyperplaneArrangement.from_rows(rows)
        except PreconditionError:
            continue
        if arr.is_generic():
            return arr
    raise GenericityError(f"no generic arrangement found in {max_attempts} attempts")
