"""Integer lattice helpers: primitive vectors, saturated sublattices, coordinates."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from ..errors import PreconditionError
from ..ratlin import nullspace, rref, to_fraction


def primitive(v: Sequence) -> tuple[int, ...]:
    """Positive multiple of a nonzero rational vector with coprime integer entries."""
    fs = [to_fraction(x) for x in v]
    den = lcm(*(f.denominator for f in fs)) if fs else 1
    ints = [int(f * den) for f in fs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise PreconditionError("the zero vector has no primitive multiple")
    return tuple(x // g for x in ints)


def is_primitive_integral(v: Sequence) -> bool:
    fs = [to_fraction(x) for x in v]
    if any(f.denominator != 1 for f in fs):
        return False
    g = 0
    for f in fs:
        g = gcd(g, int(f))
    return g == 1


def integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each rational row by its denominators' lcm."""
    out = []
    for r in rows:
        fs = [to_fraction(x) for x in r]
        den = lcm(*(f.denominator for f in fs)) if fs else 1
        out.append([int(f * den) for f in fs])
    return out


def integer_kernel_basis(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^n : A x = 0} via unimodular column operations."""
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # columns of u track operations

    def colop(j, k, p, q, r, s):
        # (col_j, col_k) <- (p col_j + q col_k, r col_j + s col_k), determinant ±1
        for row in a:
            x, y = row[j], row[k]
            row[j], row[k] = p * x + q * y, r * x + s * y
        for row in u:
            x, y = row[j], row[k]
            row[j], row[k] = p * x + q * y, r * x + s * y

    c = 0
    for row in a:
        if c == n:
            break
        for k in range(c + 1, n):
            x, y = row[c], row[k]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            colop(c, k, s, t, -y // g, x // g)
        if row[c] != 0:
            c += 1
    return [tuple(u[i][j] for i in range(n)) for j in range(c, n)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def saturated_basis(vectors: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Z-basis of span(vectors) ∩ Z^n."""
    vs = [v for v in vectors if any(to_fraction(x) != 0 for x in v)]
    if not vs:
        return []
    ann = nullspace(vs, n)
    if not ann:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel_basis(integer_rows(ann), n)


def orthogonal_lattice_basis(xi: Sequence, n: int) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^n : <xi, x> = 0}."""
    return integer_kernel_basis(integer_rows([xi]), n)


class LatticeChart:
    """Coordinates of points of an affine sublattice anchor + span_Z(basis)."""

    def __init__(self, basis: Sequence[Sequence[int]], n: int):
        self.basis = [tuple(b) for b in basis]
        self.n = n
        self.k = len(self.basis)
        if self.k:
            red, pivots = rref(self.basis, n)
            if len(red) != self.k:
                raise PreconditionError("lattice basis is not linearly independent")
            self.pivots = pivots
            sub = [[Fraction(b[p]) for p in pivots] for b in self.basis]
            from ..ratlin import inverse
            self._inv = inverse(sub)
        else:
            self.pivots = ()
            self._inv = ()

    def coordinates(self, v: Sequence, strict: bool = True) -> tuple[Fraction, ...]:
        """t with sum t_i basis_i = v; raises if v is not in the span."""
        if not self.k:
            if any(to_fraction(x) != 0 for x in v):
                raise PreconditionError("point outside the sublattice span")
            return ()
        w = [to_fraction(v[p]) for p in self.pivots]
        t = tuple(sum((w[i] * self._inv[i][j] for i in range(self.k)), Fraction(0))
                  for j in range(self.k))
        if strict:
            back = [sum((t[i] * self.basis[i][j] for i in range(self.k)), Fraction(0))
                    for j in range(self.n)]
            if any(back[j] != to_fraction(v[j]) for j in range(self.n)):
                raise PreconditionError("point outside the sublattice span")
        return t
