"""Exact linear algebra over the rationals.

Vectors are tuples of ``Fraction``; matrices are tuples of row tuples.  A
subspace is stored by the reduced row echelon form of a basis, which is unique,
so two ``Subspace`` objects compare (and hash) equal exactly when they are the
same subspace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import GenericityError, InputError, PreconditionError

Vector = tuple  # tuple[Fraction, ...]


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"not a rational: {x!r}")


def vec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row echelon form of the row space; returns (nonzero rows, pivot columns)."""
    m = [list(map(to_fraction, r)) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise InputError(f"row of length {len(r)} in a matrix with {ncols} columns")
    pivots: list[int] = []
    lead = 0
    for col in range(ncols):
        piv = None
        for i in range(lead, len(m)):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[lead], m[piv] = m[piv], m[lead]
        inv = 1 / m[lead][col]
        m[lead] = [x * inv for x in m[lead]]
        for i in range(len(m)):
            if i != lead and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[lead])]
        pivots.append(col)
        lead += 1
        if lead == len(m):
            break
    return tuple(tuple(r) for r in m[:lead]), tuple(pivots)


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Vector, ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        entries = tuple(vec(r) for r in rows)
        if cols is None:
            if not entries:
                raise InputError("cannot infer the column count of an empty matrix")
            cols = len(entries[0])
        if any(len(r) != cols for r in entries):
            raise InputError("ragged matrix")
        return cls(len(entries), cols, entries)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         tuple(tuple(r[j] for r in self.entries) for j in range(self.cols)))


def rank(m: RatMatrix | Sequence[Sequence]) -> int:
    if isinstance(m, RatMatrix):
        return len(rref(m.entries, m.cols)[0])
    m = list(m)
    if not m:
        return 0
    return len(rref(m, len(m[0]))[0])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {x : row . x = 0 for every row}."""
    red, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in zip(red, pivots):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """One solution of A x = b, or None when the system is inconsistent."""
    ncols = len(rows[0])
    aug = [list(map(to_fraction, r)) + [to_fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in zip(red, pivots):
        x[p] = r[ncols]
    return tuple(x)


def inverse(rows: Sequence[Sequence]) -> tuple[Vector, ...]:
    n = len(rows)
    aug = [list(map(to_fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug, 2 * n)
    if tuple(pivots[:n]) != tuple(range(n)) or len(red) < n:
        raise PreconditionError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red)


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [list(map(to_fraction, r)) for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim stored by its reduced echelon basis."""

    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vs = [vec(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vs):
            raise InputError(f"vector length differs from ambient dimension {ambient_dim}")
        return cls(ambient_dim, rref(vs, ambient_dim)[0] if vs else ())

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(
            tuple(Fraction(int(i == j)) for j in range(ambient_dim)) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def __add__(self, other: "Subspace") -> "Subspace":
        _same_ambient(self, other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def annihilator(self) -> "Subspace":
        """{y : y . v = 0 for all v in self}."""
        return Subspace.span(nullspace(self.basis, self.ambient_dim), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        _same_ambient(self, other)
        return (self.annihilator() + other.annihilator()).annihilator()

    def contains(self, v: Sequence) -> bool:
        return rank(list(self.basis) + [vec(v)]) == self.dim if self.basis else all(
            to_fraction(x) == 0 for x in v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return (self + other).dim == self.dim

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of v in the stored echelon basis (v must lie in the subspace)."""
        _, pivots = rref(self.basis, self.ambient_dim) if self.basis else ((), ())
        coords = tuple(to_fraction(v[p]) for p in pivots)
        back = tuple(sum((c * b[j] for c, b in zip(coords, self.basis)), Fraction(0))
                     for j in range(self.ambient_dim))
        if back != vec(v):
            raise PreconditionError("vector does not lie in the subspace")
        return coords


def _same_ambient(*spaces: Subspace) -> None:
    dims = {s.ambient_dim for s in spaces}
    if len(dims) > 1:
        raise InputError(f"ambient dimension mismatch: {sorted(dims)}")


def subspace_sum(spaces: Sequence[Subspace], ambient_dim: int | None = None) -> Subspace:
    if not spaces:
        if ambient_dim is None:
            raise InputError("empty sum needs an explicit ambient dimension")
        return Subspace.zero(ambient_dim)
    _same_ambient(*spaces)
    return Subspace.span([b for s in spaces for b in s.basis], spaces[0].ambient_dim)


def is_transverse(w: Subspace, s: Subspace) -> bool:
    """dim(W ∩ S) = max(0, dim W + dim S - r), checked through dim(W + S)."""
    r = w.ambient_dim
    return (w + s).dim == min(r, w.dim + s.dim)


@dataclass(frozen=True)
class Flag:
    """Strictly increasing chain of subspaces, optionally labelled by increasing rationals."""

    ambient_dim: int
    subspaces: tuple[Subspace, ...]
    labels: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        for a, b in zip(self.subspaces, self.subspaces[1:]):
            if not (b.contains_subspace(a) and b.dim > a.dim):
                raise InputError("flag members must be strictly increasing")
        if self.labels is not None:
            if len(self.labels) != len(self.subspaces):
                raise InputError("one label per flag member")
            if any(x >= y for x, y in zip(self.labels, self.labels[1:])):
                raise InputError("flag labels must be strictly increasing")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.subspaces)

    def is_complete(self) -> bool:
        return self.dims == tuple(range(1, self.ambient_dim + 1))


def subset_sums(arrangement: Sequence[Subspace]) -> dict[Subspace, tuple[int, ...]]:
    """Every distinct sum over a nonempty subset, mapped to one subset producing it.

    Equivalent to the exhaustive 2^|A| - 1 enumeration: coinciding sums are merged
    as they appear, so the work is bounded by the number of distinct subspaces.
    """
    if not arrangement:
        return {}
    _same_ambient(*arrangement)
    sums: dict[Subspace, tuple[int, ...]] = {}
    for i, e in enumerate(arrangement):
        new = {e: (i,)}
        for s, witness in sums.items():
            t = s + e
            if t not in sums and t not in new:
                new[t] = witness + (i,)
        for t, witness in new.items():
            sums.setdefault(t, witness)
    return sums


def _random_vector(rng: random.Random, r: int) -> Vector:
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(r))


def generic_flag(arrangement: Sequence[Subspace], seed: int, max_attempts: int = 64,
                 ambient_dim: int | None = None) -> Flag:
    """A complete flag whose members are transverse to every subset sum of the arrangement."""
    if not arrangement and ambient_dim is None:
        raise InputError("generic_flag needs a nonempty arrangement")
    r = arrangement[0].ambient_dim if arrangement else ambient_dim
    sums = list(subset_sums(arrangement))
    rng = random.Random(seed)
    for _ in range(max_attempts):
        vs = [_random_vector(rng, r) for _ in range(r)]
        members = [Subspace.span(vs[:i], r) for i in range(1, r + 1)]
        if any(m.dim != i for i, m in enumerate(members, 1)):
            continue
        if all(is_transverse(w, s) for w in members for s in sums):
            return Flag(r, tuple(members))
    raise GenericityError(f"no generic flag found in {max_attempts} attempts (seed {seed})")


def generic_subspace(arrangement: Sequence[Subspace], dim: int, seed: int,
                     max_attempts: int = 64) -> Subspace:
    """A dim-dimensional member of a seeded generic flag (0 gives the zero space)."""
    if dim == 0:
        return Subspace.zero(arrangement[0].ambient_dim)
    return generic_flag(arrangement, seed, max_attempts).subspaces[dim - 1]


def compatible_decomposition(f: Flag, w: Flag) -> list[Subspace]:
    """Split a partial flag F_1 < ... < F_k = E into V_1 + ... + V_k using a generic flag.

    V_1 = F_1 and V_i = W_j ∩ F_i with j = r - dim F_{i-1}; transversality makes
    W_j ∩ F_i a complement of F_{i-1} inside F_i.
    """
    r = f.ambient_dim
    if w.ambient_dim != r or not w.is_complete():
        raise PreconditionError("second argument must be a complete flag in the same space")
    if not f.subspaces or not f.subspaces[-1].is_full():
        raise PreconditionError("partial flag must end with the full space")
    parts = [f.subspaces[0]]
    for i in range(1, len(f.subspaces)):
        prev, cur = f.subspaces[i - 1], f.subspaces[i]
        j = r - prev.dim
        v = w.subspaces[j - 1].intersect(cur)
        if v.dim != cur.dim - prev.dim or (v + prev).dim != cur.dim:
            raise PreconditionError(
                f"generic flag is not transverse to flag member F_{i + 1} (dim {cur.dim})")
        parts.append(v)
    return parts


def change_of_basis(parts: Sequence[Subspace]) -> tuple[tuple[Vector, ...], list[range]]:
    """Inverse of the matrix whose rows are the concatenated bases of a direct sum.

    Returns (inverse, blocks) so that v @ inverse gives coordinates and
    blocks[i] selects the coordinates belonging to parts[i].
    """
    rows = [b for p in parts for b in p.basis]
    blocks, start = [], 0
    for p in parts:
        blocks.append(range(start, start + p.dim))
        start += p.dim
    return inverse(rows), blocks


def apply_row(v: Sequence, m: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    cols = len(m[0]) if m else 0
    return tuple(sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(cols))
