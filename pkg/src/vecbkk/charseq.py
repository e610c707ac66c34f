"""Invariant subspaces, characteristic polytopes and multi-valued support functions."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import InputError, PreconditionError
from .polymat import Polymatroid, _admissible_counts, from_arrangement
from .polyhedra import (Fan, LatticePolytope, VirtualPolytope, convex_hull, face,
                        linearity_witness, minkowski_sum, minkowski_sum_all, normal_fan,
                        saturated_basis, support_value)
from .polyhedra.lattice import LatticeChart
from .ratlin import (Flag, Subspace, change_of_basis, compatible_decomposition, generic_flag,
                     apply_row, is_transverse, subset_sums, subspace_sum, to_fraction, vec)

Character = tuple  # tuple[int, ...]


def _dot(xi, alpha) -> Fraction:
    return sum((a * b for a, b in zip(xi, alpha)), Fraction(0))


class InvariantSubspace:
    """Characters in Z^n, each with a nonzero subspace of Q^r summing to Q^r.

    If the given subspaces sum to a proper subspace S, everything is
    rewritten in coordinates of S and ``normalized_from`` keeps the original r.
    Duplicate characters are an error unless ``merge`` is set, in which case
    their subspaces are added.
    """

    def __init__(self, characters: Sequence[Sequence[int]], subspaces: Sequence[Subspace],
                 n: int | None = None, merge: bool = False):
        chars = [tuple(int(x) for x in a) for a in characters]
        if len(chars) != len(subspaces):
            raise InputError("one subspace per character")
        if n is None:
            if not chars:
                raise InputError("an empty invariant subspace needs an explicit n")
            n = len(chars[0])
        if any(len(a) != n for a in chars):
            raise InputError(f"characters must lie in Z^{n}")
        merged: dict[Character, Subspace] = {}
        for a, s in zip(chars, subspaces):
            if a in merged:
                if not merge:
                    raise InputError(f"duplicate character {list(a)}; pass merge=True to add subspaces")
                merged[a] = merged[a] + s
            else:
                merged[a] = s
        for a, s in merged.items():
            if s.dim == 0:
                raise InputError(f"subspace for character {list(a)} is zero")
        dims = {s.ambient_dim for s in merged.values()}
        if len(dims) > 1:
            raise InputError("subspaces live in different ambient spaces")
        r = dims.pop() if dims else 0
        self.normalized_from = None
        if merged:
            total = subspace_sum(list(merged.values()))
            if not total.is_full():
                self.normalized_from = r
                merged = {a: Subspace.span([total.coordinates(b) for b in s.basis], total.dim)
                          for a, s in merged.items()}
                r = total.dim
        self.n = n
        self.r = r
        self.characters: tuple[Character, ...] = tuple(merged)
        self.subspaces: tuple[Subspace, ...] = tuple(merged.values())

    def __repr__(self) -> str:
        return f"InvariantSubspace(n={self.n}, r={self.r}, characters={[list(a) for a in self.characters]})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, InvariantSubspace) and self.n == other.n and self.r == other.r
                and dict(self.items()) == dict(other.items()))

    def __hash__(self):
        return hash((self.n, self.r, frozenset(self.items())))

    def items(self):
        return zip(self.characters, self.subspaces)

    def subspace(self, alpha: Sequence[int]) -> Subspace:
        a = tuple(alpha)
        for b, s in self.items():
            if b == a:
                return s
        return Subspace.zero(self.r)

    @cached_property
    def polymatroid(self) -> Polymatroid:
        if not self.characters:
            return Polymatroid((), lambda mask: 0, ())
        return from_arrangement(list(self.items()))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "characters": [list(a) for a in self.characters],
            "subspaces": [[[str(x) for x in row] for row in s.basis] for s in self.subspaces],
        }

    @classmethod
    def from_json(cls, obj: dict, merge: bool = False) -> "InvariantSubspace":
        try:
            n = int(obj["n"])
            r = int(obj["r"])
            chars = [tuple(int(x) for x in a) for a in obj["characters"]]
            spaces = [Subspace.span([[to_fraction(x) for x in row] for row in rows], r)
                      for rows in obj["subspaces"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed invariant subspace JSON: {exc}") from exc
        return cls(chars, spaces, n=n, merge=merge)


def _source_polymatroid(src) -> Polymatroid:
    if isinstance(src, InvariantSubspace):
        return src.polymatroid
    if isinstance(src, Polymatroid):
        if src.characters is None:
            raise InputError("polymatroid needs characters in Z^n")
        return src
    raise InputError(f"expected an invariant subspace or polymatroid, got {type(src).__name__}")


def _source_n(src) -> int:
    return src.n if isinstance(src, InvariantSubspace) else len(src.characters[0])


@dataclass(frozen=True)
class CharacteristicSequence:
    """Delta_0 = {0}, Delta_1, ..., Delta_r."""

    n: int
    polytopes: tuple[LatticePolytope, ...]

    @property
    def r(self) -> int:
        return len(self.polytopes) - 1

    def __getitem__(self, i: int) -> LatticePolytope:
        return self.polytopes[i]

    def differences(self) -> list[VirtualPolytope]:
        """Delta_i - Delta_{i-1} for i = 1..r; the point Delta_0 = {0} is dropped."""
        out = [VirtualPolytope.of(self.polytopes[1])] if self.r else []
        for i in range(2, self.r + 1):
            out.append(VirtualPolytope.difference(self.polytopes[i], self.polytopes[i - 1]))
        return out

    def total(self) -> LatticePolytope:
        return minkowski_sum_all(list(self.polytopes[1:]), self.n)

    @property
    def spans_torus(self) -> bool:
        """Whether Delta_1 + ... + Delta_r is full-dimensional.

        Every Delta_i is parallel to a subspace of the span of character
        differences, which Delta_1 already spans, so Delta_1 decides.
        """
        return self.r > 0 and self.polytopes[1].is_full_dimensional


def characteristic_polytopes(src) -> CharacteristicSequence:
    """Hulls of sums of admissible i-tuples, enumerated as multisets by pruned DFS."""
    p = _source_polymatroid(src)
    n = _source_n(src)
    r = p.total_rank
    chars = p.characters or ()
    caps = [p.rank(1 << i) for i in range(p.size)]
    sums: list[set] = [set() for _ in range(r + 1)]
    mult: dict[int, int] = {}

    def dfs(start: int, size: int, total: tuple[int, ...]) -> None:
        sums[size].add(total)
        if size == r:
            return
        for i in range(start, p.size):
            if mult.get(i, 0) >= caps[i]:
                continue
            mult[i] = mult.get(i, 0) + 1
            if _admissible_counts(p, mult, must_contain=1 << i):
                dfs(i, size + 1, tuple(a + b for a, b in zip(total, chars[i])))
            mult[i] -= 1

    dfs(0, 0, (0,) * n)
    polys = tuple(convex_hull(s) for s in sums)
    return CharacteristicSequence(n, polys)


@dataclass(frozen=True)
class CriticalData:
    """Jumps (c_j, d_j) of the filtration c -> sum of E_alpha with <xi, alpha> <= c."""

    xi: tuple[Fraction, ...]
    pairs: tuple[tuple[Fraction, int], ...]
    flag: Flag

    def multiset(self) -> tuple[Fraction, ...]:
        out, prev = [], 0
        for c, d in self.pairs:
            out.extend([c] * (d - prev))
            prev = d
        return tuple(out)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(c for c, _ in self.pairs)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.pairs)


def critical_data(L: InvariantSubspace, xi: Sequence) -> CriticalData:
    xi = vec(xi)
    if len(xi) != L.n:
        raise InputError(f"direction must have {L.n} coordinates")
    by_value: dict[Fraction, list[Subspace]] = {}
    for a, s in L.items():
        by_value.setdefault(_dot(xi, a), []).append(s)
    acc = Subspace.zero(L.r)
    pairs, members = [], []
    for c in sorted(by_value):
        acc = subspace_sum([acc] + by_value[c])
        if not members or acc.dim > members[-1].dim:
            pairs.append((c, acc.dim))
            members.append(acc)
    return CriticalData(xi, tuple(pairs), Flag(L.r, tuple(members), tuple(c for c, _ in pairs)))


class MultiSupportFunction:
    """h_i = h(Delta_i) - h(Delta_{i-1}); values come out ascending."""

    def __init__(self, sequence: CharacteristicSequence):
        self.sequence = sequence
        self.terms = sequence.differences()

    @property
    def r(self) -> int:
        return self.sequence.r

    def __call__(self, xi: Sequence) -> tuple[Fraction, ...]:
        return self.evaluate(xi)

    def evaluate(self, xi: Sequence) -> tuple[Fraction, ...]:
        xi = vec(xi)
        hs = [support_value(p, xi) for p in self.sequence.polytopes]
        return tuple(hs[i] - hs[i - 1] for i in range(1, len(hs)))

    def partial_sums(self, xi: Sequence) -> tuple[Fraction, ...]:
        xi = vec(xi)
        return tuple(support_value(p, xi) for p in self.sequence.polytopes[1:])


def multi_support(src) -> MultiSupportFunction:
    return MultiSupportFunction(characteristic_polytopes(src))


def _block_embed(s: Subspace, offset: int, total: int) -> list[tuple[Fraction, ...]]:
    z = Fraction(0)
    return [(z,) * offset + tuple(b) + (z,) * (total - offset - s.ambient_dim) for b in s.basis]


def sample_directions(n: int, count: int, seed: int, bound: int = 6) -> list[tuple[Fraction, ...]]:
    """Deterministic directions with small rational entries, plus the signed unit vectors."""
    rng = random.Random(seed)
    out = []
    for i in range(n):
        for sgn in (1, -1):
            out.append(tuple(Fraction(sgn * (i == j)) for j in range(n)))
    for _ in range(count):
        out.append(tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in range(n)))
    return out


def direct_sum(L1: InvariantSubspace, L2: InvariantSubspace, check: bool = True,
               samples: int = 12, seed: int = 0) -> InvariantSubspace:
    """Block-diagonal sum in Q^(r1 + r2) over the union of characters.

    With check=True the multi-valued support function of the result is
    compared with the merged values of the factors on a direction sample.
    """
    if L1.n != L2.n:
        raise InputError("direct sum of invariant subspaces over different tori")
    r = L1.r + L2.r
    rows: dict[Character, list] = {}
    for a, s in L1.items():
        rows.setdefault(a, []).extend(_block_embed(s, 0, r))
    for a, s in L2.items():
        rows.setdefault(a, []).extend(_block_embed(s, L1.r, r))
    chars = sorted(rows)
    out = InvariantSubspace(chars, [Subspace.span(rows[a], r) for a in chars], n=L1.n)
    if check and L1.r and L2.r:
        h, h1, h2 = multi_support(out), multi_support(L1), multi_support(L2)
        for xi in sample_directions(L1.n, samples, seed):
            if h(xi) != tuple(sorted(h1(xi) + h2(xi))):
                raise AssertionError(f"direct sum merge check failed at {xi}")
    return out


def concatenated_representation(*factors: InvariantSubspace) -> list[VirtualPolytope]:
    """Canonical terms of each factor, concatenated; a non-canonical representation of the sum."""
    out: list[VirtualPolytope] = []
    for L in factors:
        out.extend(multi_support(L).terms)
    return out


def _projection_rows(kernel: Subspace) -> list[tuple[Fraction, ...]]:
    return list(kernel.annihilator().basis)


def project(L: InvariantSubspace, kernel: Subspace | None = None, seed: int | None = None,
            kernel_dim: int | None = None, validate: bool = False) -> InvariantSubspace:
    """Image of L under a quotient map Q^r -> Q^r / K with K generic for the arrangement.

    Either pass `kernel`, or `kernel_dim` with `seed` to draw K from a
    seeded generic flag.
    """
    if kernel is None:
        if kernel_dim is None:
            raise InputError("pass a kernel or a kernel dimension with a seed")
        if not 0 <= kernel_dim < L.r:
            raise PreconditionError(f"kernel dimension must be in 0..{L.r - 1}")
        if kernel_dim == 0:
            kernel = Subspace.zero(L.r)
        else:
            kernel = generic_flag(list(L.subspaces), seed or 0).subspaces[kernel_dim - 1]
    if kernel.ambient_dim != L.r:
        raise InputError("kernel lives in a different space")
    if kernel.dim >= L.r:
        raise PreconditionError("kernel must be a proper subspace")
    for s, witness in subset_sums(list(L.subspaces)).items():
        if not is_transverse(kernel, s):
            raise PreconditionError(
                "kernel is not generic: fails transversality with the sum over characters "
                f"{[list(L.characters[i]) for i in witness]}")
    rows = _projection_rows(kernel)
    k = len(rows)

    def image(s: Subspace) -> Subspace:
        return Subspace.span([tuple(sum((y[j] * b[j] for j in range(L.r)), Fraction(0))
                                    for y in rows) for b in s.basis], k)

    out = InvariantSubspace(L.characters, [image(s) for s in L.subspaces], n=L.n)
    if validate:
        before = characteristic_polytopes(L)
        after = characteristic_polytopes(out)
        if before.polytopes[:k + 1] != after.polytopes:
            raise AssertionError("projection changed the leading characteristic polytopes")
    return out


def fan_of(src, audit: bool = True) -> Fan:
    """Normal fan of Delta_1 + ... + Delta_r, on which every h_i is linear."""
    seq = characteristic_polytopes(src)
    total = seq.total()
    if not total.is_full_dimensional:
        raise PreconditionError(
            f"Delta_1 spans an affine subspace of dimension {seq[1].dim} < {seq.n}; "
            "apply quotient_reduction first")
    fan = normal_fan(total)
    if audit:
        for i, p in enumerate(seq.polytopes[1:], 1):
            w = linearity_witness(p, fan)
            if w is not None:
                raise AssertionError(f"h_{i} is not linear on cone {w[0]}")
    return fan


@dataclass(frozen=True)
class QuotientReduction:
    """Characters rewritten as coordinates of (alpha - anchor) in a saturated lattice basis."""

    source: object
    reduced: object
    anchor: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    def reduce_polytope(self, p: LatticePolytope, level: int = 1) -> LatticePolytope:
        """Coordinates of p - level * anchor in the reduced lattice."""
        chart = LatticeChart(self.basis, len(self.anchor))
        shift = tuple(level * a for a in self.anchor)
        return convex_hull(chart.coordinates(tuple(x - s for x, s in zip(v, shift)))
                           for v in p.vertices)


def quotient_reduction(src) -> QuotientReduction:
    """Pass to the saturation of the lattice spanned by differences of characters."""
    p = _source_polymatroid(src)
    chars = list(p.characters)
    n = len(chars[0])
    anchor = min(chars)
    diffs = [tuple(a - b for a, b in zip(c, anchor)) for c in chars]
    basis = saturated_basis(diffs, n)
    chart = LatticeChart(basis, n)
    new_chars = [tuple(int(x) for x in chart.coordinates(d)) for d in diffs]
    k = len(basis)
    if isinstance(src, InvariantSubspace):
        reduced = InvariantSubspace(new_chars, list(src.subspaces), n=k)
    else:
        cls = type(src)
        reduced = cls(p.ground, p.rank, new_chars)
    return QuotientReduction(src, reduced, anchor, tuple(basis))


def truncate(L: InvariantSubspace, xi: Sequence, seed: int = 0) -> list[InvariantSubspace]:
    """L^xi_i = sum over <xi, alpha> = c_i of pi_i(E_alpha), in coordinates of V_i."""
    return truncation_data(L, xi, seed)[2]


def truncation_data(L: InvariantSubspace, xi: Sequence, seed: int = 0):
    """(critical data, decomposition V_1..V_k, truncated subspaces)."""
    cd = critical_data(L, xi)
    w = generic_flag(list(L.subspaces), seed)
    parts = compatible_decomposition(cd.flag, w)
    inv, blocks = change_of_basis(parts)
    out = []
    for level, (c, block) in enumerate(zip(cd.values, blocks)):
        chars, spaces = [], []
        for a, s in L.items():
            if _dot(cd.xi, a) != c:
                continue
            img = Subspace.span([tuple(apply_row(b, inv)[j] for j in block) for b in s.basis],
                                len(block))
            if img.dim:
                chars.append(a)
                spaces.append(img)
        out.append(InvariantSubspace(chars, spaces, n=L.n))
    return cd, parts, out


@dataclass
class TruncationReport:
    xi: tuple[Fraction, ...]
    dims: tuple[int, ...]
    rows: list[dict] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(r["holds"] for r in self.rows)

    def to_json(self) -> dict:
        return {"xi": [str(x) for x in self.xi], "dims": list(self.dims),
                "rows": self.rows, "all_hold": self.all_hold}


def check_truncation_theorem(L: InvariantSubspace, xi: Sequence, seed: int = 0) -> TruncationReport:
    """Face of Delta_j at xi = Delta^i_{j - d_{i-1}} + face of Delta_{d_{i-1}} at xi.

    i is the level with d_{i-1} < j <= d_i and Delta^i is the characteristic
    sequence of the i-th truncation.
    """
    seq = characteristic_polytopes(L)
    cd, _, truncs = truncation_data(L, xi, seed)
    faces = [face(p, cd.xi) for p in seq.polytopes]
    report = TruncationReport(cd.xi, cd.dims)
    prev = 0
    for i, (d, t) in enumerate(zip(cd.dims, truncs), 1):
        tseq = characteristic_polytopes(t) if t.r else None
        for j in range(prev + 1, d + 1):
            rhs = minkowski_sum(tseq[j - prev], faces[prev])
            report.rows.append({"i": i, "j": j, "holds": rhs.vertices == faces[j].vertices})
        prev = d
    return report
