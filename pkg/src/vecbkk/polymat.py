"""Polymatroids and matroids given by rank oracles.

Subsets of the ground set are bit masks over element positions.  Every
element may carry a character in Z^n; for arrangement-backed polymatroids
the label is the character itself.
"""

from __future__ import annotations

import threading
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import InputError, PreconditionError
from .polyhedra import LatticePolytope, convex_hull
from .ratlin import Subspace, subspace_sum, to_fraction

EXHAUSTIVE_LIMIT = 12


def _bits(mask: int) -> Iterable[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _submasks(mask: int) -> Iterable[int]:
    """All submasks of mask, including 0 and mask."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class Polymatroid:
    """Integer rank function on subsets of an ordered ground set.

    The memo is shared between threads; writes are idempotent because the
    oracle is deterministic, and the lock only keeps the dict consistent.
    """

    def __init__(self, ground: Sequence[Hashable], rank_fn: Callable[[int], int],
                 characters: Sequence[Sequence[int]] | None = None):
        self.ground = tuple(ground)
        if len(set(self.ground)) != len(self.ground):
            raise InputError("ground labels must be distinct")
        self._index = {g: i for i, g in enumerate(self.ground)}
        self._rank_fn = rank_fn
        self._memo: dict[int, int] = {0: 0}
        self._lock = threading.Lock()
        if characters is None and all(isinstance(g, tuple) and all(isinstance(x, int) for x in g)
                                      for g in self.ground):
            characters = self.ground
        self.characters = tuple(tuple(int(x) for x in c) for c in characters) if characters else None
        if self.characters is not None and len(self.characters) != len(self.ground):
            raise InputError("one character per ground element")

    @property
    def size(self) -> int:
        return len(self.ground)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def rank(self, mask: int) -> int:
        v = self._memo.get(mask)
        if v is None:
            v = int(self._rank_fn(mask))
            with self._lock:
                self._memo[mask] = v
        return v

    def mask_of(self, labels: Iterable[Hashable]) -> int:
        m = 0
        for g in labels:
            m |= 1 << self.index(g)
        return m

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown ground label {label!r}") from None

    def rank_of(self, labels: Iterable[Hashable]) -> int:
        return self.rank(self.mask_of(labels))

    @property
    def total_rank(self) -> int:
        return self.rank(self.full_mask)

    @property
    def n(self) -> int | None:
        return len(self.characters[0]) if self.characters else None

    def validate(self) -> None:
        """Exhaustive check of normalization, monotonicity and submodularity."""
        if self.size > EXHAUSTIVE_LIMIT:
            raise PreconditionError(f"exhaustive validation is limited to {EXHAUSTIVE_LIMIT} elements")
        for mask in range(1 << self.size):
            r = self.rank(mask)
            if r < 0:
                raise InputError(f"negative rank on subset {list(_bits(mask))}")
            for i in range(self.size):
                if mask >> i & 1:
                    continue
                ri = self.rank(mask | 1 << i)
                if ri < r:
                    raise InputError(f"rank decreases adding element {i} to {list(_bits(mask))}")
                for j in range(i + 1, self.size):
                    if mask >> j & 1:
                        continue
                    if ri + self.rank(mask | 1 << j) < self.rank(mask | 1 << i | 1 << j) + r:
                        raise InputError(
                            f"submodularity fails at {list(_bits(mask))} with elements {i}, {j}")
        if self.rank(0) != 0:
            raise InputError("rank of the empty set must be 0")

    def is_matroid(self) -> bool:
        return all(self.rank(1 << i) <= 1 for i in range(self.size)) and self._unit_increase()

    def _unit_increase(self) -> bool:
        if self.size > EXHAUSTIVE_LIMIT:
            return True  # singleton bound plus submodularity imply it
        return all(self.rank(m | 1 << i) - self.rank(m) <= 1
                   for m in range(1 << self.size) for i in range(self.size) if not m >> i & 1)

    def rank_table(self) -> dict[int, int]:
        return {m: self.rank(m) for m in range(1 << self.size)}

    def to_json(self) -> dict:
        out = {
            "ground": [list(g) if isinstance(g, tuple) else g for g in self.ground],
            "rank": [{"subset": list(_bits(m)), "value": v}
                     for m, v in sorted(self.rank_table().items())],
            "closure": "exhaustive",
        }
        if self.characters is not None and self.characters != self.ground:
            out["characters"] = [list(c) for c in self.characters]
        return out

    @classmethod
    def from_table(cls, ground, table: Mapping[int, int], characters=None) -> "Polymatroid":
        size = len(ground)
        missing = [m for m in range(1 << size) if m not in table]
        if missing:
            raise InputError(f"rank table misses {len(missing)} subsets, e.g. {list(_bits(missing[0]))}")
        return cls(ground, table.__getitem__, characters)


class Matroid(Polymatroid):
    """A polymatroid whose rank never exceeds cardinality."""

    def validate(self) -> None:
        super().validate()
        for m in range(1 << self.size):
            if self.rank(m) > bin(m).count("1"):
                raise InputError(f"rank exceeds size on subset {list(_bits(m))}")

    def is_independent(self, mask: int) -> bool:
        return self.rank(mask) == bin(mask).count("1")

    def independent_sets(self, size: int) -> list[int]:
        """Independent sets of the given size, as bit masks, found by extension."""
        level = [0]
        for _ in range(size):
            nxt = set()
            for m in level:
                top = m.bit_length()
                for i in range(top, self.size):
                    if self.is_independent(m | 1 << i):
                        nxt.add(m | 1 << i)
            level = sorted(nxt)
        return level


def polymatroid_from_json(obj: Mapping) -> Polymatroid:
    try:
        ground = [tuple(int(x) for x in g) if isinstance(g, list) else g for g in obj["ground"]]
        entries = obj["rank"]
        closure = obj.get("closure", "exhaustive")
        characters = obj.get("characters")
        table = {}
        for e in entries:
            m = 0
            for i in e["subset"]:
                if not 0 <= int(i) < len(ground):
                    raise InputError(f"subset index {i} out of range")
                m |= 1 << int(i)
            table[m] = int(e["value"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed polymatroid JSON: {exc}") from exc
    if closure != "exhaustive":
        raise InputError(f"unsupported closure {closure!r}; only 'exhaustive' tables are accepted")
    table.setdefault(0, 0)
    chars = [tuple(int(x) for x in c) for c in characters] if characters else None
    p = Polymatroid.from_table(ground, table, chars)
    if obj.get("matroid") or p.is_matroid():
        p = Matroid.from_table(ground, table, chars)
    return p


def from_arrangement(arr: Sequence[tuple[Hashable, Subspace]]) -> Polymatroid:
    """rank(S) = dimension of the sum of the subspaces indexed by S."""
    if not arr:
        raise InputError("empty arrangement")
    labels = [a for a, _ in arr]
    spaces = [s for _, s in arr]
    r = spaces[0].ambient_dim
    if any(s.ambient_dim != r for s in spaces):
        raise InputError("arrangement subspaces live in different ambient spaces")

    def rank_fn(mask: int) -> int:
        return subspace_sum([spaces[i] for i in _bits(mask)], r).dim

    return Polymatroid(labels, rank_fn)


def _multiplicities(p: Polymatroid, tuple_: Sequence[Hashable]) -> dict[int, int]:
    return dict(Counter(p.index(a) for a in tuple_))


def is_admissible(p: Polymatroid, tuple_: Sequence[Hashable]) -> bool:
    """Multiplicity of every sub-support S in the tuple is at most rank(S)."""
    mult = _multiplicities(p, tuple_)
    return _admissible_counts(p, mult)


def _admissible_counts(p: Polymatroid, mult: Mapping[int, int], must_contain: int = 0) -> bool:
    support = 0
    for i, k in mult.items():
        if k:
            support |= 1 << i
    for sub in _submasks(support):
        if sub == 0 or (must_contain and not sub & must_contain):
            continue
        if sum(mult[i] for i in _bits(sub)) > p.rank(sub):
            return False
    return True


def _dot(u, v) -> Fraction:
    return sum((to_fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def greedy_min_sequence(p: Polymatroid, xi: Sequence) -> list[tuple[Hashable, Fraction]]:
    """Greedy admissible sequence minimizing <xi, .>, with running sums.

    Elements are tried in order of (<xi, character>, character, label); each
    is repeated while the tuple stays admissible.
    """
    if p.characters is None:
        raise InputError("greedy needs characters on the ground set")
    if p.total_rank < 1:
        raise PreconditionError("greedy needs total rank at least 1")
    order = sorted(range(p.size), key=lambda i: (_dot(xi, p.characters[i]), p.characters[i], i))
    mult: dict[int, int] = {}
    out = []
    running = Fraction(0)
    for i in order:
        value = _dot(xi, p.characters[i])
        while len(out) < p.total_rank:
            mult[i] = mult.get(i, 0) + 1
            if not _admissible_counts(p, mult, must_contain=1 << i):
                mult[i] -= 1
                break
            running += value
            out.append((p.ground[i], running))
        if len(out) == p.total_rank:
            break
    return out


def natural_matroid(p: Polymatroid) -> Matroid:
    """rank({a} copies) replaced by that many parallel-free copies of each element.

    Ground labels are (label, copy); characters are inherited.  The rank of a
    subset T is min over label sets S of rank(S) + #(elements of T outside S).
    """
    labels, chars, owner = [], [], []
    for i, g in enumerate(p.ground):
        for c in range(p.rank(1 << i)):
            labels.append((g, c))
            owner.append(i)
            if p.characters is not None:
                chars.append(p.characters[i])

    def rank_fn(mask: int) -> int:
        counts: Counter = Counter(owner[j] for j in _bits(mask))
        support = 0
        for i in counts:
            support |= 1 << i
        best = None
        for sub in _submasks(support):
            outside = sum(k for i, k in counts.items() if not sub >> i & 1)
            v = p.rank(sub) + outside
            if best is None or v < best:
                best = v
        return best or 0

    m = Matroid(labels, rank_fn, chars if p.characters is not None else None)
    m.owner = tuple(owner)
    return m


def natural_matroid_rank_bruteforce(p: Polymatroid, m: Matroid, mask: int) -> int:
    """Largest admissible sub-multiset of the copies in mask, by enumeration."""
    owner = m.owner
    caps = Counter(owner[j] for j in _bits(mask))
    idx = sorted(caps)
    best = 0
    for choice in product(*(range(caps[i] + 1) for i in idx)):
        size = sum(choice)
        if size > best and _admissible_counts(p, dict(zip(idx, choice))):
            best = size
    return best


def dual_matroid(m: Matroid) -> Matroid:
    if not isinstance(m, Matroid) and not m.is_matroid():
        raise PreconditionError("dual is defined for matroids only")
    full = m.full_mask
    total = m.total_rank

    def rank_fn(mask: int) -> int:
        return bin(mask).count("1") + m.rank(full & ~mask) - total

    return Matroid(m.ground, rank_fn, m.characters)


def uniform_matroid(rank: int, size: int, characters=None, labels=None) -> Matroid:
    labels = labels if labels is not None else list(range(size))
    return Matroid(labels, lambda mask: min(bin(mask).count("1"), rank), characters)


def independence_polytope(m: Matroid, i: int) -> LatticePolytope:
    """Hull of indicator vectors of the size-i independent sets, in R^|ground|."""
    if not 0 <= i <= m.total_rank:
        raise PreconditionError(f"size {i} outside 0..{m.total_rank}")
    k = m.size
    pts = [tuple(int(mask >> j & 1) for j in range(k)) for mask in m.independent_sets(i)]
    return convex_hull(pts)


def admissible_by_selection(spaces: Sequence[Subspace], mult: Sequence[int]) -> bool:
    """Whether independent vectors can be picked from spanning sets with the given multiplicities.

    Uses the stored echelon basis of each subspace as its spanning set and
    searches selections exhaustively.
    """
    r = spaces[0].ambient_dim if spaces else 0
    chosen: list = []

    def search(i: int, need: int, start: int) -> bool:
        if i == len(spaces):
            return True
        if need == 0:
            return search(i + 1, mult[i + 1] if i + 1 < len(spaces) else 0, 0)
        basis = spaces[i].basis
        for j in range(start, len(basis)):
            chosen.append(basis[j])
            if subspace_sum([Subspace.span(chosen, r)], r).dim == len(chosen):
                if search(i, need - 1, j + 1):
                    chosen.pop()
                    return True
            chosen.pop()
        return False

    if not spaces:
        return True
    return search(0, mult[0], 0)
