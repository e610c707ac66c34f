"""Self-check suite run by ``vecbkk validate``.

Checks are top-level functions of (input JSON, seed) so that a process
pool can run them; the report lists them in a fixed order and carries no
timings, which keeps it byte-identical across runs and worker counts.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable

from .afcheck import af_polytopes, aux_identity, aux_reduction_demo
from .bkk import count_solutions, minkowski_weights
from .charseq import (InvariantSubspace, characteristic_polytopes, check_truncation_theorem,
                      critical_data, fan_of, multi_support, quotient_reduction, sample_directions)
from .errors import VecBKKError
from .fixtures import load_source
from .klyachko import top_chern_degree, verify_compatibility
from .polymat import EXHAUSTIVE_LIMIT, Matroid, greedy_min_sequence, natural_matroid
from .polyhedra import (VirtualPolytope, convex_hull, minkowski_sum_all, mixed_volume_recursive,
                        mixed_volume_virtual, normal_fan, support_value)
from .polyhedra.fan import strict_refinement

FAST_DIRECTIONS = 20
FULL_DIRECTIONS = 200
RECURSION_LIMIT = 3  # ambient dimension up to which the ray recursion is affordable
AUX_LIMIT = 7  # n + k up to which the auxiliary identities run
FAN_LIMIT = 4  # normal fans of the summed sequence grow too large beyond this


class Skip(Exception):
    pass


def _full_dim(src):
    """The source itself, or its quotient reduction when Delta_1 is not full-dimensional."""
    seq = characteristic_polytopes(src)
    if seq.r and not seq.spans_torus:
        return quotient_reduction(src).reduced
    return src


def _subspace(src) -> InvariantSubspace:
    if not isinstance(src, InvariantSubspace):
        raise Skip("needs an invariant subspace")
    return src


def check_polymatroid(src, seed: int, level: str) -> dict:
    p = src.polymatroid if isinstance(src, InvariantSubspace) else src
    if p.size > EXHAUSTIVE_LIMIT:
        raise Skip(f"more than {EXHAUSTIVE_LIMIT} elements")
    p.validate()
    return {"pass": True, "elements": p.size, "rank": p.total_rank}


def check_greedy(src, seed: int, level: str) -> dict:
    p = src.polymatroid if isinstance(src, InvariantSubspace) else src
    if p.total_rank == 0:
        raise Skip("rank 0")
    seq = characteristic_polytopes(src)
    count = FULL_DIRECTIONS if level == "full" else FAST_DIRECTIONS
    dirs = sample_directions(seq.n, count, seed)
    for xi in dirs:
        greedy = [s for _, s in greedy_min_sequence(p, xi)]
        hull = [support_value(seq[i], xi) for i in range(1, seq.r + 1)]
        if greedy != hull:
            return {"pass": False, "xi": [str(x) for x in xi]}
    return {"pass": True, "directions": len(dirs)}


def check_critical_data(src, seed: int, level: str) -> dict:
    L = _subspace(src)
    if L.r == 0:
        raise Skip("rank 0")
    h = multi_support(L)
    count = FULL_DIRECTIONS if level == "full" else FAST_DIRECTIONS
    dirs = sample_directions(L.n, count, seed)
    for xi in dirs:
        if critical_data(L, xi).multiset() != tuple(sorted(h(xi))):
            return {"pass": False, "xi": [str(x) for x in xi]}
    return {"pass": True, "directions": len(dirs)}


def check_fan(src, seed: int, level: str) -> dict:
    red = _full_dim(src)
    if characteristic_polytopes(red).n > FAN_LIMIT:
        raise Skip(f"fan audit limited to dimension {FAN_LIMIT}")
    fan = fan_of(red)
    audit = fan.audit(seed=seed)
    return {"pass": audit["complete"], "rays": len(fan.rays), "cones": len(fan.maximal_cones),
            "problems": audit["problems"]}


def _padded_terms(src) -> list[VirtualPolytope]:
    seq = characteristic_polytopes(src)
    n = seq.n
    simplex = convex_hull([(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)])
    return seq.differences() + [VirtualPolytope.of(simplex)] * (n - seq.r)


def check_mixed_routes(src, seed: int, level: str) -> dict:
    red = _full_dim(src)
    if characteristic_polytopes(red).n > RECURSION_LIMIT:
        raise Skip(f"ray recursion limited to dimension {RECURSION_LIMIT}")
    terms = _padded_terms(red)
    a = mixed_volume_virtual(terms)
    big = minkowski_sum_all([q for t in terms for _, q in t.terms])
    b = mixed_volume_recursive(terms, normal_fan(big)) if big.is_full_dimensional else Fraction(0)
    return {"pass": a == b, "polarization": str(a), "recursion": str(b)}


def _count_or_skip(src):
    seq = characteristic_polytopes(src)
    if seq.r != seq.n:
        raise Skip("rank differs from n")
    return count_solutions(src)


def check_count(src, seed: int, level: str) -> dict:
    rep = _count_or_skip(src)
    ok = rep.count.denominator == 1 and rep.count >= 0
    return {"pass": ok, "count": str(rep.count)}


def check_truncation(src, seed: int, level: str) -> dict:
    L = _full_dim(_subspace(src))
    if L.r == 0:
        raise Skip("rank 0")
    fan = fan_of(L)
    dirs = [tuple(Fraction(x) for x in r) for r in fan.rays] + sample_directions(L.n, 20, seed)[2 * L.n:]
    for xi in dirs:
        if not check_truncation_theorem(L, xi, seed).all_hold:
            return {"pass": False, "xi": [str(x) for x in xi]}
    return {"pass": True, "directions": len(dirs)}


def check_klyachko(src, seed: int, level: str) -> dict:
    L = _full_dim(_subspace(src))
    fan = fan_of(L)
    finer = strict_refinement(fan, seed)
    own, refined = verify_compatibility(L, fan, seed), verify_compatibility(L, finer, seed)
    return {"pass": own.passes and refined.passes, "own_fan": own.passes, "refinement": refined.passes}


def check_top_chern(src, seed: int, level: str) -> dict:
    L = _subspace(src)
    rep = _count_or_skip(L)
    degree = top_chern_degree(L, seed=seed)
    return {"pass": degree == rep.count, "degree": str(degree), "count": str(rep.count)}


def check_weights(src, seed: int, level: str) -> dict:
    red = _full_dim(src)
    if characteristic_polytopes(red).n > RECURSION_LIMIT:
        raise Skip(f"weights limited to dimension {RECURSION_LIMIT}")
    table = minkowski_weights(red)
    return {"pass": True, "cones": len(table.weights), "total": sum(table.weights.values())}


def check_aux(src, seed: int, level: str) -> dict:
    if isinstance(src, InvariantSubspace):
        if src.r != src.n:
            raise Skip("rank differs from n")
        k = natural_matroid(src.polymatroid).size
        if src.n + k > AUX_LIMIT:
            raise Skip(f"n + k exceeds {AUX_LIMIT}")
        rep = aux_reduction_demo(src)
        return {"pass": rep.agree, "count": str(rep.count), "auxiliary": str(rep.auxiliary_count)}
    if not isinstance(src, Matroid):
        raise Skip("needs a matroid or an invariant subspace")
    n = len(src.characters[0])
    if n + src.size > AUX_LIMIT:
        raise Skip(f"n + k exceeds {AUX_LIMIT}")
    simplex = convex_hull([(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)])
    rep = aux_identity(src, [simplex] * (n - src.total_rank))
    return {"pass": rep.equal, "lhs_count": str(rep.lhs_count), "rhs_count": str(rep.rhs_count)}


def _random_segment(rng: random.Random, n: int):
    while True:
        d = [rng.randint(-1, 2) for _ in range(n)]
        if any(d):
            return convex_hull([(0,) * n, d])


def check_af(src, seed: int, level: str) -> dict:
    src = _full_dim(src)
    seq = characteristic_polytopes(src)
    if seq.n - seq.r < 2:
        raise Skip("needs at least two free slots")
    rng = random.Random(seed)
    n = seq.n
    p1, p2 = _random_segment(rng, n), _random_segment(rng, n)
    simplex = convex_hull([(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)])
    rep = af_polytopes(src, p1, p2, [simplex] * (n - seq.r - 2))
    a, b, c = rep.scaled()
    integral = all(x.denominator == 1 for x in (a, b, c))
    ok = rep.verdict and all(rep.nonnegative.values()) and integral
    return {"pass": ok, "scaled": [str(a), str(b), str(c)]}


CHECKS: dict[str, tuple[str, Callable]] = {
    "polymatroid_axioms": ("fast", check_polymatroid),
    "greedy_vs_hull": ("fast", check_greedy),
    "critical_data_vs_canonical": ("fast", check_critical_data),
    "fan_audit": ("fast", check_fan),
    "mixed_volume_routes": ("fast", check_mixed_routes),
    "count_integrality": ("fast", check_count),
    "truncation": ("full", check_truncation),
    "klyachko_compatibility": ("full", check_klyachko),
    "top_chern_degree": ("full", check_top_chern),
    "minkowski_weights": ("full", check_weights),
    "auxiliary_identity": ("full", check_aux),
    "alexandrov_fenchel": ("full", check_af),
}


def _run_one(args: tuple[str, dict, int, str]) -> dict:
    name, doc, seed, level = args
    src = load_source(doc)
    try:
        body = CHECKS[name][1](src, seed, level)
        status = "pass" if body.pop("pass") else "fail"
    except Skip as exc:
        return {"check": name, "status": "skipped", "reason": str(exc)}
    except (VecBKKError, AssertionError) as exc:
        return {"check": name, "status": "fail", "error": f"{type(exc).__name__}: {exc}"}
    return {"check": name, "status": status, **body}


def run_validation(doc: dict, seed: int = 0, level: str = "fast", jobs: int = 1) -> dict:
    names = [n for n, (lvl, _) in CHECKS.items() if level == "full" or lvl == "fast"]
    tasks = [(n, doc, seed, level) for n in names]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one, tasks))
    else:
        rows = [_run_one(t) for t in tasks]
    return {"level": level, "checks": rows,
            "passes": all(r["status"] != "fail" for r in rows)}
