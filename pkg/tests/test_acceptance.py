"""Acceptance criteria, one test each.

Every criterion prints a PASS/FAIL line with its runtime; the lines are
repeated in the terminal summary.  Run ``python tests/test_acceptance.py``
to get only those lines.
"""

import json
import subprocess
import sys
import time
from fractions import Fraction
from math import factorial

import pytest

from vecbkk.afcheck import af_polytopes, af_subspaces, aux_identity
from vecbkk.arrangements import (generic_formula_count, hyperplane_count, random_generic_arrangement,
                                 standard_simplex)
from vecbkk.bkk import coordinate_embedding, count_solutions
from vecbkk.charseq import (characteristic_polytopes, check_truncation_theorem,
                            concatenated_representation, critical_data, direct_sum, fan_of,
                            multi_support, quotient_reduction, sample_directions)
from vecbkk.fixtures import fano, fixture_text, hyp4, sq2, u23, u24, vamos6
from vecbkk.generators import (random_af_triple, random_coordinate_supports, random_pair,
                               random_subspace_arrangement, random_virtual_sequence)
from vecbkk.klyachko import top_chern_degree, verify_compatibility
from vecbkk.polymat import Matroid, greedy_min_sequence, natural_matroid
from vecbkk.polyhedra import (VirtualPolytope, convex_hull, minkowski_sum_all, mixed_volume,
                              mixed_volume_recursive, mixed_volume_virtual, normal_fan,
                              support_value)
from vecbkk.polyhedra.fan import strict_refinement

RESULTS: list[str] = []

UNIT_SIMPLEX = convex_hull([(0, 0), (1, 0), (0, 1)])
UNIT_SQUARE = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])


def record(number: int, title: str, ok: bool, started: float, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} ({time.perf_counter() - started:.2f} s)"
    if detail:
        line += f" [{detail}]"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _simplex(n):
    return convex_hull([(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)])


def _reduce(src):
    seq = characteristic_polytopes(src)
    return quotient_reduction(src).reduced if seq.r and not seq.spans_torus else src


def _sweep_sources():
    return [sq2(), u23(), hyp4()] + [random_subspace_arrangement(seed) for seed in range(25)]


def test_criterion_01_sq2_end_to_end():
    t = time.perf_counter()
    L = sq2()
    seq = characteristic_polytopes(L)
    count = count_solutions(L).count
    ok = count == 1 and seq[1] == UNIT_SIMPLEX and seq[2] == UNIT_SQUARE
    ok = ok and time.perf_counter() - t < 1
    record(1, "SQ2 count = 1 with simplex and square", ok, t, f"count {count}")


def test_criterion_02_classical_embedding():
    t = time.perf_counter()
    bad = []
    for seed in range(50):
        supports = random_coordinate_supports(seed)
        n = len(supports)
        expected = factorial(n) * mixed_volume([convex_hull(s) for s in supports])
        if count_solutions(coordinate_embedding(supports)).count != expected:
            bad.append(seed)
    ok = not bad and time.perf_counter() - t < 60
    record(2, "50 coordinate embeddings match n! MVol", ok, t, f"mismatches {bad}")


def test_criterion_03_greedy_vs_hull():
    t = time.perf_counter()
    checked, bad = 0, []
    for i, L in enumerate(_sweep_sources()):
        seq = characteristic_polytopes(L)
        for xi in sample_directions(L.n, 200, seed=i):
            greedy = [s for _, s in greedy_min_sequence(L.polymatroid, xi)]
            if greedy != [support_value(seq[k], xi) for k in range(1, seq.r + 1)]:
                bad.append((i, xi))
            checked += 1
    record(3, "greedy partial sums equal hull support values", not bad, t, f"{checked} directions")


def test_criterion_04_critical_data_vs_canonical():
    t = time.perf_counter()
    checked, bad = 0, []
    for i, L in enumerate(_sweep_sources()):
        h = multi_support(L)
        for xi in sample_directions(L.n, 200, seed=i):
            if critical_data(L, xi).multiset() != h(xi):
                bad.append((i, xi))
            checked += 1
    record(4, "critical multiset equals canonical evaluator", not bad, t, f"{checked} directions")


def test_criterion_05_representation_independence():
    t = time.perf_counter()
    bad, compared = [], 0
    for seed in range(25):
        a, b = random_pair(seed)
        s = direct_sum(a, b)
        canon = multi_support(s).terms
        concat = concatenated_representation(a, b)
        pad = [_simplex(s.n)] * (s.n - s.r)
        if mixed_volume_virtual(canon + pad) != mixed_volume_virtual(concat + pad):
            bad.append(seed)
        compared += 1
    record(5, "canonical and concatenated representations agree", not bad, t, f"{compared} pairs")


def _recursion_agrees(terms) -> bool:
    big = minkowski_sum_all([q for vp in terms for _, q in vp.terms])
    expected = mixed_volume_virtual(terms)
    if not big.is_full_dimensional:
        return expected == 0
    return mixed_volume_recursive(terms, normal_fan(big)) == expected


def test_criterion_06_polarization_vs_recursion():
    t = time.perf_counter()
    bad = []
    for name, src in [("sq2", sq2()), ("u23", u23()), ("hyp4", hyp4()), ("fano", fano()), ("u24", u24())]:
        red = _reduce(src)
        seq = characteristic_polytopes(red)
        terms = seq.differences() + [VirtualPolytope.of(_simplex(seq.n))] * (seq.n - seq.r)
        if not _recursion_agrees(terms):
            bad.append(name)
    for seed in range(50):
        if not _recursion_agrees(random_virtual_sequence(seed)):
            bad.append(seed)
    record(6, "polarization equals ray recursion", not bad, t, f"disagreements {bad}")


def test_criterion_07_truncation():
    t = time.perf_counter()
    sources = [sq2(), u23()] + [random_subspace_arrangement(1000 + s) for s in range(10)]
    checked, bad = 0, []
    for i, L in enumerate(sources):
        L = _reduce(L)
        rays = [tuple(Fraction(x) for x in r) for r in fan_of(L).rays]
        for xi in rays + sample_directions(L.n, 20, seed=i)[2 * L.n:]:
            if not check_truncation_theorem(L, xi, seed=i).all_hold:
                bad.append((i, xi))
            checked += 1
    record(7, "truncated sequences reproduce faces", not bad, t, f"{checked} directions")


def test_criterion_08_klyachko():
    t = time.perf_counter()
    rows = []
    for name, L in [("sq2", sq2()), ("u23", u23()), ("hyp4", hyp4())]:
        red = _reduce(L)
        fan = fan_of(red)
        ok = verify_compatibility(red, fan).passes
        ok = ok and verify_compatibility(red, strict_refinement(fan)).passes
        if red.r == red.n:
            ok = ok and top_chern_degree(red) == count_solutions(red).count
        rows.append((name, ok))
    record(8, "Klyachko compatibility and top Chern degree", all(ok for _, ok in rows), t,
           ", ".join(f"{n} {'ok' if ok else 'bad'}" for n, ok in rows))


def test_criterion_09_generic_hyperplanes():
    t = time.perf_counter()
    bad = []
    for n, N in [(2, 3), (2, 4), (3, 4)]:
        for seed in range(3):
            arr = random_generic_arrangement(n, N, seed)
            s = standard_simplex(N + 1)
            if hyperplane_count(arr, [s] * n).count != generic_formula_count(arr, [s] * n):
                bad.append((n, N, seed))
    record(9, "arrangement count equals generic formula", not bad, t, f"mismatches {bad}")


def test_criterion_10_af_representable():
    t = time.perf_counter()
    failed = [seed for seed in range(50) if not af_subspaces(*random_af_triple(seed)).verdict]
    L1, _, L3 = random_af_triple(7)
    eq = af_subspaces(L1, L1, L3)
    ok = not failed and eq.equality
    record(10, "AF verdict on 50 triples and equality case", ok, t, f"failures {failed}")


def test_criterion_11_af_vamos():
    t = time.perf_counter()
    e = [tuple(int(i == j) for j in range(6)) for i in range(6)]
    p1 = convex_hull([(0,) * 6, e[0]])
    p2 = convex_hull([(0,) * 6, tuple(a + b for a, b in zip(e[0], e[1]))])
    rep = af_polytopes(vamos6(), p1, p2)
    a, b, c = rep.scaled()
    ok = all(x >= 0 and x.denominator == 1 for x in (a, b, c)) and b * b >= a * c
    ok = ok and time.perf_counter() - t < 600
    record(11, "Vamos AF terms nonnegative integers with b^2 >= ac", ok, t, f"a={a} b={b} c={c}")


def test_criterion_12_auxiliary_identity():
    t = time.perf_counter()
    L = u23()
    u = aux_identity(Matroid(list(L.characters), L.polymatroid.rank))
    mid = time.perf_counter()
    nat = aux_identity(natural_matroid(sq2().polymatroid))
    end = time.perf_counter()
    ok = u.equal and nat.equal and mid - t < 120 and end - mid < 120
    record(12, "auxiliary identity for U23 and the SQ2 natural matroid", ok, t,
           f"U23 {mid - t:.1f} s, SQ2 {end - mid:.1f} s")


def test_criterion_13_determinism(tmp_path):
    t = time.perf_counter()
    path = tmp_path / "sq2.json"
    path.write_text(fixture_text("sq2"))
    outputs = []
    for jobs in ("1", "8", "1"):
        proc = subprocess.run([sys.executable, "-m", "vecbkk", "validate", str(path), "--level", "full",
                               "--jobs", jobs], capture_output=True)
        outputs.append(proc.stdout)
    ok = len(set(outputs)) == 1 and json.loads(outputs[0])["passes"]
    record(13, "validate output identical for --jobs 1 and 8", ok, t)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
