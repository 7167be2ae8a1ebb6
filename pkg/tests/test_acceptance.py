"""Acceptance suite: one test per criterion, each with its tolerance and time budget.

Every criterion is computed by an ``artifact_*`` builder that returns plain
JSON. The tests assert on those artifacts; the determinism criterion reruns
all builders in two fresh interpreters and compares the serialized bytes.
Run this file as a script to print the artifacts.
"""
import functools
import itertools
import json
import math
import os
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

from marginals.compiler import PolytopeChain, compile_languages, parses_into, verify_language
from marginals.faces import ForbiddenSet, bounded_2d_periodic_search, face_feasible, face_of_forbidden, face_vertices, hard_squares
from marginals.geometry import polytope_equal, vertex_enumeration
from marginals.geometry.rational import fmt_q
from marginals.invariance import MeasureVector, build_Iloc, generator_equivalence, is_locally_invariant
from marginals.onedim import (
    PeriodicOrbit,
    chain_marginal,
    classify_extreme_points,
    markov_extension,
    no_repeat_example,
    orbit_measure,
)
from marginals.patterns import PatternIndex
from marginals.substitution import QuadraticNumber, certify_irrational, frequency_ratio, iterate_counts, preset
from marginals.tower import project_Iloc

RESULTS: dict[int, tuple[bool, float, float, str]] = {}


def criterion(number: int, title: str, budget: float):
    """Record pass/fail and wall time; a run over budget fails the criterion."""

    def wrap(fn):
        @functools.wraps(fn)
        def test(*args, **kwargs):
            t0 = time.perf_counter()
            ok = False
            try:
                fn(*args, **kwargs)
                ok = True
            finally:
                dt = time.perf_counter() - t0
                passed = ok and dt < budget
                RESULTS[number] = (passed, dt, budget, title)
                print(f"criterion {number:2d} {'PASS' if passed else 'FAIL'} {dt:7.2f}s / {budget:g}s  {title}")
            assert dt < budget, f"criterion {number} took {dt:.2f}s, budget {budget}s"

        return test

    return wrap


def q(x):
    return fmt_q(x)


# artifacts


def artifact_1():
    out = []
    for alphabet, n in (("01", 0), ("01", 1), ("012", 1)):
        V = vertex_enumeration(build_Iloc(1, n, alphabet))
        out.append({
            "alphabet": alphabet,
            "n": n,
            "all_fractions": all(type(x) is F for v in V.vertices for x in v),
            "probability_vectors": all(min(v) >= 0 and sum(v) == 1 for v in V.vertices),
            "vertices": [[q(x) for x in v] for v in V.vertices],
        })
    return out


def artifact_2():
    rep = classify_extreme_points("01", 1)
    expected = {orbit_measure(PeriodicOrbit.of(w, "01"), 1).values: w for w in ("0", "1", "01", "001", "011", "0011")}
    V = vertex_enumeration(build_Iloc(1, 1, "01")).vertices
    return {
        "report": rep,
        "vertex_count": len(V),
        "vertices_match_orbits": set(V) == set(expected),
        "values_in_reciprocals": all(x == 0 or x.numerator == 1 for v in V for x in v),
    }


def random_point(rnd, verts, idx):
    # weights with a common denominator D <= 97
    D = rnd.randint(1, 97)
    cuts = sorted(rnd.randint(0, D) for _ in range(len(verts) - 1))
    w = [F(b - a, D) for a, b in zip([0] + cuts, cuts + [D])]
    return MeasureVector(idx, [sum(wi * v[j] for wi, v in zip(w, verts)) for j in range(idx.size)])


def artifact_3():
    idx = PatternIndex(1, 1, "01")
    verts = vertex_enumeration(build_Iloc(1, 1, "01")).vertices
    rnd = random.Random(20261016)
    round_trips, stationary = 0, 0
    for _ in range(100):
        mu = random_point(rnd, verts, idx)
        chain = markov_extension(mu)
        if chain_marginal(chain, 1) == mu:
            round_trips += 1
        P, pi = chain.P, chain.pi
        k = len(pi)
        if all(sum(pi[i] * P[i][j] for i in range(k)) == pi[j] for j in range(k)) and all(sum(r) == 1 for r in P):
            stationary += 1
    return {"points": 100, "round_trips": round_trips, "stationary": stationary}


def artifact_4():
    alphabet = "1234"
    idx = PatternIndex(1, 1, alphabet)
    target = [F(0)] * idx.size
    for w in itertools.permutations(range(4), 3):
        target[idx.index_of_digits(w)] = F(1, 24)

    def per_word(length):
        # weight 1/24 on the orbit measure of each of the 24 words
        acc = [F(0)] * idx.size
        for w in itertools.permutations(range(4), length):
            for i, x in enumerate(orbit_measure(PeriodicOrbit(idx.alphabet, w), 1).values):
                acc[i] += x / 24
        return acc

    ex = no_repeat_example()
    return {
        "per_word_period3_reproduces": per_word(3) == target,
        "per_word_period4_reproduces": per_word(4) == target,
        "orbit_weights": {"period3": ex["period3"], "period4": ex["period4"]},
        "aggregated_reproduces": ex["period3_reproduces"] and ex["period4_reproduces"],
        "decompositions_differ": ex["orbits_disjoint"],
    }


def artifact_5():
    return [generator_equivalence(d, 1, "012"[:k]) for d, k in ((1, 2), (1, 3), (2, 2))]


def artifact_6():
    golden = ForbiddenSet.words(["11"], "01")
    cert = face_feasible(golden, 1)
    V = face_vertices(golden, 1)
    orbits = {orbit_measure(PeriodicOrbit.of(w, "01"), 1).values for w in ("0", "01", "001")}
    everything = ForbiddenSet.words(["0", "1"], "01")
    farkas = face_feasible(everything, 1)
    return {
        "golden_feasible": cert.feasible,
        "golden_vertices": [[q(x) for x in v] for v in V.vertices],
        "golden_matches_orbits": set(V.vertices) == orbits,
        "forbid_all_feasible": farkas.feasible,
        "forbid_all_certificate": farkas.to_json(),
        "certificate_verifies": farkas.verify(face_of_forbidden(everything, 1).H),
    }


def artifact_7():
    P = project_Iloc(2, 1)
    base = vertex_enumeration(build_Iloc(1, 1, "01"))
    return {"projected": P.to_json(), "equal": polytope_equal(P, base) and P == base}


def artifact_8():
    chain = PolytopeChain.of([[(1, 0), (0, 1)], [(F(1, 3), F(2, 3)), (F(2, 3), F(1, 3))]])
    E1, E2 = compile_languages(chain)
    balanced = {"122", "212", "221", "112", "121", "211"}
    return {
        "N": [E1.N, E2.N],
        "E2": E2.labels(),
        "verified": [verify_language(E1, chain.levels[0]), verify_language(E2, chain.levels[1])],
        "E2_within_balanced": set(E2.labels()) <= balanced,
        "divides": E2.N % E1.N == 0,
        "parses": all(parses_into(w, E1) for w in E2.words),
    }


def artifact_9():
    S = preset("penrose-robinson")
    r = frequency_ratio(S, "fat", "thin")
    a, b = iterate_counts(S, (1, 0), 25)[-1]
    err = abs(a / b - (1 + math.sqrt(5)) / 2)
    return {
        "ratio": str(r),
        "equals_golden_mean": r == QuadraticNumber(F(1, 2), F(1, 2), 5),
        "irrational": certify_irrational(r),
        "iterate_k25": [a, b],
        "iterate_within_1e-9": err < 1e-9,
    }


def artifact_10():
    L = hard_squares()
    idx = PatternIndex(2, 1, "01")
    face = face_of_forbidden(L, 1)
    zero = MeasureVector.delta(idx, 0)
    hit = bounded_2d_periodic_search(L, 2, 1)
    return {
        "feasible": face_feasible(L, 1).feasible,
        "zero_witness_in_face": face.H.contains(zero.values),
        "torus": hit.to_json() if hit else None,
        "torus_locally_invariant": hit is not None and is_locally_invariant(hit.measure),
        "torus_avoids_forbidden": hit is not None and all(hit.measure.values[i] == 0 for i in face.zeroed),
    }


ARTIFACTS = [artifact_1, artifact_2, artifact_3, artifact_4, artifact_5, artifact_6, artifact_7, artifact_8, artifact_9, artifact_10]


def all_artifacts() -> str:
    return json.dumps({str(i + 1): f() for i, f in enumerate(ARTIFACTS)}, indent=2, sort_keys=True) + "\n"


# criteria


@criterion(1, "rational vertices, valid probability vectors", 5)
def test_criterion_1_rational_vertices():
    art = artifact_1()
    assert [len(a["vertices"]) for a in art] == [2, 6, 148]
    assert all(a["all_fractions"] and a["probability_vectors"] for a in art)


@criterion(2, "6 vertices = orbit measures of 0,1,01,001,011,0011", 1)
def test_criterion_2_vertex_orbit_bijection():
    art = artifact_2()
    assert art["vertex_count"] == 6 and art["vertices_match_orbits"] and art["values_in_reciprocals"]
    rep = art["report"]
    assert rep["bijection"] and sorted(p["orbit"] for p in rep["pairs"]) == sorted(["0", "1", "01", "001", "011", "0011"])


@criterion(3, "Markov round trip on 100 random points", 10)
def test_criterion_3_markov_round_trip():
    art = artifact_3()
    assert art["round_trips"] == 100 and art["stationary"] == 100


@criterion(4, "no-repeat measure has two distinct orbit decompositions", 30)
def test_criterion_4_nonunique_decomposition():
    art = artifact_4()
    assert art["per_word_period3_reproduces"] and art["per_word_period4_reproduces"]
    assert art["aggregated_reproduces"] and art["decompositions_differ"]


@criterion(5, "generator and full invariance families agree", 60)
def test_criterion_5_constraint_reduction():
    art = artifact_5()
    assert [(r["d"], len(r["alphabet"])) for r in art] == [(1, 2), (1, 3), (2, 2)]
    # both routes: nullspace annihilation and a direct rank of the full family
    assert all(r["equal"] and r["annihilates"] and r["rank_full"] is not None for r in art)
    assert all(r["rank_generators"] == r["rank_full"] for r in art)


@criterion(6, "golden mean face and forbid-all certificate", 1)
def test_criterion_6_sft_faces():
    art = artifact_6()
    assert art["golden_feasible"] and len(art["golden_vertices"]) == 3 and art["golden_matches_orbits"]
    assert not art["forbid_all_feasible"] and art["certificate_verifies"]


@criterion(7, "projection of I_2^loc equals I_1^loc", 60)
def test_criterion_7_tower_d1():
    assert artifact_7()["equal"]


@criterion(8, "compiler on the thirds chain", 1)
def test_criterion_8_compiler():
    art = artifact_8()
    assert art["N"] == [1, 3] and art["verified"] == [True, True]
    assert art["E2_within_balanced"] and art["divides"] and art["parses"]


@criterion(9, "fat/thin ratio is exactly (1+sqrt 5)/2", 1)
def test_criterion_9_penrose_ratio():
    art = artifact_9()
    assert art["ratio"] == "(1+1*sqrt(5))/2" and art["equals_golden_mean"] and art["irrational"]
    assert art["iterate_within_1e-9"]


@criterion(10, "d=2 hard squares smoke test", 10)
def test_criterion_10_d2_smoke():
    art = artifact_10()
    assert art["feasible"] and art["zero_witness_in_face"]
    assert art["torus_locally_invariant"] and art["torus_avoids_forbidden"]


@criterion(11, "artifacts of criteria 1-10 are byte-identical across runs", 300)
def test_criterion_11_determinism(tmp_path):
    outs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        path = tmp_path / f"run{seed}.json"
        res = subprocess.run([sys.executable, __file__, str(path)], env=env, capture_output=True, text=True,
                             cwd=Path(__file__).parent)
        assert res.returncode == 0, res.stderr
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert len(json.loads(outs[0])) == 10


if __name__ == "__main__":
    text = all_artifacts()
    if len(sys.argv) > 1:
        Path(sys.argv[1]).write_text(text)
    else:
        sys.stdout.write(text)
