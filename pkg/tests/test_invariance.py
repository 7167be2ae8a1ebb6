import json
import random
from fractions import Fraction as F

import pytest

from marginals.config import Caps
from marginals.errors import InstanceTooLarge, InvalidInput
from marginals.geometry import lp, lp_optimize, vertex_enumeration
from marginals.geometry.linalg import rank
from marginals.invariance import (
    MeasureVector,
    build_Iloc,
    count_full_constraints,
    full_constraints,
    generator_constraints,
    generator_equivalence,
    is_locally_invariant,
)
from marginals.patterns import PatternIndex, cylinder_members, translate_pattern


def test_generator_family_d1():
    gens = generator_constraints(1, 1, "01")
    assert len(gens) == 4
    assert rank([c.row() for c in gens]) == 3
    # mass of w on cells {0,1} equals mass of w on cells {-1,0}
    idx = PatternIndex(1, 1, "01")
    g = gens[1]  # w = "01"
    assert {idx.word(i) for i in g.lhs} == {"001", "101"}
    assert {idx.word(i) for i in g.rhs} == {"010", "011"}


def test_generator_family_d2_count():
    assert len(generator_constraints(2, 1, "01")) == 128


def test_full_family_contains_generators_and_single_cells():
    full = full_constraints(1, 1, "01")
    keys = {(c.E, c.a, c.u) for c in full}
    assert all((c.E, c.a, c.u) in keys for c in generator_constraints(1, 1, "01"))
    single = [c for c in full if len(c.E) == 1 and c.E.cells == ((-1,),) and c.u == (-1,) and c.a.values == ("1",)]
    assert len(single) == 1
    c = single[0]
    idx = PatternIndex(1, 1, "01")
    assert set(c.lhs) == set(cylinder_members(c.a, idx))
    assert set(c.rhs) == set(cylinder_members(translate_pattern(c.a, c.u), idx))


def test_constraint_coefficients_are_unit():
    for c in full_constraints(1, 1, "012"):
        assert set(c.row().values()) <= {-1, 1}


def test_full_constraint_count_and_cap():
    idx = PatternIndex(2, 1, "01")
    assert count_full_constraints(idx) == 3408
    with pytest.raises(InstanceTooLarge):
        full_constraints(2, 1, "01", Caps(constraints=100))


def test_constraint_json():
    c = generator_constraints(1, 1, "01")[0]
    obj = json.loads(json.dumps(c.to_json()))
    assert obj["u"] == [1] and obj["lhs"] == list(c.lhs)


@pytest.mark.parametrize("d,alphabet", [(1, "01"), (1, "012"), (2, "01")])
def test_generator_equivalence_guard(d, alphabet):
    rep = generator_equivalence(d, 1, alphabet)
    assert rep["equal"], rep


def test_generator_equivalence_direct_rank_d1():
    gens = [c.row() for c in generator_constraints(1, 1, "01")]
    full = [c.row() for c in full_constraints(1, 1, "01")]
    assert rank(gens) == rank(full) == rank(gens + full)


def test_Iloc_dimensions():
    H0 = build_Iloc(1, 0, "012")
    assert len(vertex_enumeration(H0)) == 3
    H = build_Iloc(1, 1, "01")
    rows = [dict(r) for r, _ in H.eq]
    assert 8 - rank(rows) == 4


def test_uniform_and_deltas():
    idx = PatternIndex(1, 1, "01")
    assert is_locally_invariant(MeasureVector.uniform(idx))
    assert not is_locally_invariant(MeasureVector.delta(idx, idx.index_of_word("010")))
    orbit = MeasureVector.from_masses(idx, {"001": F(1, 3), "010": F(1, 3), "100": F(1, 3)})
    assert is_locally_invariant(orbit)
    assert build_Iloc(1, 1, "01").contains(orbit.values)


def test_uniform_feasible_in_d2():
    idx = PatternIndex(2, 1, "01")
    assert build_Iloc(2, 1, "01").contains(MeasureVector.uniform(idx).values)


def test_measure_validation_and_json():
    idx = PatternIndex(1, 1, "01")
    with pytest.raises(InvalidInput):
        MeasureVector(idx, [F(1, 8)] * 7 + [F(1, 4)])
    with pytest.raises(InvalidInput):
        MeasureVector(idx, [F(-1, 8)] + [F(9, 56)] * 7)
    mu = MeasureVector.from_masses(idx, {"010": F(1, 2), "101": F(1, 2)})
    assert MeasureVector.from_json(json.loads(json.dumps(mu.to_json()))) == mu
    assert mu.mass(translate_pattern(idx.pattern(0), (0,))) == 0


def test_vertices_are_measures_and_invariant():
    idx = PatternIndex(1, 1, "012")
    for v in vertex_enumeration(build_Iloc(1, 1, "012")).vertices:
        mu = MeasureVector(idx, v)
        assert is_locally_invariant(mu)


def test_marginal_consistency_random_points():
    rng = random.Random(5)
    verts = vertex_enumeration(build_Iloc(1, 1, "01")).vertices
    idx = PatternIndex(1, 1, "01")
    for _ in range(10):
        w = [F(rng.randint(0, 9)) for _ in verts]
        if not any(w):
            continue
        s = sum(w)
        mu = MeasureVector(idx, [sum(wi * v[j] for wi, v in zip(w, verts)) / s for j in range(idx.size)])
        for c in full_constraints(1, 1, "01"):
            lhs, rhs = c.evaluate(mu.values)
            assert lhs == rhs


def test_seeded_lp_matches_vertex_maximum(monkeypatch):
    """Column generation with a float hint must reproduce the exact vertex maximum."""
    H = build_Iloc(1, 1, "012")
    verts = vertex_enumeration(H).vertices
    rng = random.Random(11)
    monkeypatch.setattr(lp, "_SEED_ABOVE", 0)
    for _ in range(5):
        c = [rng.randint(-5, 5) for _ in range(H.dim)]
        best = max(sum(ci * vi for ci, vi in zip(c, v)) for v in verts)
        res = lp_optimize(H, c, maximize=True)
        assert res.value == best
