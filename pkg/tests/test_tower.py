import json
from fractions import Fraction as F

import pytest

from marginals.config import Caps
from marginals.errors import InstanceTooLarge, InvalidInput
from marginals.geometry import contains, polytope_equal, polytope_subset, vertex_enumeration
from marginals.invariance import MeasureVector, build_Iloc, is_locally_invariant
from marginals.patterns import PatternIndex
from marginals.tower import marginal_map, project_Iloc, refinement_report


def dense(T):
    M = [[F(0)] * T.ncols for _ in T.rows]
    for i, row in enumerate(T.rows):
        for j, v in row:
            M[i][j] = v
    return M


def test_marginal_map_shape_and_columns():
    T = marginal_map(2, 1, 1, "01")
    M = dense(T)
    assert len(M) == 8 and T.ncols == 32
    assert all(sum(M[i][j] for i in range(8)) == 1 for j in range(32))
    big, small = PatternIndex(1, 2, "01"), PatternIndex(1, 1, "01")
    j = big.index_of_word("01101")
    assert M[small.index_of_word("110")][j] == 1


def test_marginal_map_functoriality():
    direct = marginal_map(3, 1, 1, "01")
    assert marginal_map(2, 1, 1, "01").compose(marginal_map(3, 2, 1, "01")) == direct
    assert marginal_map(1, 0, 2, "01").compose(marginal_map(1, 1, 2, "01")) == marginal_map(1, 0, 2, "01")


def test_marginal_map_pushes_uniform_to_uniform():
    T = marginal_map(2, 1, 1, "012")
    img = T(MeasureVector.uniform(PatternIndex(1, 2, "012")).values)
    assert img == MeasureVector.uniform(PatternIndex(1, 1, "012")).values
    with pytest.raises(InvalidInput):
        marginal_map(0, 1, 1, "01")


def test_projection_equals_Iloc_in_d1_by_both_routes():
    base = vertex_enumeration(build_Iloc(1, 1, "01"))
    assert project_Iloc(1, 1) == base
    vertex = project_Iloc(2, 1, route="vertex")
    oracle = project_Iloc(2, 1, route="oracle")
    assert vertex == oracle
    assert polytope_equal(vertex, base)
    with pytest.raises(InvalidInput):
        project_Iloc(2, 1, route="guess")


def test_projected_points_are_locally_invariant():
    idx = PatternIndex(1, 1, "012")
    for v in project_Iloc(2, 1, alphabet="012", route="oracle").vertices:
        assert is_locally_invariant(MeasureVector(idx, v))


def test_refinement_report_d1_is_constant_and_nested():
    rep = refinement_report(1, 3)
    assert [r["k"] for r in rep] == [2, 3]
    assert all(r["equal_to_previous"] and r["nested"] for r in rep)
    assert all(r["vertex_count"] == 6 for r in rep)
    assert json.loads(json.dumps(rep)) == rep
    assert polytope_subset(project_Iloc(3, 1), project_Iloc(2, 1))


def test_d2_tower_is_gated():
    with pytest.raises(InstanceTooLarge):
        project_Iloc(2, 0, d=2)
    with pytest.raises(InstanceTooLarge):
        project_Iloc(1, 0, d=2, caps=Caps(d2_tower=0))


def test_d2_single_cell_frequencies():
    P = project_Iloc(1, 0, d=2)
    assert set(P.vertices) == {(0, 1), (1, 0)}
    assert contains(P, (F(1, 2), F(1, 2))) and contains(P, (1, 0))
