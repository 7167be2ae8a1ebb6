import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from marginals.config import Caps
from marginals.errors import InstanceTooLarge, InvalidInput
from marginals.patterns import (
    Alphabet,
    Pattern,
    PatternIndex,
    Shape,
    cube_shape,
    cylinder_members,
    enumerate_patterns,
    shifts_within,
    subshapes,
    translate_pattern,
)


def test_alphabet_parsing():
    assert Alphabet.of("0,1,2").symbols == ("0", "1", "2")
    assert Alphabet.of("01").symbols == ("0", "1")
    assert Alphabet.of(["ab", "c"]).render(["ab", "c"]) == "ab,c"
    assert Alphabet.of("01").split("0110") == ("0", "1", "1", "0")
    with pytest.raises(InvalidInput):
        Alphabet.of("0,0")
    with pytest.raises(InvalidInput):
        Alphabet.of("01").index("2")


def test_cube_shape_sizes():
    assert len(cube_shape(1, 0)) == 1
    assert len(cube_shape(1, 2)) == 5
    assert len(cube_shape(2, 1)) == 9
    assert cube_shape(2, 1).cells[0] == (-1, -1)


def test_index_counts_and_order():
    idx = PatternIndex(1, 1, "01")
    assert idx.size == 8
    assert [idx.word(i) for i in range(4)] == ["000", "001", "010", "011"]
    assert idx.index_of_word("110") == 6
    assert PatternIndex(2, 1, "01").size == 512


def test_index_cap():
    with pytest.raises(InstanceTooLarge):
        PatternIndex(2, 2, "01", Caps(patterns=1000))


@given(st.integers(min_value=1, max_value=2), st.integers(min_value=0, max_value=1), st.integers(min_value=2, max_value=3), st.data())
def test_index_bijection(d, n, q, data):
    idx = PatternIndex(d, n, [str(i) for i in range(q)])
    if idx.size > 5000:
        return
    i = data.draw(st.integers(min_value=0, max_value=idx.size - 1))
    assert idx.index(idx.pattern(i)) == i
    assert idx.index_of_word(idx.word(i)) == i


def test_translation_moves_cells():
    a = Pattern.word("01", start=0)
    b = translate_pattern(a, (1,))
    assert b.shape.cells == ((-1,), (0,))
    assert b.values == a.values
    p = Pattern.from_mapping({(0, 0): "1", (0, 1): "0"})
    assert translate_pattern(p, (0, -1)).as_dict() == {(0, 1): "1", (0, 2): "0"}


def test_pattern_json_roundtrip():
    p = Pattern.from_mapping({(1, 0): "a", (0, 0): "b"})
    assert Pattern.from_json(json.loads(json.dumps(p.to_json()))) == p


def test_cylinder_members_match_brute_force():
    idx = PatternIndex(1, 1, "01")
    a = Pattern.word("1", start=0)
    members = cylinder_members(a, idx)
    assert {idx.word(i) for i in members} == {"010", "011", "110", "111"}
    with pytest.raises(InvalidInput):
        cylinder_members(Pattern.word("1", start=5), idx)


def test_subshapes_and_shifts():
    window = cube_shape(1, 1)
    assert len(list(subshapes(window))) == 7
    assert sorted(shifts_within(Shape.of([(0,)]), window)) == [(-1,), (1,)]
    assert shifts_within(window, window) == []


def test_enumerate_patterns_count():
    assert len(enumerate_patterns("012", cube_shape(1, 1))) == 27
    shape = Shape.of([(0, 0), (1, 0)])
    pats = enumerate_patterns("01", shape)
    assert {p.values for p in pats} == set(itertools.product("01", repeat=2))
