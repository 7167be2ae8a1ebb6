import itertools
import json
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from marginals.compiler import (
    PolytopeChain,
    WordLanguage,
    compile_languages,
    embed_into_simplex,
    empirical_freq,
    forbidden_list_for_level,
    parses_into,
    verify_language,
    word_freq,
)
from marginals.errors import InstanceTooLarge, InvalidInput
from marginals.config import Caps
from marginals.geometry import VPolytope, contains, polytope_equal
from oracles import freq

DELTA2 = [(1, 0), (0, 1)]
THIRDS = [(F(1, 3), F(2, 3)), (F(2, 3), F(1, 3))]


def lang(words, alphabet="12"):
    return WordLanguage.from_json({"N": len(words[0]), "words": words}, alphabet)


def brute_words(N, targets, q):
    return sorted(w for w in itertools.product(range(q), repeat=N) if freq(w, q) in targets)


def test_empirical_freq_examples():
    assert word_freq("12", "12") == (F(1, 2), F(1, 2))
    assert word_freq("111", "12") == (1, 0)
    assert word_freq("122", "12") == (F(1, 3), F(2, 3))
    with pytest.raises(InvalidInput):
        empirical_freq([], 2)


def test_simplex_chain_compiles_to_single_letters():
    (E,) = compile_languages(PolytopeChain.of([DELTA2]))
    assert E.N == 1 and E.labels() == ["1", "2"]


def test_thirds_chain_canonical_and_full():
    chain = PolytopeChain.of([DELTA2, THIRDS])
    E1, E2 = compile_languages(chain)
    assert E2.N == 3 and E2.N % E1.N == 0
    assert E2.labels() == ["112", "122"]
    assert set(E2.labels()) <= {"122", "212", "221", "112", "121", "211"}
    _, full = compile_languages(chain, full=True)
    assert full.labels() == ["112", "121", "122", "211", "212", "221"]
    assert full.words == tuple(brute_words(3, set(THIRDS), 2))
    for E, C in zip((E1, E2), chain.levels):
        assert verify_language(E, C)
    assert all(parses_into(w, E1) for w in full.words)


def test_single_point_chain():
    (E,) = compile_languages(PolytopeChain.of([[(F(1, 2), F(1, 2))]]))
    assert E.N == 2 and E.labels() == ["12", "21"]


def test_verify_language_examples():
    assert not verify_language(lang(["11"]), VPolytope(2, tuple(DELTA2)))
    assert verify_language(lang(["12", "21"]), VPolytope(2, ((F(1, 2), F(1, 2)),)))


def test_chain_validation():
    with pytest.raises(InvalidInput):
        PolytopeChain.of([THIRDS, DELTA2])
    with pytest.raises(InvalidInput):
        PolytopeChain.of([[(F(1, 2), F(1, 3))]])


def test_chain_and_language_json():
    chain = PolytopeChain.of([DELTA2, THIRDS])
    assert PolytopeChain.from_json(json.loads(json.dumps(chain.to_json()))) == chain
    assert PolytopeChain.from_json([[["1", "0"], ["0", "1"]]]) == PolytopeChain.of([DELTA2])
    E = compile_languages(chain)[1]
    assert WordLanguage.from_json(json.loads(json.dumps(E.to_json())), "12") == E


def test_language_cap():
    with pytest.raises(InstanceTooLarge):
        compile_languages(PolytopeChain.of([DELTA2, THIRDS]), Caps(language=1))


def test_embedding_examples():
    P, back = embed_into_simplex(VPolytope(1, ((0,),)))
    assert len(P.vertices) == 1 and back(P.vertices[0]) == (0,)
    P, back = embed_into_simplex(VPolytope(1, ((0,), (F(1, 2),))))
    assert set(P.vertices) == {(0, 1), (F(1, 2), F(1, 2))}
    octagon = [(3, 1), (1, 3), (-1, 3), (-3, 1), (-3, -1), (-1, -3), (1, -3), (3, -1)]
    octagon = VPolytope(2, tuple(tuple(F(x, 3) for x in v) for v in sorted(octagon)))
    P, back = embed_into_simplex(octagon)
    assert all(min(v) >= 0 and sum(v) == 1 for v in P.vertices)
    assert all(x <= F(1, 4) for v in P.vertices for x in v[:2])
    assert polytope_equal(VPolytope(2, tuple(back(v) for v in P.vertices)), octagon)


def test_forbidden_predicate_examples():
    assert forbidden_list_for_level(lang(["1", "2"])).enumerate() == []
    L = forbidden_list_for_level(lang(["12", "21"]))
    assert L.is_forbidden_label("111111")
    assert not L.is_forbidden_label("112121")
    with pytest.raises(InvalidInput):
        L.is_forbidden_label("1111")


def factors(word, E):
    N = E.N
    allowed = set(E.words)
    for o in range(len(word) - 2 * N + 1):
        if word[o:o + N] in allowed and word[o + N:o + 2 * N] in allowed:
            return True
    return False


@pytest.mark.parametrize("words", [["1", "2"], ["1"], ["12", "21"], ["11", "22"], ["12"]])
def test_forbidden_predicate_matches_exhaustive_scan(words):
    E = lang(words)
    L = forbidden_list_for_level(E)
    brute = [w for w in itertools.product(range(2), repeat=3 * E.N) if not factors(w, E)]
    assert L.enumerate() == brute
    assert len(L.as_forbidden_set().patterns) == len(brute)


@st.composite
def segment_chains(draw):
    den = draw(st.integers(min_value=2, max_value=6))
    a = draw(st.integers(min_value=0, max_value=den))
    b = draw(st.integers(min_value=0, max_value=den))
    pts = {(F(a, den), 1 - F(a, den)), (F(b, den), 1 - F(b, den))}
    return PolytopeChain.of([DELTA2, sorted(pts)])


@given(segment_chains(), st.randoms(use_true_random=False))
def test_compiled_levels_realize_chain(chain, rnd):
    langs = compile_languages(chain)
    for i, (E, C) in enumerate(zip(langs, chain.levels)):
        assert verify_language(E, C)
        if i:
            assert E.N % langs[i - 1].N == 0
            assert all(parses_into(w, langs[i - 1]) for w in E.words)
            assert set(E.words) <= set(brute_words(E.N, set(C.vertices), 2))
        sample = [x for _ in range(6) for x in rnd.choice(E.words)]
        assert contains(C, empirical_freq(sample, 2))
