"""Compile a descending chain of rational polytopes in the simplex into word languages.

Level 0 takes every word of the least common denominator length whose symbol
frequencies are an extreme point. Each later level writes its extreme points
as convex combinations of the previous level's extreme points and
concatenates previous-level words in the matching multiplicities.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, Mapping, Sequence

from sympy.utilities.iterables import multiset_permutations

from .config import DEFAULT_CAPS, Caps
from .errors import InvalidInput, VerificationFailure
from .faces import ForbiddenSet
from .geometry import AffineMap, HPolytope, VPolytope, extreme_subset, lexmin, polytope_subset
from .geometry.rational import parse_vec
from .patterns import Alphabet

Word = tuple[int, ...]


def default_symbols(k: int) -> Alphabet:
    return Alphabet(tuple(str(i) for i in range(1, k + 1)))


def empirical_freq(word: Sequence[int], q: int) -> tuple[Fraction, ...]:
    """Symbol proportions of a word of digits over q symbols."""
    if not word:
        raise InvalidInput("empirical frequency of the empty word")
    counts = [0] * q
    for x in word:
        counts[x] += 1
    return tuple(Fraction(c, len(word)) for c in counts)


def word_freq(word: str, alphabet) -> tuple[Fraction, ...]:
    alphabet = Alphabet.of(alphabet)
    return empirical_freq([alphabet.index(s) for s in alphabet.split(word)], len(alphabet))


def embed_into_simplex(C: VPolytope) -> tuple[VPolytope, AffineMap]:
    """Shift and shrink C into [0, 1/(2m)]^m, then lift by appending 1 - sum.

    Returns the lifted polytope in the m-simplex of R^{m+1} and the affine map
    that drops the last coordinate and undoes the scaling.
    """
    if C.is_empty:
        raise InvalidInput("cannot embed an empty polytope")
    m = C.dim
    lo = [min(v[i] for v in C.vertices) for i in range(m)]
    width = max((max(v[i] for v in C.vertices) - lo[i] for i in range(m)), default=Fraction(0))
    s = Fraction(1) if width == 0 else min(Fraction(1), Fraction(1, 2 * m) / width)
    lifted = []
    for v in C.vertices:
        y = [s * (x - l) for x, l in zip(v, lo)]
        lifted.append(tuple(y) + (1 - sum(y),))
    inv = 1 / s
    back = AffineMap(tuple(((i, inv),) for i in range(m)), m + 1, tuple(lo))
    return VPolytope(m + 1, tuple(lifted)), back


@dataclass(frozen=True)
class PolytopeChain:
    alphabet: Alphabet
    levels: tuple[VPolytope, ...]

    def __post_init__(self):
        q = len(self.alphabet)
        if not self.levels:
            raise InvalidInput("polytope chain is empty")
        for P in self.levels:
            if P.dim != q or P.is_empty:
                raise InvalidInput(f"chain levels must be nonempty polytopes in R^{q}")
            for v in P.vertices:
                if any(x < 0 for x in v) or sum(v) != 1:
                    raise InvalidInput(f"vertex {[str(x) for x in v]} is not in the simplex")
        for i in range(len(self.levels) - 1):
            if not polytope_subset(self.levels[i + 1], self.levels[i]):
                raise InvalidInput(f"chain not descending: level {i + 1} is not inside level {i}")

    @classmethod
    def of(cls, levels: Sequence[Sequence[Sequence]], alphabet=None) -> PolytopeChain:
        pts = [[tuple(Fraction(x) for x in v) for v in lvl] for lvl in levels]
        q = len(pts[0][0])
        alphabet = default_symbols(q) if alphabet is None else Alphabet.of(alphabet)
        return cls(alphabet, tuple(VPolytope(q, tuple(p)) for p in pts))

    @classmethod
    def from_json(cls, obj) -> PolytopeChain:
        if isinstance(obj, Mapping):
            levels, alphabet = obj["levels"], obj.get("alphabet")
        else:
            levels, alphabet = obj, None
        verts = [[parse_vec(v) for v in (lvl["vertices"] if isinstance(lvl, Mapping) else lvl)] for lvl in levels]
        return cls.of(verts, alphabet)

    def to_json(self) -> dict:
        return {"alphabet": list(self.alphabet.symbols), "levels": [P.to_json() for P in self.levels]}


@dataclass(frozen=True)
class WordLanguage:
    alphabet: Alphabet
    N: int
    words: tuple[Word, ...]

    def __post_init__(self):
        if any(len(w) != self.N for w in self.words):
            raise InvalidInput(f"all words must have length {self.N}")
        object.__setattr__(self, "words", tuple(sorted(set(self.words))))

    def labels(self) -> list[str]:
        return [self.alphabet.render([self.alphabet.symbols[x] for x in w]) for w in self.words]

    def freqs(self) -> list[tuple[Fraction, ...]]:
        return [empirical_freq(w, len(self.alphabet)) for w in self.words]

    def to_json(self) -> dict:
        return {"N": self.N, "words": self.labels()}

    @classmethod
    def from_json(cls, obj: Mapping, alphabet) -> WordLanguage:
        alphabet = Alphabet.of(alphabet)
        words = tuple(tuple(alphabet.index(s) for s in alphabet.split(w)) for w in obj["words"])
        return cls(alphabet, int(obj["N"]), words)


def _words_with_counts(counts: Sequence[int]) -> Iterator[Word]:
    letters = [i for i, c in enumerate(counts) for _ in range(c)]
    for p in multiset_permutations(letters):
        yield tuple(p)


def _decompose(v, ext: Sequence) -> tuple[Fraction, ...]:
    """Lexicographically least convex weights expressing v over ext."""
    k = len(ext)
    eq = [({i: 1 for i in range(k)}, 1)]
    for j in range(len(v)):
        eq.append(({i: u[j] for i, u in enumerate(ext) if u[j]}, v[j]))
    lam = lexmin(HPolytope.build(k, eq, [({i: -1}, 0) for i in range(k)]))
    if lam is None:
        raise InvalidInput("chain not descending: an extreme point is outside the previous level")
    return lam


def compile_languages(chain: PolytopeChain, caps: Caps = DEFAULT_CAPS, full: bool = False) -> list[WordLanguage]:
    """One language per chain level, each realizing its polytope as a frequency hull.

    With ``full`` every concatenation of previous-level words whose frequency is
    an extreme point is kept (capped); otherwise one canonical concatenation per
    extreme point, blocks in increasing word order.
    """
    q = len(chain.alphabet)
    ext = extreme_subset(chain.levels[0].vertices).vertices
    N = lcm(*(x.denominator for v in ext for x in v))
    words: list[Word] = []
    for v in ext:
        counts = [int(x * N) for x in v]
        for w in _words_with_counts(counts):
            words.append(w)
            caps.check("language", len(words))
    out = [WordLanguage(chain.alphabet, N, tuple(words))]

    for level in chain.levels[1:]:
        prev = out[-1]
        by_freq: dict[tuple, list[Word]] = {}
        for w, f in zip(prev.words, prev.freqs()):
            by_freq.setdefault(f, []).append(w)
        new_ext = extreme_subset(level.vertices).vertices
        weights = [_decompose(v, ext) for v in new_ext]
        Np = lcm(*(x.denominator for lam in weights for x in lam))
        newN = prev.N * Np
        words = []
        if full:
            caps.check("language", len(prev.words) ** Np)
            targets = set(new_ext)
            for blocks in itertools.product(prev.words, repeat=Np):
                w = tuple(x for b in blocks for x in b)
                if empirical_freq(w, q) in targets:
                    words.append(w)
        else:
            for lam in weights:
                blocks = []
                for u, x in zip(ext, lam):
                    blocks.extend([by_freq[u][0]] * int(x * Np))
                words.append(tuple(x for b in sorted(blocks) for x in b))
        caps.check("language", len(words))
        lang = WordLanguage(chain.alphabet, newN, tuple(words))
        if not verify_language(lang, level):
            raise VerificationFailure(f"compiled level of length {newN} does not realize its polytope")
        out.append(lang)
        ext = new_ext
    if not verify_language(out[0], chain.levels[0]):
        raise VerificationFailure("first compiled level does not realize its polytope")
    return out


def verify_language(E: WordLanguage, C: VPolytope) -> bool:
    """conv{p(a) : a in E} == C, by membership LPs in both directions."""
    if not E.words:
        return C.is_empty
    P = extreme_subset(E.freqs())
    return polytope_subset(P, C) and polytope_subset(C, P)


def parses_into(word: Word, blocks: WordLanguage) -> bool:
    """word is a concatenation of blocks from the language (block length known)."""
    N = blocks.N
    if len(word) % N:
        return False
    allowed = set(blocks.words)
    return all(word[i:i + N] in allowed for i in range(0, len(word), N))


@dataclass(frozen=True)
class LevelForbidden:
    """Words of length 3N with no factorization b' a' a'' b'' where a', a'' are in E."""

    language: WordLanguage

    @property
    def length(self) -> int:
        return 3 * self.language.N

    def is_forbidden(self, word: Sequence[int]) -> bool:
        N = self.language.N
        if len(word) != 3 * N:
            raise InvalidInput(f"word has length {len(word)}, expected {3 * N}")
        allowed = set(self.language.words)
        word = tuple(word)
        return not any(word[o:o + N] in allowed and word[o + N:o + 2 * N] in allowed for o in range(N + 1))

    def is_forbidden_label(self, word: str) -> bool:
        a = self.language.alphabet
        return self.is_forbidden([a.index(s) for s in a.split(word)])

    def enumerate(self, caps: Caps = DEFAULT_CAPS) -> list[Word]:
        q = len(self.language.alphabet)
        caps.check("language", q ** self.length)
        return [w for w in itertools.product(range(q), repeat=self.length) if self.is_forbidden(w)]

    def as_forbidden_set(self, caps: Caps = DEFAULT_CAPS) -> ForbiddenSet:
        a = self.language.alphabet
        return ForbiddenSet.words([[a.symbols[x] for x in w] for w in self.enumerate(caps)], a)


def forbidden_list_for_level(E: WordLanguage) -> LevelForbidden:
    return LevelForbidden(E)
