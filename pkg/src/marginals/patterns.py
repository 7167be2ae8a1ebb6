"""Finite patterns over Z^d: shapes, cube windows, indexing, translation, cylinders."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import InvalidInput

Cell = tuple[int, ...]


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise InvalidInput("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise InvalidInput(f"duplicate symbols in alphabet {self.symbols}")

    @classmethod
    def of(cls, symbols: Iterable) -> Alphabet:
        if isinstance(symbols, Alphabet):
            return symbols
        if isinstance(symbols, str):
            # "0,1,2" or, without commas, one symbol per character
            symbols = symbols.split(",") if "," in symbols else list(symbols)
        return cls(tuple(str(s) for s in symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    @cached_property
    def _pos(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    @cached_property
    def compact(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)

    def render(self, symbols: Sequence[str]) -> str:
        """Word label: plain concatenation for one-character symbols, else comma-separated."""
        return "".join(symbols) if self.compact else ",".join(symbols)

    def split(self, word) -> tuple[str, ...]:
        if not isinstance(word, str):
            return tuple(str(s) for s in word)
        if not word:
            return ()
        return tuple(word) if self.compact else tuple(word.split(","))

    def index(self, symbol) -> int:
        try:
            return self._pos[str(symbol)]
        except KeyError:
            raise InvalidInput(f"symbol {symbol!r} not in alphabet {self.symbols}") from None


@dataclass(frozen=True)
class Shape:
    """Finite set of lattice cells, stored in lexicographic order."""

    cells: tuple[Cell, ...]
    d: int

    def __post_init__(self):
        if not self.cells:
            raise InvalidInput("shape must be nonempty")
        cells = tuple(sorted(tuple(int(x) for x in c) for c in self.cells))
        if len(set(cells)) != len(cells):
            raise InvalidInput("shape cells must be distinct")
        if any(len(c) != self.d for c in cells):
            raise InvalidInput(f"cells must have dimension {self.d}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def of(cls, cells: Iterable[Sequence[int]]) -> Shape:
        cells = [tuple(c) if not isinstance(c, int) else (c,) for c in cells]
        return cls(tuple(cells), len(cells[0]) if cells else 0)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self.cellset

    @cached_property
    def cellset(self) -> frozenset[Cell]:
        return frozenset(self.cells)

    def issubset(self, other: Shape) -> bool:
        return self.cellset <= other.cellset

    def translate(self, u: Sequence[int]) -> Shape:
        """The shape E - u."""
        return Shape(tuple(tuple(c - x for c, x in zip(cell, u)) for cell in self.cells), self.d)

    def bounding_box(self) -> tuple[Cell, Cell]:
        lo = tuple(min(c[i] for c in self.cells) for i in range(self.d))
        hi = tuple(max(c[i] for c in self.cells) for i in range(self.d))
        return lo, hi


def cube_shape(d: int, n: int) -> Shape:
    """Lambda_n = {-n,...,n}^d."""
    if d < 1 or n < 0:
        raise InvalidInput(f"cube_shape needs d >= 1 and n >= 0, got d={d}, n={n}")
    return Shape(tuple(itertools.product(range(-n, n + 1), repeat=d)), d)


@dataclass(frozen=True)
class Pattern:
    shape: Shape
    values: tuple[str, ...]

    def __post_init__(self):
        if len(self.values) != len(self.shape):
            raise InvalidInput("pattern assignment must be total on its shape")

    @classmethod
    def from_mapping(cls, assignment: dict, d: int | None = None) -> Pattern:
        items = sorted((tuple(c) if not isinstance(c, int) else (c,), str(v)) for c, v in assignment.items())
        d = d if d is not None else len(items[0][0])
        return cls(Shape(tuple(c for c, _ in items), d), tuple(v for _, v in items))

    @classmethod
    def word(cls, symbols: Sequence, start: int = 0) -> Pattern:
        """One-dimensional pattern reading ``symbols`` left to right from ``start``."""
        return cls(Shape(tuple((start + i,) for i in range(len(symbols))), 1), tuple(str(s) for s in symbols))

    @property
    def d(self) -> int:
        return self.shape.d

    def at(self, cell) -> str:
        return self.values[self.shape.cells.index(tuple(cell))]

    def as_dict(self) -> dict[Cell, str]:
        return dict(zip(self.shape.cells, self.values))

    def check_alphabet(self, alphabet: Alphabet) -> None:
        for v in self.values:
            alphabet.index(v)

    def to_json(self) -> dict:
        return {"d": self.d, "cells": [list(c) for c in self.shape.cells], "values": list(self.values)}

    @classmethod
    def from_json(cls, obj: dict) -> Pattern:
        d = int(obj["d"])
        cells = [tuple(int(x) for x in c) for c in obj["cells"]]
        return cls.from_mapping(dict(zip(cells, [str(v) for v in obj["values"]])), d)


def translate_pattern(a: Pattern, u: Sequence[int]) -> Pattern:
    """Theta^u a: the pattern on E - u with (Theta^u a)_v = a_{v+u}."""
    u = tuple(u)
    if len(u) != a.d:
        raise InvalidInput("translation vector has wrong dimension")
    # translation preserves lexicographic order, so values keep their positions
    return Pattern(a.shape.translate(u), a.values)


class PatternIndex:
    """Bijection Omega_n <-> {0, ..., |Sigma|^|Lambda_n| - 1}.

    A pattern's index is its mixed-radix number, reading the cube's cells in
    lexicographic order with the first cell most significant.
    """

    def __init__(self, d: int, n: int, alphabet, caps: Caps = DEFAULT_CAPS):
        self.d = d
        self.n = n
        self.alphabet = Alphabet.of(alphabet)
        self.shape = cube_shape(d, n)
        self.q = len(self.alphabet)
        self.ncells = len(self.shape)
        self.size = self.q ** self.ncells
        caps.check("patterns", self.size)
        self.position = {c: i for i, c in enumerate(self.shape.cells)}
        self.weights = tuple(self.q ** (self.ncells - 1 - i) for i in range(self.ncells))

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"PatternIndex(d={self.d}, n={self.n}, alphabet={self.alphabet.symbols})"

    def digits(self, i: int) -> tuple[int, ...]:
        out = []
        for w in self.weights:
            out.append(i // w)
            i %= w
        return tuple(out)

    def index_of_digits(self, digits: Sequence[int]) -> int:
        return sum(x * w for x, w in zip(digits, self.weights))

    def pattern(self, i: int) -> Pattern:
        if not 0 <= i < self.size:
            raise InvalidInput(f"pattern index {i} out of range")
        return Pattern(self.shape, tuple(self.alphabet.symbols[x] for x in self.digits(i)))

    def index(self, b: Pattern) -> int:
        if b.shape != self.shape:
            raise InvalidInput("pattern is not on the full window")
        return self.index_of_digits([self.alphabet.index(v) for v in b.values])

    def word(self, i: int) -> str:
        """Label of pattern i, cells read row-major in d >= 2."""
        return self.alphabet.render([self.alphabet.symbols[x] for x in self.digits(i)])

    def index_of_word(self, word: Sequence) -> int:
        word = self.alphabet.split(word)
        if len(word) != self.ncells:
            raise InvalidInput(f"word {word!r} has length {len(word)}, window has {self.ncells} cells")
        return self.index_of_digits([self.alphabet.index(s) for s in word])

    @cached_property
    def digit_table(self) -> np.ndarray:
        """(size, ncells) array of symbol indices; row i is digits(i)."""
        idx = np.arange(self.size, dtype=np.int64)
        table = np.empty((self.size, self.ncells), dtype=np.int64)
        for j, w in enumerate(self.weights):
            table[:, j] = (idx // w) % self.q
        return table

    def restriction_codes(self, shape: Shape) -> np.ndarray:
        """code[b] = mixed-radix number of b restricted to ``shape`` (first cell most significant)."""
        cols = [self.position[c] for c in shape.cells]
        table = self.digit_table
        code = np.zeros(self.size, dtype=np.int64)
        for c in cols:
            code = code * self.q + table[:, c]
        return code

    def encode(self, a: Pattern) -> int:
        """Mixed-radix code of a pattern on its own shape, matching restriction_codes."""
        code = 0
        for v in a.values:
            code = code * self.q + self.alphabet.index(v)
        return code


def enumerate_patterns(alphabet, shape: Shape, caps: Caps = DEFAULT_CAPS) -> list[Pattern]:
    alphabet = Alphabet.of(alphabet)
    caps.check("patterns", len(alphabet) ** len(shape))
    return [Pattern(shape, vals) for vals in itertools.product(alphabet.symbols, repeat=len(shape))]


def cylinder_members(a: Pattern, index: PatternIndex) -> frozenset[int]:
    """[a]_n: indices of the full patterns on Lambda_n that restrict to a."""
    if not a.shape.issubset(index.shape):
        raise InvalidInput("cylinder shape is not contained in the window")
    fixed = {index.position[c]: index.alphabet.index(v) for c, v in zip(a.shape.cells, a.values)}
    base = sum(index.weights[p] * x for p, x in fixed.items())
    free = [index.weights[p] for p in range(index.ncells) if p not in fixed]
    out = [base]
    for w in free:
        out = [b + x * w for b in out for x in range(index.q)]
    return frozenset(out)


def subshapes(shape: Shape) -> Iterable[Shape]:
    """All nonempty subsets of a shape, in a fixed order."""
    cells = shape.cells
    for r in range(1, len(cells) + 1):
        for combo in itertools.combinations(cells, r):
            yield Shape(combo, shape.d)


def shifts_within(sub: Shape, window: Shape) -> list[Cell]:
    """Nonzero u with sub - u contained in window, for a cube window."""
    lo, hi = sub.bounding_box()
    wlo, whi = window.bounding_box()
    # wlo <= c - u <= whi for all cells c  <=>  hi - whi <= u <= lo - wlo
    ranges = [range(hi[i] - whi[i], lo[i] - wlo[i] + 1) for i in range(sub.d)]
    return [u for u in itertools.product(*ranges) if any(u)]
