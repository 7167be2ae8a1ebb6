"""Shifts of finite type as faces of I_n^loc, and finite searches around them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import InvalidInput, WrongDimension
from .geometry import FeasibilityCertificate, HPolytope, VPolytope, lp_feasible, vertex_enumeration
from .invariance import MeasureVector, build_Iloc
from .onedim import TransitionGraph
from .patterns import Alphabet, Pattern, PatternIndex, Shape


@dataclass(frozen=True)
class ForbiddenSet:
    d: int
    alphabet: Alphabet
    patterns: tuple[Pattern, ...]

    def __post_init__(self):
        alphabet = Alphabet.of(self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        for p in self.patterns:
            if p.d != self.d:
                raise InvalidInput(f"forbidden pattern has dimension {p.d}, expected {self.d}")
            p.check_alphabet(alphabet)

    @classmethod
    def words(cls, words: Sequence, alphabet) -> ForbiddenSet:
        """One-dimensional forbidden words, each placed at cells 0..len-1."""
        alphabet = Alphabet.of(alphabet)
        return cls(1, alphabet, tuple(Pattern.word(alphabet.split(w)) for w in words))

    def __len__(self) -> int:
        return len(self.patterns)

    def span(self) -> int:
        """Largest bounding-box side over all patterns (0 if empty)."""
        out = 0
        for p in self.patterns:
            lo, hi = p.shape.bounding_box()
            out = max(out, max(h - l + 1 for l, h in zip(lo, hi)))
        return out

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "alphabet": list(self.alphabet.symbols),
            "patterns": [{"cells": [list(c) for c in p.shape.cells], "values": list(p.values)} for p in self.patterns],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> ForbiddenSet:
        d = int(obj.get("d", 1))
        alphabet = Alphabet.of(obj["alphabet"])
        pats = []
        for w in obj.get("words", []):
            if d != 1:
                raise InvalidInput("'words' shorthand is only for d = 1")
            pats.append(Pattern.word(alphabet.split(w)))
        for p in obj.get("patterns", []):
            cells = [tuple(int(x) for x in c) for c in p["cells"]]
            if not cells:
                raise InvalidInput("forbidden pattern with no cells")
            pats.append(Pattern.from_mapping(dict(zip(cells, [str(v) for v in p["values"]])), d))
        return cls(d, alphabet, tuple(pats))


@dataclass(frozen=True)
class FaceDescription:
    d: int
    n: int
    alphabet: Alphabet
    zeroed: tuple[int, ...]
    H: HPolytope


def _placements(shape: Shape, window: Shape) -> list[tuple[int, ...]]:
    """All u (zero included) with shape - u inside the cube window."""
    lo, hi = shape.bounding_box()
    wlo, whi = window.bounding_box()
    ranges = [range(hi[i] - whi[i], lo[i] - wlo[i] + 1) for i in range(shape.d)]
    return list(itertools.product(*ranges))


def occurrence_mask(L: ForbiddenSet, index: PatternIndex) -> np.ndarray:
    """mask[b] is True iff some translate of a forbidden pattern appears in b."""
    if L.alphabet != index.alphabet:
        raise InvalidInput("forbidden set and window use different alphabets")
    mask = np.zeros(index.size, dtype=bool)
    for a in L.patterns:
        us = _placements(a.shape, index.shape)
        if not us:
            raise InvalidInput(f"forbidden pattern on {list(a.shape.cells)} does not fit in the window for n={index.n}")
        code = index.encode(a)
        for u in us:
            mask |= index.restriction_codes(a.shape.translate(u)) == code
    return mask


def face_of_forbidden(L: ForbiddenSet, n: int, caps: Caps = DEFAULT_CAPS) -> FaceDescription:
    index = PatternIndex(L.d, n, L.alphabet, caps)
    zeroed = tuple(int(i) for i in np.flatnonzero(occurrence_mask(L, index)))
    H = build_Iloc(L.d, n, L.alphabet, caps).add(eq=[({i: 1}, 0) for i in zeroed])
    return FaceDescription(L.d, n, L.alphabet, zeroed, H)


def face_feasible(L: ForbiddenSet, n: int, caps: Caps = DEFAULT_CAPS) -> FeasibilityCertificate:
    return lp_feasible(face_of_forbidden(L, n, caps).H)


def face_vertices(L: ForbiddenSet, n: int, caps: Caps = DEFAULT_CAPS) -> VPolytope:
    return vertex_enumeration(face_of_forbidden(L, n, caps).H, caps)


def pruned_graph(L: ForbiddenSet, n: int, caps: Caps = DEFAULT_CAPS) -> TransitionGraph:
    """de Bruijn graph on Sigma^{2n} keeping only the (2n+1)-words free of forbidden patterns."""
    if L.d != 1:
        raise WrongDimension("pruned de Bruijn graphs are one-dimensional")
    index = PatternIndex(1, n, L.alphabet, caps)
    mask = occurrence_mask(L, index)
    edges = [index.digits(int(i)) for i in np.flatnonzero(~mask)]
    states = {e[:-1] for e in edges} | {e[1:] for e in edges}
    return TransitionGraph(L.alphabet, n, tuple(states), tuple(edges))


def _has_cycle(g: TransitionGraph) -> bool:
    """Kahn-style peeling: a finite graph has a directed cycle iff peeling sources leaves edges."""
    indeg = {s: 0 for s in g.states}
    out: dict = {s: [] for s in g.states}
    for e in g.edges:
        out[e[:-1]].append(e[1:])
        indeg[e[1:]] += 1
    todo = [s for s, k in indeg.items() if k == 0]
    removed = 0
    while todo:
        s = todo.pop()
        removed += 1
        for t in out[s]:
            indeg[t] -= 1
            if indeg[t] == 0:
                todo.append(t)
    return removed < len(g.states)


def sft_empty_1d(L: ForbiddenSet, caps: Caps = DEFAULT_CAPS) -> bool:
    """True iff no bi-infinite sequence avoids L (no cycle survives pruning)."""
    if L.d != 1:
        raise WrongDimension("the cycle test decides emptiness only in d = 1")
    n = max(0, L.span() // 2)  # windows of length 2n+1 >= span
    return not _has_cycle(pruned_graph(L, n, caps))


@dataclass(frozen=True)
class TorusHit:
    size: int
    config: tuple[tuple[str, ...], ...]
    measure: MeasureVector

    def to_json(self) -> dict:
        return {"size": self.size, "config": [list(r) for r in self.config], "measure": self.measure.to_json()}


def _torus_placements(L: ForbiddenSet, s: int) -> list[dict[int, int]]:
    out = []
    for a in L.patterns:
        vals = [L.alphabet.index(v) for v in a.values]
        for t in itertools.product(range(s), repeat=2):
            req: dict[int, int] = {}
            ok = True
            for (x, y), v in zip(a.shape.cells, vals):
                cell = ((x + t[0]) % s) * s + (y + t[1]) % s
                if req.setdefault(cell, v) != v:
                    ok = False  # pattern wraps onto itself inconsistently; it can never appear
                    break
            if ok:
                out.append(req)
    return out


def _search_torus(L: ForbiddenSet, s: int) -> list[int] | None:
    """Backtracking over the s*s cells in row-major order with forward checking."""
    q = len(L.alphabet)
    ncell = s * s
    places = _torus_placements(L, s)
    touching: list[list[int]] = [[] for _ in range(ncell)]
    for k, req in enumerate(places):
        for c in req:
            touching[c].append(k)
    value = [-1] * ncell
    domain = [set(range(q)) for _ in range(ncell)]

    def assign(c: int, v: int, trail: list) -> bool:
        value[c] = v
        for k in touching[c]:
            req = places[k]
            free = []
            matched = True
            for cc, vv in req.items():
                if value[cc] == -1:
                    free.append(cc)
                elif value[cc] != vv:
                    matched = False
                    break
            if not matched:
                continue
            if not free:
                return False
            if len(free) == 1:
                f = free[0]
                bad = req[f]
                if bad in domain[f]:
                    domain[f].discard(bad)
                    trail.append((f, bad))
                    if not domain[f]:
                        return False
        return True

    def undo(c: int, trail: list) -> None:
        value[c] = -1
        for f, v in trail:
            domain[f].add(v)

    # iterative depth-first search; frames hold (cell, remaining candidate values, trail)
    frames: list[tuple[int, list[int], list]] = []
    c = 0
    cands = sorted(domain[0])
    while True:
        if c == ncell:
            return list(value)
        placed = False
        while cands:
            v = cands.pop(0)
            trail: list = []
            if assign(c, v, trail):
                frames.append((c, cands, trail))
                placed = True
                break
            undo(c, trail)
        if placed:
            c += 1
            if c < ncell:
                cands = sorted(domain[c])
            continue
        if not frames:
            return None
        c, cands, trail = frames.pop()
        undo(c, trail)


def _torus_measure(values: list[int], s: int, n: int, alphabet: Alphabet, caps: Caps) -> MeasureVector:
    index = PatternIndex(2, n, alphabet, caps)
    vals = [Fraction(0)] * index.size
    w = Fraction(1, s * s)
    for t in itertools.product(range(s), repeat=2):
        digits = [values[((t[0] + x) % s) * s + (t[1] + y) % s] for x, y in index.shape.cells]
        vals[index.index_of_digits(digits)] += w
    return MeasureVector(index, vals)


def bounded_2d_periodic_search(L: ForbiddenSet, m: int, n: int, caps: Caps = DEFAULT_CAPS) -> TorusHit | None:
    """Look for an s x s periodic configuration avoiding L, for s = 1..m.

    A hit yields the window frequencies of that periodic point, which lie in
    I_n. ``None`` only means that no periodic configuration up to size m
    exists; it says nothing about emptiness of the shift.
    """
    if L.d != 2:
        raise WrongDimension("the torus search is two-dimensional")
    if m < 1:
        raise InvalidInput("torus size must be positive")
    caps.check("torus", m)
    for s in range(1, m + 1):
        found = _search_torus(L, s)
        if found is not None:
            config = tuple(tuple(L.alphabet.symbols[found[i * s + j]] for j in range(s)) for i in range(s))
            return TorusHit(s, config, _torus_measure(found, s, n, L.alphabet, caps))
    return None


def hard_squares(alphabet=("0", "1")) -> ForbiddenSet:
    """No two 1s adjacent horizontally or vertically."""
    return ForbiddenSet(2, Alphabet.of(alphabet), (
        Pattern.from_mapping({(0, 0): "1", (0, 1): "1"}, 2),
        Pattern.from_mapping({(0, 0): "1", (1, 0): "1"}, 2),
    ))


def checkerboard(alphabet=("0", "1")) -> ForbiddenSet:
    """Equal horizontal or vertical neighbours forbidden."""
    alphabet = Alphabet.of(alphabet)
    pats = []
    for v in alphabet.symbols:
        pats.append(Pattern.from_mapping({(0, 0): v, (0, 1): v}, 2))
        pats.append(Pattern.from_mapping({(0, 0): v, (1, 0): v}, 2))
    return ForbiddenSet(2, alphabet, tuple(pats))
