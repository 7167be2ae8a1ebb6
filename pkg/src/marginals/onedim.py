"""One-dimensional machinery: Markov extensions, de Bruijn graphs, periodic orbits.

Words are handled as tuples of symbol indices (digits). A transition graph on
Sigma^{2n} has one edge per admissible (2n+1)-word w, running from w[:-1] to
w[1:]. Edges carry their label so that n = 0 (a single empty state with one
loop per symbol) needs no special casing.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .config import DEFAULT_CAPS, Caps
from .errors import InvalidInput, NotLocallyInvariant, VerificationFailure, WrongDimension
from .geometry import HPolytope, VPolytope, lp_feasible, lp_optimize, vertex_enumeration
from .geometry.rational import fmt_q, parse_q
from .invariance import MeasureVector, build_Iloc, invariance_violations
from .patterns import Alphabet, PatternIndex

Word = tuple[int, ...]


def _least_rotation(w: Word) -> Word:
    return min(w[i:] + w[:i] for i in range(len(w)))


def _is_primitive(w: Word) -> bool:
    p = len(w)
    return all(w != w[k:] + w[:k] for k in range(1, p) if p % k == 0)


@dataclass(frozen=True)
class PeriodicOrbit:
    """Orbit of w^infinity, stored by its lexicographically least rotation."""

    alphabet: Alphabet
    word: Word

    def __post_init__(self):
        w = tuple(int(x) for x in self.word)
        if not w:
            raise InvalidInput("periodic orbit needs a nonempty word")
        if any(not 0 <= x < len(self.alphabet) for x in w):
            raise InvalidInput("orbit word uses symbols outside the alphabet")
        if not _is_primitive(w):
            raise InvalidInput(f"orbit word {self.alphabet.render([self.alphabet.symbols[x] for x in w])} is a proper power")
        object.__setattr__(self, "word", _least_rotation(w))

    @classmethod
    def of(cls, word, alphabet) -> PeriodicOrbit:
        alphabet = Alphabet.of(alphabet)
        return cls(alphabet, tuple(alphabet.index(s) for s in alphabet.split(word)))

    @property
    def period(self) -> int:
        return len(self.word)

    @property
    def label(self) -> str:
        return self.alphabet.render([self.alphabet.symbols[x] for x in self.word])

    def sort_key(self):
        return (self.period, self.word)

    def __repr__(self) -> str:
        return f"PeriodicOrbit({self.label!r})"


@dataclass(frozen=True)
class TransitionGraph:
    alphabet: Alphabet
    n: int
    states: tuple[Word, ...]
    edges: tuple[Word, ...]

    def __post_init__(self):
        states = tuple(sorted(set(self.states)))
        edges = tuple(sorted(set(self.edges)))
        sset = set(states)
        for e in edges:
            if len(e) != 2 * self.n + 1:
                raise InvalidInput("edge labels must have length 2n+1")
            if e[:-1] not in sset or e[1:] not in sset:
                raise InvalidInput("edge endpoint is not a state")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "edges", edges)

    def successors(self) -> dict[Word, list[Word]]:
        out: dict[Word, list[Word]] = {s: [] for s in self.states}
        for e in self.edges:
            out[e[:-1]].append(e)
        return out

    def is_subgraph_of(self, other: TransitionGraph) -> bool:
        return set(self.states) <= set(other.states) and set(self.edges) <= set(other.edges)

    def label(self, w: Word) -> str:
        return self.alphabet.render([self.alphabet.symbols[x] for x in w])

    @classmethod
    def from_measure(cls, mu: MeasureVector) -> TransitionGraph:
        index = mu.index
        if index.d != 1:
            raise WrongDimension("transition graphs are defined for d = 1")
        edges = [index.digits(i) for i in mu.support()]
        states = {e[:-1] for e in edges} | {e[1:] for e in edges}
        return cls(index.alphabet, index.n, tuple(states), tuple(edges))


def debruijn_graph(alphabet, n: int, caps: Caps = DEFAULT_CAPS) -> TransitionGraph:
    alphabet = Alphabet.of(alphabet)
    q = len(alphabet)
    caps.check("patterns", q ** (2 * n + 1))
    states = tuple(itertools.product(range(q), repeat=2 * n))
    edges = tuple(itertools.product(range(q), repeat=2 * n + 1))
    return TransitionGraph(alphabet, n, states, edges)


def _component(start: int, adj: Mapping[int, Sequence[int]]) -> set[int]:
    """Strongly connected component of ``start`` in the graph given by adj (nodes >= start)."""

    def reach(graph):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in graph.get(v, ()):
                if w >= start and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    radj: dict[int, list[int]] = defaultdict(list)
    for v, ws in adj.items():
        for w in ws:
            radj[w].append(v)
    return reach(adj) & reach(radj)


def _johnson(nnodes: int, adj: Mapping[int, Sequence[int]]) -> Iterator[list[int]]:
    """Johnson's elementary-circuit enumeration; cycles are node lists starting at their least node."""
    for s in range(nnodes):
        comp = _component(s, adj)
        sub = {v: [w for w in adj.get(v, ()) if w in comp] for v in comp}
        if len(comp) == 1 and s not in sub[s]:
            continue
        blocked = {s}
        B: dict[int, set[int]] = defaultdict(set)
        path = [s]
        closed = [False]
        stack = [iter(sub[s])]

        def unblock(x):
            todo = [x]
            while todo:
                y = todo.pop()
                if y in blocked:
                    blocked.discard(y)
                    todo.extend(B[y])
                    B[y].clear()

        while stack:
            v = path[-1]
            for w in stack[-1]:
                if w == s:
                    yield list(path)
                    closed[-1] = True
                elif w not in blocked:
                    path.append(w)
                    closed.append(False)
                    stack.append(iter(sub[w]))
                    blocked.add(w)
                    break
            else:
                stack.pop()
                path.pop()
                found = closed.pop()
                if found:
                    unblock(v)
                    if closed:
                        closed[-1] = True
                else:
                    for w in sub[v]:
                        B[w].add(v)


def simple_cycles(g: TransitionGraph) -> list[PeriodicOrbit]:
    """Every simple directed cycle (parallel loops counted separately), as canonical orbits."""
    order = {s: i for i, s in enumerate(g.states)}
    by_pair: dict[tuple[int, int], list[Word]] = defaultdict(list)
    adj: dict[int, list[int]] = defaultdict(list)
    for e in g.edges:
        a, b = order[e[:-1]], order[e[1:]]
        if not by_pair[(a, b)]:
            adj[a].append(b)
        by_pair[(a, b)].append(e)
    orbits = set()
    for cyc in _johnson(len(g.states), adj):
        hops = [by_pair[(cyc[i], cyc[(i + 1) % len(cyc)])] for i in range(len(cyc))]
        for choice in itertools.product(*hops):
            orbits.add(PeriodicOrbit(g.alphabet, tuple(e[0] for e in choice)))
    return sorted(orbits, key=PeriodicOrbit.sort_key)


def orbit_measure(orbit: PeriodicOrbit, n: int, caps: Caps = DEFAULT_CAPS) -> MeasureVector:
    """Window frequencies of w^infinity on Omega_n: 1/p per cyclic window."""
    index = PatternIndex(1, n, orbit.alphabet, caps)
    w, p = orbit.word, orbit.period
    vals = [Fraction(0)] * index.size
    for i in range(p):
        window = [w[(i + j) % p] for j in range(2 * n + 1)]
        vals[index.index_of_digits(window)] += Fraction(1, p)
    return MeasureVector(index, vals)


@dataclass(frozen=True)
class MarkovChain:
    """Stationary chain on Sigma^{2n}; ``edges`` maps each (2n+1)-word to its transition probability."""

    alphabet: Alphabet
    n: int
    states: tuple[Word, ...]
    edges: Mapping[Word, Fraction]
    pi: tuple[Fraction, ...]

    @property
    def P(self) -> list[list[Fraction]]:
        pos = {s: i for i, s in enumerate(self.states)}
        m = [[Fraction(0)] * len(self.states) for _ in self.states]
        for e, p in self.edges.items():
            m[pos[e[:-1]]][pos[e[1:]]] += p
        return m

    def graph(self) -> TransitionGraph:
        return TransitionGraph(self.alphabet, self.n, self.states, tuple(e for e, p in self.edges.items() if p))

    def verify(self) -> None:
        """Rows sum to 1, pi is a probability vector and pi P = pi, all exactly."""
        P = self.P
        for s, row in zip(self.states, P):
            if sum(row) != 1:
                raise VerificationFailure(f"row of state {s} sums to {sum(row)}")
        if sum(self.pi) != 1 or any(x <= 0 for x in self.pi):
            raise VerificationFailure("stationary vector is not a positive probability vector")
        k = len(self.states)
        for j in range(k):
            if sum((self.pi[i] * P[i][j] for i in range(k)), Fraction(0)) != self.pi[j]:
                raise VerificationFailure(f"stationarity fails at state {self.states[j]}")

    def to_json(self) -> dict:
        lab = lambda w: self.alphabet.render([self.alphabet.symbols[x] for x in w])
        return {
            "alphabet": list(self.alphabet.symbols),
            "n": self.n,
            "states": [lab(s) for s in self.states],
            "P": [[fmt_q(v) for v in row] for row in self.P],
            "pi": [fmt_q(v) for v in self.pi],
            "edges": {lab(e): fmt_q(p) for e, p in sorted(self.edges.items())},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> MarkovChain:
        alphabet = Alphabet.of(obj["alphabet"])
        parse = lambda w: tuple(alphabet.index(s) for s in alphabet.split(w))
        n = int(obj["n"])
        states = tuple(parse(s) for s in obj["states"])
        if "edges" in obj:
            edges = {parse(w): parse_q(p) for w, p in obj["edges"].items()}
        else:
            # recover labels from P; only unambiguous for n >= 1
            if n == 0:
                raise InvalidInput("chain JSON for n = 0 needs the 'edges' field")
            edges = {}
            for a, row in zip(states, obj["P"]):
                for b, p in zip(states, row):
                    p = parse_q(p)
                    if p:
                        if a[1:] != b[:-1]:
                            raise InvalidInput("transition between non-overlapping states")
                        edges[a + b[-1:]] = p
        return cls(alphabet, n, states, edges, tuple(parse_q(x) for x in obj["pi"]))


def markov_extension(mu: MeasureVector) -> MarkovChain:
    """Chain with p_{a,b} = mu([ab_last]) / mu(a on the first 2n cells), verified stationary."""
    index = mu.index
    if index.d != 1:
        raise WrongDimension("Markov extensions exist only in dimension 1")
    bad = next(invariance_violations(mu), None)
    if bad is not None:
        E, a, u, lv, rv = bad
        raise NotLocallyInvariant(
            f"not locally invariant: pattern {list(a.values)} on cells {[c[0] for c in E.cells]} "
            f"has mass {fmt_q(lv)} but its shift by {u[0]} has mass {fmt_q(rv)}",
            {"E": [list(c) for c in E.cells], "a": list(a.values), "u": list(u), "lhs": fmt_q(lv), "rhs": fmt_q(rv)},
        )
    pi: dict[Word, Fraction] = defaultdict(Fraction)
    mass: dict[Word, Fraction] = {}
    for i, v in mu.support_items():
        w = index.digits(i)
        mass[w] = v
        pi[w[:-1]] += v
    states = tuple(sorted(pi))
    edges = {w: v / pi[w[:-1]] for w, v in sorted(mass.items())}
    chain = MarkovChain(index.alphabet, index.n, states, edges, tuple(pi[s] for s in states))
    chain.verify()
    return chain


def chain_marginal(chain: MarkovChain, n: int, caps: Caps = DEFAULT_CAPS) -> MeasureVector:
    if any(len(s) != 2 * n for s in chain.states) or chain.n != n:
        raise InvalidInput(f"chain states have length {2 * chain.n}, expected {2 * n}")
    index = PatternIndex(1, n, chain.alphabet, caps)
    pi = dict(zip(chain.states, chain.pi))
    vals = [Fraction(0)] * index.size
    for e, p in chain.edges.items():
        vals[index.index_of_digits(e)] = pi[e[:-1]] * p
    return MeasureVector(index, vals)


def classify_extreme_points(alphabet, n: int, caps: Caps = DEFAULT_CAPS) -> dict:
    """Pair the vertices of I_n^loc (d = 1) with orbit measures of simple de Bruijn cycles."""
    alphabet = Alphabet.of(alphabet)
    index = PatternIndex(1, n, alphabet, caps)
    verts = vertex_enumeration(build_Iloc(1, n, alphabet, caps), caps).vertices
    orbits = simple_cycles(debruijn_graph(alphabet, n, caps))
    by_measure: dict[tuple, list[PeriodicOrbit]] = defaultdict(list)
    for o in orbits:
        by_measure[orbit_measure(o, n, caps).values].append(o)

    def masses(v):
        return {index.word(i): fmt_q(x) for i, x in enumerate(v) if x}

    pairs, unmatched = [], []
    for v in verts:
        found = by_measure.get(v, [])
        if len(found) == 1:
            pairs.append({"orbit": found[0].label, "period": found[0].period, "vertex": masses(v)})
        else:
            unmatched.append(masses(v))
    vset = set(verts)
    non_extreme = [o.label for o in orbits if orbit_measure(o, n, caps).values not in vset]
    collisions = [[o.label for o in os] for os in by_measure.values() if len(os) > 1]
    bijection = not unmatched and not non_extreme and not collisions and len(pairs) == len(orbits)
    pairs.sort(key=lambda r: (r["period"], r["orbit"]))
    return {
        "alphabet": list(alphabet.symbols),
        "n": n,
        "vertices": len(verts),
        "orbits": len(orbits),
        "pairs": pairs,
        "unmatched_vertices": unmatched,
        "non_extreme_orbits": non_extreme,
        "orbit_collisions": collisions,
        "bijection": bijection,
        "status": "OK" if bijection else "FAILURE",
    }


@dataclass(frozen=True)
class Decompositions:
    first: tuple[Fraction, ...]
    second: tuple[Fraction, ...] | None

    @property
    def unique(self) -> bool:
        return self.second is None


def _decomposition_polytope(mu: MeasureVector, vertices: Sequence[Sequence]) -> HPolytope:
    k = len(vertices)
    eq = [({i: 1 for i in range(k)}, 1)]
    for j in range(mu.index.size):
        eq.append(({i: v[j] for i, v in enumerate(vertices) if v[j]}, mu.values[j]))
    return HPolytope.build(k, eq, [({i: -1}, 0) for i in range(k)])


def find_two_decompositions(mu: MeasureVector, vertices: VPolytope) -> Decompositions:
    """Two different convex weightings of ``vertices`` that both give mu, or a uniqueness verdict.

    Each weight coordinate is minimized and maximized in turn; the first one
    with a nonzero range yields two distinct basic solutions. If every range
    is a single value the decomposition polytope is a point.
    """
    if vertices.dim != mu.index.size:
        raise InvalidInput("vertex list lives in a different space than the measure")
    H = _decomposition_polytope(mu, vertices.vertices)
    if not lp_feasible(H).feasible:
        raise InvalidInput("measure is not in the convex hull of the given vertices")
    k = len(vertices.vertices)
    first = None
    for j in range(k):
        c = [0] * k
        c[j] = 1
        lo = lp_optimize(H, c)
        hi = lp_optimize(H, c, maximize=True)
        if first is None:
            first = lo.x
        if lo.value != hi.value:
            return Decompositions(lo.x, hi.x)
    return Decompositions(first, None)


def no_repeat_example(q: int = 4) -> dict:
    """The measure uniform on 3-words with distinct symbols, written two ways.

    Once as the average of orbit measures of period-3 words with distinct
    symbols, once as the average over period-4 words using all four symbols.
    Both averages are recomputed from orbit measures and compared exactly.
    """
    alphabet = Alphabet.of([str(i) for i in range(1, q + 1)])
    index = PatternIndex(1, 1, alphabet)
    target = [Fraction(0)] * index.size
    words = [w for w in itertools.permutations(range(q), 3)]
    for w in words:
        target[index.index_of_digits(w)] = Fraction(1, len(words))
    mu = MeasureVector(index, target)

    def average(length):
        perms = list(itertools.permutations(range(q), length))
        acc = [Fraction(0)] * index.size
        weights: dict[str, Fraction] = defaultdict(Fraction)
        for w in perms:
            o = PeriodicOrbit(alphabet, w)
            weights[o.label] += Fraction(1, len(perms))
            for i, x in enumerate(orbit_measure(o, 1).values):
                acc[i] += x / len(perms)
        return dict(sorted(weights.items())), tuple(acc)

    w3, m3 = average(3)
    w4, m4 = average(4)
    return {
        "measure": mu.to_json(),
        "period3": {k: fmt_q(v) for k, v in w3.items()},
        "period4": {k: fmt_q(v) for k, v in w4.items()},
        "period3_reproduces": m3 == mu.values,
        "period4_reproduces": m4 == mu.values,
        "orbits_disjoint": not set(w3) & set(w4),
    }
