"""Local invariance conditions on Omega_n and the polytope of locally invariant measures."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import InvalidInput
from .geometry import HPolytope
from .geometry.linalg import nullspace, rank
from .geometry.rational import fmt_q, parse_q
from .patterns import Alphabet, Pattern, PatternIndex, Shape, cube_shape, shifts_within, subshapes


@dataclass(frozen=True)
class InvarianceConstraint:
    """mu([a]_n) = mu([Theta^u a]_n), kept as the two cylinder index lists."""

    E: Shape
    a: Pattern
    u: tuple[int, ...]
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]

    def row(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for i in self.lhs:
            out[i] = out.get(i, 0) + 1
        for i in self.rhs:
            out[i] = out.get(i, 0) - 1
        return {i: v for i, v in out.items() if v}

    def evaluate(self, values: Sequence) -> tuple[Fraction, Fraction]:
        return sum((values[i] for i in self.lhs), Fraction(0)), sum((values[i] for i in self.rhs), Fraction(0))

    def to_json(self) -> dict:
        return {
            "E": [list(c) for c in self.E.cells],
            "a": list(self.a.values),
            "u": list(self.u),
            "lhs": list(self.lhs),
            "rhs": list(self.rhs),
        }


def _groups(codes: np.ndarray, ncodes: int) -> list[tuple[int, ...]]:
    order = np.argsort(codes, kind="stable")
    counts = np.bincount(codes, minlength=ncodes)
    bounds = np.concatenate([[0], np.cumsum(counts)])
    return [tuple(int(i) for i in order[bounds[c]:bounds[c + 1]]) for c in range(ncodes)]


def _patterns_on(shape: Shape, alphabet: Alphabet, code: int) -> Pattern:
    q = len(alphabet)
    vals = []
    for _ in shape.cells:
        vals.append(alphabet.symbols[code % q])
        code //= q
    return Pattern(shape, tuple(reversed(vals)))


def _constraints_for(index: PatternIndex, E: Shape, u: tuple[int, ...]) -> list[InvarianceConstraint]:
    Eu = E.translate(u)
    ncodes = index.q ** len(E)
    left = _groups(index.restriction_codes(E), ncodes)
    right = _groups(index.restriction_codes(Eu), ncodes)
    return [
        InvarianceConstraint(E, _patterns_on(E, index.alphabet, c), u, left[c], right[c])
        for c in range(ncodes)
    ]


def maximal_overlap(d: int, n: int, i: int) -> Shape | None:
    """Lambda_n intersected with Lambda_n + e_i (None when n = 0)."""
    if n == 0:
        return None
    cells = tuple(c for c in cube_shape(d, n).cells if c[i] >= -n + 1)
    return Shape(cells, d)


def generator_constraints(d: int, n: int, alphabet, caps: Caps = DEFAULT_CAPS) -> list[InvarianceConstraint]:
    """Unit shifts e_i on the maximal overlaps; generates the full family (see equivalence guard)."""
    index = PatternIndex(d, n, alphabet, caps)
    out: list[InvarianceConstraint] = []
    for i in range(d):
        E = maximal_overlap(d, n, i)
        if E is None:
            continue
        u = tuple(1 if j == i else 0 for j in range(d))
        out.extend(_constraints_for(index, E, u))
    return out


def full_family_shapes(index: PatternIndex) -> Iterator[tuple[Shape, tuple[int, ...]]]:
    for E in subshapes(index.shape):
        for u in shifts_within(E, index.shape):
            yield E, u


def count_full_constraints(index: PatternIndex) -> int:
    return sum(index.q ** len(E) for E, _ in full_family_shapes(index))


def full_constraints(d: int, n: int, alphabet, caps: Caps = DEFAULT_CAPS) -> list[InvarianceConstraint]:
    """Every (E, a, u) with E, E - u inside Lambda_n and u != 0."""
    index = PatternIndex(d, n, alphabet, caps)
    caps.check("constraints", count_full_constraints(index))
    out: list[InvarianceConstraint] = []
    for E, u in full_family_shapes(index):
        out.extend(_constraints_for(index, E, u))
    return out


def build_Iloc(d: int, n: int, alphabet, caps: Caps = DEFAULT_CAPS) -> HPolytope:
    index = PatternIndex(d, n, alphabet, caps)
    N = index.size
    eq = [({i: 1 for i in range(N)}, 1)]
    eq += [(c.row(), 0) for c in generator_constraints(d, n, alphabet, caps)]
    ineq = [({i: -1}, 0) for i in range(N)]
    return HPolytope.build(N, eq, ineq)


class MeasureVector:
    """A probability vector on Omega_n with exact rational entries."""

    def __init__(self, index: PatternIndex, values: Sequence):
        vals = tuple(Fraction(v) for v in values)
        if len(vals) != index.size:
            raise InvalidInput(f"measure has {len(vals)} entries, expected {index.size}")
        if any(v < 0 for v in vals):
            raise InvalidInput("measure has a negative entry")
        if sum(vals) != 1:
            raise InvalidInput(f"measure entries sum to {sum(vals)}, not 1")
        self.index = index
        self.values = vals

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MeasureVector)
            and (self.index.d, self.index.n, self.index.alphabet) == (other.index.d, other.index.n, other.index.alphabet)
            and self.values == other.values
        )

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        supp = ", ".join(f"{self.index.word(i)}: {v}" for i, v in self.support_items())
        return f"MeasureVector({{{supp}}})"

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v]

    def support_items(self) -> list[tuple[int, Fraction]]:
        return [(i, v) for i, v in enumerate(self.values) if v]

    def mass(self, a: Pattern) -> Fraction:
        """mu([a]_n)."""
        code = self.index.encode(a)
        return self.marginal(a.shape).get(code, Fraction(0))

    def marginal(self, shape: Shape) -> dict[int, Fraction]:
        return _marginal(self, shape)

    @classmethod
    def uniform(cls, index: PatternIndex) -> MeasureVector:
        return cls(index, [Fraction(1, index.size)] * index.size)

    @classmethod
    def delta(cls, index: PatternIndex, i: int) -> MeasureVector:
        vals = [Fraction(0)] * index.size
        vals[i] = Fraction(1)
        return cls(index, vals)

    @classmethod
    def from_masses(cls, index: PatternIndex, masses: Mapping) -> MeasureVector:
        vals = [Fraction(0)] * index.size
        for w, v in masses.items():
            vals[index.index_of_word(w) if not isinstance(w, int) else w] += Fraction(v)
        return cls(index, vals)

    def to_json(self) -> dict:
        return {
            "d": self.index.d,
            "n": self.index.n,
            "alphabet": list(self.index.alphabet.symbols),
            "masses": {self.index.word(i): fmt_q(v) for i, v in self.support_items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping, caps: Caps = DEFAULT_CAPS) -> MeasureVector:
        index = PatternIndex(int(obj["d"]), int(obj["n"]), obj["alphabet"], caps)
        if "values" in obj:
            return cls(index, [parse_q(v) for v in obj["values"]])
        if "masses" in obj:
            return cls.from_masses(index, {w: parse_q(v) for w, v in obj["masses"].items()})
        raise InvalidInput("measure JSON needs 'values' or 'masses'")


def _marginal(mu: MeasureVector, shape: Shape) -> dict[int, Fraction]:
    index = mu.index
    cols = [index.position[c] for c in shape.cells]
    out: dict[int, Fraction] = {}
    for i, v in mu.support_items():
        dg = index.digits(i)
        code = 0
        for c in cols:
            code = code * index.q + dg[c]
        out[code] = out.get(code, Fraction(0)) + v
    return out


def invariance_violations(mu: MeasureVector) -> Iterator[tuple[Shape, Pattern, tuple[int, ...], Fraction, Fraction]]:
    """Violated members of the full constraint family, in family order."""
    index = mu.index
    cache: dict[Shape, dict[int, Fraction]] = {}

    def marg(s: Shape):
        if s not in cache:
            cache[s] = _marginal(mu, s)
        return cache[s]

    zero = Fraction(0)
    for E, u in full_family_shapes(index):
        left, right = marg(E), marg(E.translate(u))
        for code in sorted(set(left) | set(right)):
            lv, rv = left.get(code, zero), right.get(code, zero)
            if lv != rv:
                yield E, _patterns_on(E, index.alphabet, code), u, lv, rv


def is_locally_invariant(mu: MeasureVector) -> bool:
    return next(invariance_violations(mu), None) is None


def _int_matrix(vectors: Sequence[Sequence[int]], nrows: int) -> np.ndarray:
    big = max((abs(x) for v in vectors for x in v), default=0)
    dtype = np.int64 if big * nrows < 2**62 else object
    return np.array(vectors, dtype=dtype).T.reshape(nrows, len(vectors))


def generator_equivalence(d: int, n: int, alphabet, caps: Caps = DEFAULT_CAPS) -> dict:
    """Exact check that the generator family and the full family cut out the same subspace.

    Two independent routes. (a) W_full is contained in W_gen because
    generators are members of the full family; for the reverse inclusion take
    an integer basis K of W_gen and verify that every full-family row
    annihilates it, i.e. that within each translation class of sub-shapes the
    marginals of K coincide. (b) When the full family fits under the
    constraint cap, its rank is computed directly and compared.
    """
    index = PatternIndex(d, n, alphabet, caps)
    gen = [c.row() for c in generator_constraints(d, n, alphabet, caps)]
    r_gen = rank(gen)
    K = nullspace(gen, index.size)
    annihilates = True
    if K:
        Km = _int_matrix(K, index.size)
        cache: dict[Shape, np.ndarray] = {}

        def marg(s: Shape) -> np.ndarray:
            if s not in cache:
                out = np.zeros((index.q ** len(s), Km.shape[1]), dtype=Km.dtype)
                np.add.at(out, index.restriction_codes(s), Km)
                cache[s] = out
            return cache[s]

        for E, u in full_family_shapes(index):
            if not np.array_equal(marg(E), marg(E.translate(u))):
                annihilates = False
                break
    r_full = None
    if count_full_constraints(index) <= caps.constraints:
        r_full = rank([c.row() for c in full_constraints(d, n, alphabet, caps)])
    equal = annihilates and (r_full is None or r_full == r_gen)
    return {"d": d, "n": n, "alphabet": list(index.alphabet.symbols), "rank_generators": r_gen,
            "rank_full": r_full, "annihilates": annihilates, "equal": equal}

