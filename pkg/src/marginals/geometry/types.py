from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import InvalidInput
from .linalg import sparse_dot, to_sparse
from .rational import fmt_q, fmt_vec, parse_q, parse_vec

Row = tuple[tuple[int, Fraction], ...]
Constraint = tuple[Row, Fraction]
Vector = tuple[Fraction, ...]


def _row(r, dim: int) -> Row:
    sp = to_sparse(r)
    if sp and (min(sp) < 0 or max(sp) >= dim):
        raise InvalidInput(f"constraint row has a column outside 0..{dim - 1}")
    return tuple(sorted(sp.items()))


@dataclass(frozen=True)
class HPolytope:
    """{x in Q^dim : eq rows . x = rhs, ineq rows . x <= rhs}. Rows are stored sparse."""

    dim: int
    eq: tuple[Constraint, ...] = ()
    ineq: tuple[Constraint, ...] = ()

    @classmethod
    def build(cls, dim: int, eq=(), ineq=()) -> HPolytope:
        return cls(
            dim,
            tuple((_row(r, dim), Fraction(b)) for r, b in eq),
            tuple((_row(r, dim), Fraction(b)) for r, b in ineq),
        )

    def add(self, eq=(), ineq=()) -> HPolytope:
        extra = HPolytope.build(self.dim, eq, ineq)
        return HPolytope(self.dim, self.eq + extra.eq, self.ineq + extra.ineq)

    def contains(self, x: Sequence) -> bool:
        x = tuple(Fraction(v) for v in x)
        if len(x) != self.dim:
            raise InvalidInput("point has wrong dimension")
        return all(sparse_dot(dict(r), x) == b for r, b in self.eq) and all(
            sparse_dot(dict(r), x) <= b for r, b in self.ineq
        )

    def to_json(self) -> dict:
        def dense(r):
            out = [Fraction(0)] * self.dim
            for j, v in r:
                out[j] = v
            return fmt_vec(out)

        return {
            "dim": self.dim,
            "eq": [[dense(r), fmt_q(b)] for r, b in self.eq],
            "ineq": [[dense(r), fmt_q(b)] for r, b in self.ineq],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> HPolytope:
        dim = int(obj["dim"])
        return cls.build(
            dim,
            [(parse_vec(r), parse_q(b)) for r, b in obj.get("eq", [])],
            [(parse_vec(r), parse_q(b)) for r, b in obj.get("ineq", [])],
        )


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of finitely many rational points; vertices kept sorted and distinct.

    Producers in this package only hand over irredundant lists; use
    ``extreme_subset`` to build one from arbitrary points.
    """

    dim: int
    vertices: tuple[Vector, ...] = ()

    def __post_init__(self):
        verts = sorted({tuple(Fraction(x) for x in v) for v in self.vertices})
        if any(len(v) != self.dim for v in verts):
            raise InvalidInput(f"vertex of wrong dimension for dim={self.dim}")
        object.__setattr__(self, "vertices", tuple(verts))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [fmt_vec(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, obj: Mapping) -> VPolytope:
        return cls(int(obj["dim"]), tuple(parse_vec(v) for v in obj["vertices"]))


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + offset, with the matrix stored as sparse rows."""

    rows: tuple[Row, ...]
    ncols: int
    offset: Vector = field(default=())

    def __post_init__(self):
        off = tuple(Fraction(x) for x in self.offset) or (Fraction(0),) * len(self.rows)
        if len(off) != len(self.rows):
            raise InvalidInput("offset length does not match matrix rows")
        object.__setattr__(self, "offset", off)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence], offset: Sequence = ()) -> AffineMap:
        ncols = len(matrix[0]) if matrix else 0
        return cls(tuple(_row(r, ncols) for r in matrix), ncols, tuple(offset))

    @classmethod
    def identity(cls, dim: int) -> AffineMap:
        return cls(tuple((((i, Fraction(1)),)) for i in range(dim)), dim)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __call__(self, x: Sequence) -> Vector:
        if len(x) != self.ncols:
            raise InvalidInput("map applied to vector of wrong dimension")
        return tuple(sum((v * x[j] for j, v in r), Fraction(0)) + o for r, o in zip(self.rows, self.offset))

    def dense(self) -> list[list[Fraction]]:
        out = []
        for r in self.rows:
            d = [Fraction(0)] * self.ncols
            for j, v in r:
                d[j] = v
            out.append(d)
        return out

    def compose(self, inner: AffineMap) -> AffineMap:
        """self o inner."""
        if inner.nrows != self.ncols:
            raise InvalidInput("incompatible maps")
        inner_cols = [dict() for _ in range(inner.nrows)]
        for i, r in enumerate(inner.rows):
            inner_cols[i] = dict(r)
        rows = []
        for r in self.rows:
            acc: dict[int, Fraction] = {}
            for k, v in r:
                for j, w in inner_cols[k].items():
                    acc[j] = acc.get(j, 0) + v * w
            rows.append(tuple(sorted((j, v) for j, v in acc.items() if v)))
        off = tuple(
            sum((v * inner.offset[k] for k, v in r), Fraction(0)) + o for r, o in zip(self.rows, self.offset)
        )
        return AffineMap(tuple(rows), inner.ncols, off)

    def transpose_apply(self, c: Sequence) -> list[Fraction]:
        """matrix^T @ c."""
        out = [Fraction(0)] * self.ncols
        for r, ci in zip(self.rows, c):
            if ci:
                for j, v in r:
                    out[j] += v * ci
        return out

    def to_json(self) -> dict:
        return {"matrix": [fmt_vec(r) for r in self.dense()], "offset": fmt_vec(self.offset)}

    @classmethod
    def from_json(cls, obj: Mapping) -> AffineMap:
        return cls.from_matrix([parse_vec(r) for r in obj["matrix"]], parse_vec(obj.get("offset", [])))


@dataclass(frozen=True)
class FeasibilityCertificate:
    """Either a feasible point or Farkas multipliers (y_eq free, y_ineq >= 0).

    Infeasibility reads: y_eq^T A_eq + y_ineq^T A_ineq = 0 while
    y_eq^T b_eq + y_ineq^T b_ineq < 0, i.e. the combination asserts 0 <= negative.
    """

    feasible: bool
    point: Vector | None = None
    eq_multipliers: Vector | None = None
    ineq_multipliers: Vector | None = None

    def verify(self, H: HPolytope) -> bool:
        if self.feasible:
            return self.point is not None and H.contains(self.point)
        y_eq, y_in = self.eq_multipliers, self.ineq_multipliers
        if y_eq is None or y_in is None or len(y_eq) != len(H.eq) or len(y_in) != len(H.ineq):
            return False
        if any(y < 0 for y in y_in):
            return False
        combo = [Fraction(0)] * H.dim
        rhs = Fraction(0)
        for (r, b), y in zip(H.eq + H.ineq, tuple(y_eq) + tuple(y_in)):
            if y:
                for j, v in r:
                    combo[j] += y * v
                rhs += y * b
        return all(c == 0 for c in combo) and rhs < 0

    def to_json(self) -> dict:
        if self.feasible:
            return {"feasible": True, "point": fmt_vec(self.point)}
        return {
            "feasible": False,
            "eq_multipliers": fmt_vec(self.eq_multipliers),
            "ineq_multipliers": fmt_vec(self.ineq_multipliers),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> FeasibilityCertificate:
        if obj["feasible"]:
            return cls(True, parse_vec(obj["point"]))
        return cls(False, None, parse_vec(obj["eq_multipliers"]), parse_vec(obj["ineq_multipliers"]))
