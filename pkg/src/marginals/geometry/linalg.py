"""Sparse exact linear algebra over Q.

Rows are dicts {column: Fraction}; zero entries are never stored.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

SparseRow = dict[int, Fraction]


def to_sparse(row) -> SparseRow:
    if isinstance(row, Mapping):
        return {int(j): Fraction(v) for j, v in row.items() if v}
    return {j: Fraction(v) for j, v in enumerate(row) if v}


def _axpy(row: SparseRow, f: Fraction, other: SparseRow) -> None:
    """row -= f * other, in place."""
    for j, v in other.items():
        nv = row.get(j, 0) - f * v
        if nv:
            row[j] = nv
        else:
            row.pop(j, None)


def echelon(rows: Iterable) -> dict[int, SparseRow]:
    """Row echelon form keyed by pivot column; each pivot row is scaled to 1 at its pivot."""
    pivots: dict[int, SparseRow] = {}
    for r in rows:
        row = to_sparse(r)
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                inv = 1 / row[c]
                pivots[c] = {j: v * inv for j, v in row.items()}
                break
            _axpy(row, row[c], p)
    return pivots


def rref(rows: Iterable) -> dict[int, SparseRow]:
    piv = echelon(rows)
    for c in sorted(piv, reverse=True):
        row = piv[c]
        for j in [j for j in row if j != c and j in piv]:
            _axpy(row, row[j], piv[j])
    return piv


def rank(rows: Iterable) -> int:
    """Rank over Q, by fraction-free elimination on the rows scaled to integers."""
    pivots: dict[int, dict[int, int]] = {}
    for r in rows:
        row = to_sparse(r)
        if not row:
            continue
        den = lcm(*(v.denominator for v in row.values()))
        row = _content_free({j: int(v * den) for j, v in row.items()})
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                pivots[c] = row
                break
            g = gcd(p[c], row[c])
            a, b = p[c] // g, row[c] // g
            new = {j: a * v for j, v in row.items()}
            for j, v in p.items():
                nv = new.get(j, 0) - b * v
                if nv:
                    new[j] = nv
                else:
                    new.pop(j, None)
            row = _content_free(new)
    return len(pivots)


def _content_free(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()} if g > 1 else row


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    fr = [Fraction(v) for v in vec]
    den = lcm(*(v.denominator for v in fr)) if fr else 1
    ints = [int(v * den) for v in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def nullspace(rows: Iterable, ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of {x : row . x = 0 for all rows}."""
    piv = rref(rows)
    basis = []
    for f in range(ncols):
        if f in piv:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for c, row in piv.items():
            if f in row:
                v[c] = -row[f]
        basis.append(primitive(v))
    return basis


def solve_affine(rows: Sequence, rhs: Sequence, ncols: int):
    """Solutions of A x = b as (particular, integer nullspace basis), or None if inconsistent."""
    aug = []
    for r, b in zip(rows, rhs):
        row = to_sparse(r)
        if b:
            row[ncols] = Fraction(b)
        aug.append(row)
    piv = rref(aug)
    if ncols in piv:
        return None
    x0 = [Fraction(0)] * ncols
    for c, row in piv.items():
        x0[c] = row.get(ncols, Fraction(0))
    basis = []
    for f in range(ncols):
        if f in piv:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for c, row in piv.items():
            if f in row:
                v[c] = -row[f]
        basis.append(primitive(v))
    return x0, basis


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b) if x and y)


def sparse_dot(row: Mapping[int, Fraction], x: Sequence):
    return sum((v * x[j] for j, v in row.items()), Fraction(0))
