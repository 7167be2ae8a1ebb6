"""Double description method on integer data.

Computes the extreme rays of a pointed cone {y : G y >= 0}. Constraints are
inserted in their given order after an initial simplicial cone made of the
first linearly independent rows. Rays are kept as primitive integer vectors
and adjacency is decided by the combinatorial test on zero sets, which are
Python ints used as bitsets.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from ..config import DEFAULT_CAPS, Caps
from ..errors import InvalidInput
from .linalg import echelon, primitive


def _prim(v: list[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _dot(g: Sequence[int], r: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(g, r) if a)


def _initial_basis(G: Sequence[Sequence[int]], dim: int) -> list[int]:
    chosen: list[int] = []
    piv: dict = {}
    for i, g in enumerate(G):
        before = len(piv)
        # incremental echelon: reuse pivots found so far
        row = {j: Fraction(v) for j, v in enumerate(g) if v}
        while row:
            c = min(row)
            p = piv.get(c)
            if p is None:
                inv = 1 / row[c]
                piv[c] = {j: v * inv for j, v in row.items()}
                break
            f = row[c]
            for j, v in p.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
        if len(piv) > before:
            chosen.append(i)
            if len(chosen) == dim:
                break
    return chosen


def _inverse_columns(B: list[Sequence[int]]) -> list[tuple[int, ...]]:
    """Columns of B^{-1} (B square, invertible), each scaled to a primitive integer vector."""
    n = len(B)
    cols = []
    for k in range(n):
        rows = [list(B[i]) + [1 if i == k else 0] for i in range(n)]
        piv = echelon(rows)
        x = [Fraction(0)] * n
        for c in sorted(piv, reverse=True):
            row = piv[c]
            x[c] = row.get(n, Fraction(0)) - sum((v * x[j] for j, v in row.items() if j != c and j < n), Fraction(0))
        cols.append(primitive(x))
    return cols


def extreme_rays(G: Sequence[Sequence[int]], dim: int, caps: Caps = DEFAULT_CAPS) -> list[tuple[int, ...]]:
    """Extreme rays of {y in R^dim : G y >= 0}; raises InvalidInput if the cone is not pointed."""
    G = [tuple(int(x) for x in g) for g in G]
    if dim == 0:
        return []
    basis = _initial_basis(G, dim)
    if len(basis) < dim:
        raise InvalidInput("cone is not pointed (constraint matrix lacks full column rank)")
    rays = _inverse_columns([G[i] for i in basis])
    zeros = []
    for k in range(dim):
        z = 0
        for kk, i in enumerate(basis):
            if kk != k:
                z |= 1 << i
        zeros.append(z)

    inbasis = set(basis)
    for i, g in enumerate(G):
        if i in inbasis:
            continue
        vals = [_dot(g, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        bit = 1 << i
        if not neg:
            for k, v in enumerate(vals):
                if v == 0:
                    zeros[k] |= bit
            continue

        # ray bitsets per constraint, for the adjacency test
        nrays = len(rays)
        colmask: dict[int, int] = {}
        for k, z in enumerate(zeros):
            kb = 1 << k
            while z:
                low = z & -z
                c = low.bit_length() - 1
                colmask[c] = colmask.get(c, 0) | kb
                z ^= low
        full = (1 << nrays) - 1
        need = dim - 2

        new_rays, new_zeros = [], []
        for p in pos:
            zp = zeros[p]
            vp = vals[p]
            for q in neg:
                common = zp & zeros[q]
                if common.bit_count() < need:
                    continue
                pair = (1 << p) | (1 << q)
                m = full
                z = common
                while z and m != pair:
                    low = z & -z
                    m &= colmask[low.bit_length() - 1]
                    z ^= low
                if m != pair:
                    continue
                vq = vals[q]
                rp, rq = rays[p], rays[q]
                new_rays.append(_prim([vp * b - vq * a for a, b in zip(rp, rq)]))
                new_zeros.append(common | bit)
        keep = [k for k, v in enumerate(vals) if v >= 0]
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] | (bit if vals[k] == 0 else 0) for k in keep] + new_zeros
        caps.check("generators", len(rays))
    return rays
