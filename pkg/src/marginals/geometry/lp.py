"""Exact rational simplex (two phases, Dantzig pricing with Bland fallback) and Farkas certificates.

The solver works on the standard form M z = r, z >= 0, r >= 0 that is
derived from an HPolytope: variables carrying an explicit ``-x_j <= 0`` row
become nonnegative columns, the rest are split into x+ - x-, and every
other inequality receives a slack. Infeasibility multipliers found in phase
one are mapped back onto the original rows and checked by substitution.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import VerificationFailure
from .linalg import _axpy
from .types import FeasibilityCertificate, HPolytope, Vector


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Vector | None = None
    value: Fraction | None = None
    certificate: FeasibilityCertificate | None = None


class _Simplex:
    BLAND_AFTER = 50  # consecutive degenerate pivots before switching rules

    def __init__(self, rows: list[dict], rhs: list[Fraction], nstruct: int):
        m = len(rows)
        self.nstruct = nstruct
        self.rows = [dict(r) for r in rows]
        for i, r in enumerate(self.rows):
            r[nstruct + i] = Fraction(1)
        self.rhs = list(rhs)
        self.basis = [nstruct + i for i in range(m)]

    def pivot(self, r: int, q: int, d: dict) -> None:
        prow = self.rows[r]
        piv = prow[q]
        if piv != 1:
            inv = 1 / piv
            prow = {j: v * inv for j, v in prow.items()}
            self.rows[r] = prow
            self.rhs[r] *= inv
        br = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row.get(q)
                if f:
                    _axpy(row, f, prow)
                    if br:
                        self.rhs[i] -= f * br
        f = d.get(q)
        if f:
            _axpy(d, f, prow)
        self.basis[r] = q

    def run(self, d: dict, ncols: int) -> str:
        # Dantzig's rule, switching to Bland's rule while a degenerate streak lasts;
        # cycling needs an endless degenerate streak, which Bland's rule rules out.
        stalled = 0
        while True:
            if stalled < self.BLAND_AFTER:
                q = min(((v, j) for j, v in d.items() if v < 0 and j < ncols), default=(None, None))[1]
            else:
                q = min((j for j, v in d.items() if v < 0 and j < ncols), default=None)
            if q is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(q)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            stalled = stalled + 1 if best[0][0] == 0 else 0
            self.pivot(best[1], q, d)

    def phase_one(self) -> str:
        d: dict = {}
        for row in self.rows:
            for j, v in row.items():
                if j < self.nstruct:
                    d[j] = d.get(j, 0) - v
        self.d1 = {j: v for j, v in d.items() if v}
        self.run(self.d1, self.nstruct + len(self.rows))
        infeas = sum((self.rhs[i] for i, b in enumerate(self.basis) if b >= self.nstruct), Fraction(0))
        return "infeasible" if infeas > 0 else "feasible"

    def phase_one_duals(self) -> list[Fraction]:
        return [1 - self.d1.get(self.nstruct + i, Fraction(0)) for i in range(len(self.rows))]

    def drop_artificials(self) -> None:
        keep = []
        for i, b in enumerate(self.basis):
            if b >= self.nstruct:
                q = min((j for j in self.rows[i] if j < self.nstruct), default=None)
                if q is None:
                    continue  # redundant row
                self.pivot(i, q, {})
            keep.append(i)
        self.rows = [{j: v for j, v in self.rows[i].items() if j < self.nstruct} for i in keep]
        self.rhs = [self.rhs[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]
        self.kept = keep

    def install(self, cols: Sequence[int]) -> bool:
        """Pivot the given structural columns into the basis, one per row.

        Artificial entries stay in the rows, where they hold the basis
        inverse. Returns False when the columns are not a feasible basis.
        """
        for q in cols:
            r = next((i for i, b in enumerate(self.basis) if b >= self.nstruct and self.rows[i].get(q)), None)
            if r is None:
                return False
            self.pivot(r, q, {})
        return all(b < self.nstruct for b in self.basis) and all(v >= 0 for v in self.rhs)

    def add_column(self, j: int, col: Sequence[tuple[int, Fraction]]) -> None:
        """Append original column j as B^-1 a_j, read off the artificial entries."""
        art = self.nstruct
        for row in self.rows:
            t = sum((v * row[art + k] for k, v in col if art + k in row), Fraction(0))
            if t:
                row[j] = t

    def phase_two(self, cost: dict) -> str:
        d = {j: Fraction(v) for j, v in cost.items() if v}
        for i, b in enumerate(self.basis):
            cb = cost.get(b)
            if cb:
                _axpy(d, cb, self.rows[i])
        self.d = d
        return self.run(d, self.nstruct)

    def solution(self) -> list[Fraction]:
        z = [Fraction(0)] * self.nstruct
        for i, b in enumerate(self.basis):
            if b < self.nstruct:
                z[b] = self.rhs[i]
        return z


class _StandardForm:
    def __init__(self, H: HPolytope):
        self.H = H
        nonneg: dict[int, int] = {}
        for i, (r, b) in enumerate(H.ineq):
            if len(r) == 1 and b == 0 and r[0][1] < 0:
                nonneg.setdefault(r[0][0], i)
        fixed: dict[int, int] = {}
        for i, (r, b) in enumerate(H.eq):
            if len(r) == 1 and b == 0 and r[0][0] in nonneg:
                fixed.setdefault(r[0][0], i)
        self.nonneg, self.fixed = nonneg, fixed
        implicit = set(nonneg.values())
        fixed_rows = set(fixed.values())

        cols: dict[int, tuple[int, int | None]] = {}
        ncol = 0
        for j in range(H.dim):
            if j in fixed:
                continue
            if j in nonneg:
                cols[j] = (ncol, None)
                ncol += 1
            else:
                cols[j] = (ncol, ncol + 1)
                ncol += 2
        self.cols = cols

        def convert(r):
            row = {}
            for j, v in r:
                if j in fixed:
                    continue
                p, m = cols[j]
                row[p] = v
                if m is not None:
                    row[m] = -v
            return row

        rows, rhs, origin = [], [], []
        for i, (r, b) in enumerate(H.eq):
            if i not in fixed_rows:
                rows.append(convert(r))
                rhs.append(b)
                origin.append(("eq", i))
        for i, (r, b) in enumerate(H.ineq):
            if i not in implicit:
                row = convert(r)
                row[ncol] = Fraction(1)
                ncol += 1
                rows.append(row)
                rhs.append(b)
                origin.append(("in", i))
        self.sigma = []
        for k in range(len(rows)):
            if rhs[k] < 0:
                rows[k] = {j: -v for j, v in rows[k].items()}
                rhs[k] = -rhs[k]
                self.sigma.append(-1)
            else:
                self.sigma.append(1)
        self.rows, self.rhs, self.origin, self.ncol = rows, rhs, origin, ncol

    def cost(self, c: Sequence) -> dict:
        out = {}
        for j, cj in enumerate(c):
            if cj and j in self.cols:
                p, m = self.cols[j]
                out[p] = Fraction(cj)
                if m is not None:
                    out[m] = -Fraction(cj)
        return out

    def point(self, z: Sequence[Fraction]) -> Vector:
        x = [Fraction(0)] * self.H.dim
        for j, (p, m) in self.cols.items():
            x[j] = z[p] - (z[m] if m is not None else 0)
        return tuple(x)

    def farkas(self, w: Sequence[Fraction]) -> FeasibilityCertificate:
        H = self.H
        y_eq = [Fraction(0)] * len(H.eq)
        y_in = [Fraction(0)] * len(H.ineq)
        for k, (kind, i) in enumerate(self.origin):
            val = -self.sigma[k] * w[k]
            if kind == "eq":
                y_eq[i] = val
            else:
                y_in[i] = val
        combo = [Fraction(0)] * H.dim
        for (r, _), y in zip(H.eq + H.ineq, y_eq + y_in):
            if y:
                for j, v in r:
                    combo[j] += y * v
        for j, i in self.nonneg.items():
            if j in self.fixed:
                continue
            coef = H.ineq[i][0][0][1]
            y_in[i] = -combo[j] / coef
        for j, i in self.fixed.items():
            coef = H.eq[i][0][0][1]
            y_eq[i] = -combo[j] / coef
        cert = FeasibilityCertificate(False, None, tuple(y_eq), tuple(y_in))
        if not cert.verify(H):
            raise VerificationFailure("internal error: Farkas certificate failed to verify")
        return cert


@dataclass
class _Prepared:
    """Phase-one outcome of one polytope, reused by every objective."""

    sf: _StandardForm
    farkas: FeasibilityCertificate | None
    z: list | None = None
    basis: tuple = ()
    columns: dict | None = None  # column -> [(kept row position, value)]
    start: _Simplex | None = None  # tableau of the phase-one basis alone


def _restricted_optimum(prep: _Prepared, cost: dict, start: Sequence[int]):
    """Phase two by exact column generation.

    The LP is solved on a growing column subset S, over the linearly
    independent rows only, starting from the phase-one basis. The tableau is
    kept between rounds: the artificial entries carry B^-1, so new columns
    enter as B^-1 a_j and the duals are minus the artificial reduced costs.
    Columns with negative reduced cost join S; a pricing pass with none
    proves optimality, and S only grows, so the loop terminates.
    """
    sf = prep.sf
    n = sf.ncol
    tab = _Simplex.__new__(_Simplex)
    tab.nstruct = n
    tab.rows = [dict(r) for r in prep.start.rows]
    tab.rhs = list(prep.start.rhs)
    tab.basis = list(prep.start.basis)
    m = len(tab.rows)
    S = set(start) | set(prep.basis)
    for j in S:
        if j not in prep.basis:
            tab.add_column(j, prep.columns.get(j, ()))
    while True:
        if tab.phase_two({j: v for j, v in cost.items() if j in S}) == "unbounded":
            return None
        y = [-tab.d.get(n + k, Fraction(0)) for k in range(m)]
        priced = []
        for j in range(n):
            if j in S:
                continue
            rc = cost.get(j, Fraction(0)) - sum((y[k] * v for k, v in prep.columns.get(j, ()) if y[k]), Fraction(0))
            if rc < 0:
                priced.append((rc, j))
        if not priced:
            return tab.solution()
        priced.sort()
        for _, j in priced[: max(_BATCH, m // 2)]:
            S.add(j)
            tab.add_column(j, prep.columns.get(j, ()))


_BATCH = 32
_SEED_ABOVE = 64  # problems with more columns get a floating-point hint


def _float_support(sf: _StandardForm, cost: dict) -> list[int]:
    """Columns used by a floating-point optimum; a hint for column generation, never trusted."""
    try:
        import numpy as np
        from scipy.optimize import linprog
        from scipy.sparse import csr_matrix
    except ImportError:  # pragma: no cover
        return []
    data, ri, ci = [], [], []
    for i, row in enumerate(sf.rows):
        for j, v in row.items():
            data.append(float(v))
            ri.append(i)
            ci.append(j)
    A = csr_matrix((data, (ri, ci)), shape=(len(sf.rows), sf.ncol))
    c = np.zeros(sf.ncol)
    for j, v in cost.items():
        c[j] = float(v)
    res = linprog(c, A_eq=A, b_eq=[float(b) for b in sf.rhs], bounds=(0, None), method="highs")
    if res.status != 0:
        return []
    return [int(j) for j in np.flatnonzero(res.x > 1e-9)]


_PREPARED: OrderedDict = OrderedDict()
_PREPARED_SIZE = 8


def _prepare(H: HPolytope) -> _Prepared:
    """Standard form and phase-one outcome of H, memoized for repeated queries on one polytope."""
    hit = _PREPARED.get(H)
    if hit is not None:
        _PREPARED.move_to_end(H)
        return hit
    sf = _StandardForm(H)
    simplex = _Simplex(sf.rows, sf.rhs, sf.ncol)
    if simplex.phase_one() == "infeasible":
        out = _Prepared(sf, sf.farkas(simplex.phase_one_duals()))
    else:
        simplex.drop_artificials()
        kept, basis = simplex.kept, tuple(simplex.basis)
        columns: dict[int, list[tuple[int, Fraction]]] = {}
        for k, i in enumerate(kept):
            for j, v in sf.rows[i].items():
                columns.setdefault(j, []).append((k, v))
        bset = set(basis)
        start = _Simplex([{j: v for j, v in sf.rows[i].items() if j in bset} for i in kept], [sf.rhs[i] for i in kept], sf.ncol)
        if not start.install(basis):
            raise VerificationFailure("internal error: phase-one basis is not a feasible basis")
        out = _Prepared(sf, None, simplex.solution(), basis, columns, start)
    _PREPARED[H] = out
    if len(_PREPARED) > _PREPARED_SIZE:
        _PREPARED.popitem(last=False)
    return out


def lp_optimize(H: HPolytope, c: Sequence | None = None, maximize: bool = False) -> LPResult:
    """Minimize (or maximize) c . x over H exactly."""
    prep = _prepare(H)
    if prep.farkas is not None:
        return LPResult("infeasible", certificate=prep.farkas)
    sf, z = prep.sf, prep.z
    if c is not None and any(c):
        cost = sf.cost([-Fraction(v) for v in c] if maximize else c)
        start = set(prep.basis)
        if sf.ncol > _SEED_ABOVE:
            start.update(_float_support(sf, cost))
        z = _restricted_optimum(prep, cost, start)
        if z is None:
            return LPResult("unbounded")
    x = sf.point(z)
    if not H.contains(x):
        raise VerificationFailure("internal error: simplex returned an infeasible point")
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0)) if c is not None else None
    return LPResult("optimal", x, value, FeasibilityCertificate(True, x))


def lp_feasible(H: HPolytope) -> FeasibilityCertificate:
    """Exact feasibility decision: a point of H or a verified Farkas witness."""
    return lp_optimize(H).certificate


def lexmin(H: HPolytope, order: Sequence[int] | None = None) -> Vector | None:
    """Lexicographically least point of a bounded H (coordinates minimized in ``order``)."""
    order = range(H.dim) if order is None else order
    cur = H
    x = None
    for j in order:
        c = [0] * H.dim
        c[j] = 1
        res = lp_optimize(cur, c)
        if res.status != "optimal":
            return None
        x = res.x
        cur = cur.add(eq=[({j: 1}, x[j])])
    if x is None:
        res = lp_optimize(H)
        x = res.x if res.status == "optimal" else None
    return x
