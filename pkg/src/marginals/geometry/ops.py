from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

from ..config import DEFAULT_CAPS, Caps
from ..errors import InvalidInput, Unbounded
from .dd import extreme_rays
from .linalg import echelon, nullspace, primitive, rank, solve_affine
from .lp import lp_feasible, lp_optimize
from .types import AffineMap, HPolytope, VPolytope, Vector

log = logging.getLogger(__name__)


def vertex_enumeration(H: HPolytope, caps: Caps = DEFAULT_CAPS) -> VPolytope:
    """Extreme points of a bounded H-polytope (empty list iff infeasible)."""
    dim = H.dim
    sol = solve_affine([dict(r) for r, _ in H.eq], [b for _, b in H.eq], dim)
    if sol is None:
        return VPolytope(dim)
    x0, N = sol
    k = len(N)

    def value(row):
        return sum((v * x0[j] for j, v in row), Fraction(0))

    if k == 0:
        return VPolytope(dim, (tuple(x0),)) if H.contains(x0) else VPolytope(dim)

    # homogenized cone in (t, s): s >= 0, (b - a.x0) s - (a N) t >= 0
    G = [(0,) * k + (1,)]
    seen = {G[0]}
    for r, b in H.ineq:
        rd = dict(r)
        aN = [sum(rd[j] * Nj[j] for j in rd if Nj[j]) for Nj in N]
        slack = b - value(r)
        if not any(aN):
            if slack < 0:
                return VPolytope(dim)
            continue
        g = primitive([-x for x in aN] + [slack])
        if g not in seen:
            seen.add(g)
            G.append(g)
    if rank(G) < k + 1:
        if lp_feasible(H).feasible:
            raise Unbounded("polyhedron contains a line; vertex enumeration needs a bounded input")
        return VPolytope(dim)

    rays = extreme_rays(G, k + 1, caps)
    verts, unbounded = [], False
    for r in rays:
        s = r[-1]
        if s == 0:
            unbounded = True
            continue
        t = [Fraction(x, s) for x in r[:-1]]
        x = [x0[j] + sum(t[i] * N[i][j] for i in range(k) if N[i][j]) for j in range(dim)]
        verts.append(tuple(x))
    if verts and unbounded:
        raise Unbounded("polyhedron has a recession ray")
    return VPolytope(dim, tuple(verts))


def _hull_lp(points: Sequence[Vector], x: Sequence) -> HPolytope:
    """lambda >= 0, sum lambda = 1, sum lambda_i p_i = x."""
    n = len(points)
    dim = len(x)
    eq = [({i: 1 for i in range(n)}, 1)]
    for j in range(dim):
        eq.append(({i: p[j] for i, p in enumerate(points) if p[j]}, x[j]))
    ineq = [({i: -1}, 0) for i in range(n)]
    return HPolytope.build(n, eq, ineq)


def in_hull(points: Sequence[Vector], x: Sequence) -> bool:
    if not points:
        return False
    return lp_feasible(_hull_lp(points, x)).feasible


def extreme_subset(points: Sequence[Sequence]) -> VPolytope:
    """Minimal subset of ``points`` with the same convex hull (one exact LP per point)."""
    pts = sorted({tuple(Fraction(v) for v in p) for p in points})
    if not pts:
        raise InvalidInput("extreme_subset needs a nonempty list")
    dim = len(pts[0])
    # a point found redundant can be dropped for good: the hull of the rest is unchanged
    alive = list(pts)
    for p in pts:
        others = [x for x in alive if x != p]
        if others and in_hull(others, p):
            alive = others
    return VPolytope(dim, tuple(alive))


def contains(P: VPolytope, x: Sequence) -> bool:
    if len(x) != P.dim:
        raise InvalidInput("point and polytope dimensions differ")
    x = tuple(Fraction(v) for v in x)
    if x in set(P.vertices):
        return True
    return in_hull(P.vertices, x)


def affine_image(P: VPolytope, T: AffineMap) -> VPolytope:
    if T.ncols != P.dim:
        raise InvalidInput("map and polytope dimensions differ")
    if P.is_empty:
        return VPolytope(T.nrows)
    return extreme_subset([T(v) for v in P.vertices])


def polytope_equal(P: VPolytope, Q: VPolytope) -> bool:
    if P.dim != Q.dim:
        raise InvalidInput("polytopes live in different dimensions")
    return P.vertices == Q.vertices


def polytope_subset(P: VPolytope, Q: VPolytope) -> bool:
    """conv P within conv Q, by one membership LP per vertex of P."""
    return all(contains(Q, v) for v in P.vertices)


def is_extreme_point(H: HPolytope, x: Sequence) -> bool:
    """x is a vertex of H iff it is feasible and its active constraints have rank dim."""
    x = tuple(Fraction(v) for v in x)
    if not H.contains(x):
        return False
    active = [dict(r) for r, _ in H.eq]
    for r, b in H.ineq:
        if sum((v * x[j] for j, v in r), Fraction(0)) == b:
            active.append(dict(r))
    return rank(active) == H.dim


def affine_hull(points: Sequence[Vector]):
    """(base point, pivot columns of the direction space, normals of the hull's equations)."""
    base = points[0]
    dim = len(base)
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    piv = echelon(diffs)
    normals = nullspace(diffs, dim) if diffs else [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]
    return base, sorted(piv), normals


def facets(points: Sequence[Vector], caps: Caps = DEFAULT_CAPS) -> HPolytope:
    """An H-description of conv(points): hull equations plus facet inequalities.

    Internal helper (facet enumeration is not part of the public surface):
    works in the coordinates that parametrize the affine hull and runs
    double description on the polar cone.
    """
    pts = sorted({tuple(Fraction(v) for v in p) for p in points})
    dim = len(pts[0])
    base, piv, normals = affine_hull(pts)
    eq = []
    for nrm in normals:
        eq.append(({j: v for j, v in enumerate(nrm) if v}, sum(Fraction(v) * b for v, b in zip(nrm, base))))
    r = len(piv)
    ineq = []
    if r > 0:
        G = [primitive([p[j] for j in piv] + [1]) for p in pts]
        for ray in extreme_rays(G, r + 1, caps):
            a, beta = ray[:-1], ray[-1]
            if not any(a):
                continue
            # a . x[piv] + beta >= 0
            ineq.append(({piv[i]: -a[i] for i in range(r) if a[i]}, beta))
    return HPolytope.build(dim, eq, ineq)


def project_polytope(H: HPolytope, T: AffineMap, caps: Caps = DEFAULT_CAPS) -> VPolytope:
    """T(H) computed with an exact LP oracle, without enumerating the vertices of H.

    First the affine hull of the image is found by optimizing along directions
    orthogonal to the points collected so far; then facets of the current
    inner approximation are confirmed or refuted one LP at a time.
    """
    m = T.nrows
    start = lp_feasible(H)
    if not start.feasible:
        return VPolytope(m)

    def support(c) -> Vector:
        res = lp_optimize(H, T.transpose_apply(c), maximize=True)
        if res.status != "optimal":
            raise Unbounded("image is unbounded")
        return T(res.x)

    def val(c, y):
        return sum((Fraction(a) * b for a, b in zip(c, y)), Fraction(0))

    points = [T(start.point)]
    equations: list[tuple[int, ...]] = []
    while True:
        base = points[0]
        diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
        free = nullspace(diffs + [list(e) for e in equations], m)
        if not free:
            break
        c = free[0]
        y = support(c)
        if val(c, y) > val(c, base):
            points.append(y)
            continue
        y = support([-x for x in c])
        if val(c, y) < val(c, base):
            points.append(y)
            continue
        equations.append(c)

    # Each round tests every unconfirmed facet of the inner hull. A facet already
    # cut off by a point found this round is left for the next hull.
    confirmed: set = set()
    while True:
        F = facets(points, caps)
        found: list[Vector] = []
        for r, b in F.ineq:
            key = (r, b)
            if key in confirmed:
                continue
            c = [Fraction(0)] * m
            for j, v in r:
                c[j] = v
            if any(val(c, y) > b for y in found):
                continue
            y = support(c)
            if val(c, y) > b:
                found.append(y)
            else:
                confirmed.add(key)
        if not found:
            break
        points.extend(found)
    log.debug("oracle projection used %d points", len(points))
    return extreme_subset(points)
