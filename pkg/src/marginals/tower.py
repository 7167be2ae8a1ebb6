"""Restriction maps between windows and the projected outer approximations of I_n."""
from __future__ import annotations

import logging
from fractions import Fraction

from .config import DEFAULT_CAPS, Caps
from .errors import InvalidInput
from .geometry import AffineMap, VPolytope, affine_image, polytope_equal, polytope_subset, project_polytope, vertex_enumeration
from .invariance import build_Iloc
from .patterns import Alphabet, PatternIndex, cube_shape

log = logging.getLogger(__name__)

ROUTES = ("auto", "vertex", "oracle")


def marginal_map(k: int, n: int, d: int, alphabet, caps: Caps = DEFAULT_CAPS) -> AffineMap:
    """0/1 matrix R^{Omega_k} -> R^{Omega_n}; entry (a, b) is 1 iff b restricted to Lambda_n is a."""
    if not k >= n >= 0:
        raise InvalidInput(f"marginal map needs k >= n >= 0, got k={k}, n={n}")
    big = PatternIndex(d, k, alphabet, caps)
    small = PatternIndex(d, n, alphabet, caps)
    if k == n:
        return AffineMap.identity(big.size)
    codes = big.restriction_codes(cube_shape(d, n))
    rows: list[list[int]] = [[] for _ in range(small.size)]
    for b, a in enumerate(codes.tolist()):
        rows[a].append(b)
    one = Fraction(1)
    return AffineMap(tuple(tuple((b, one) for b in r) for r in rows), big.size)


def _route(k: int, d: int, alphabet, route: str, caps: Caps) -> str:
    if route not in ROUTES:
        raise InvalidInput(f"unknown projection route {route!r}")
    if route != "auto":
        return route
    return "vertex" if len(Alphabet.of(alphabet)) ** ((2 * k + 1) ** d) <= caps.vertex_route else "oracle"


def project_Iloc(k: int, n: int, d: int = 1, alphabet=("0", "1"), caps: Caps = DEFAULT_CAPS,
                 route: str = "auto") -> VPolytope:
    """pi_{k,n}(I_k^loc) as a canonical vertex list.

    The vertex route enumerates I_k^loc and keeps the extreme images; the
    oracle route finds the image directly with linear programs over I_k^loc.
    Both return the same polytope.
    """
    if d >= 2:
        caps.check("d2_tower", k - n)
    T = marginal_map(k, n, d, alphabet, caps)
    H = build_Iloc(d, k, alphabet, caps)
    how = _route(k, d, alphabet, route, caps)
    log.info("projecting I_%d^loc to window %d (d=%d) by %s route", k, n, d, how)
    if how == "vertex":
        return affine_image(vertex_enumeration(H, caps), T)
    return project_polytope(H, T, caps)


def _vertex_json(P: VPolytope, index: PatternIndex) -> list[dict]:
    return [{index.word(i): f"{x.numerator}/{x.denominator}" for i, x in enumerate(v) if x} for v in P.vertices]


def refinement_report(n: int, k_max: int, d: int = 1, alphabet=("0", "1"), caps: Caps = DEFAULT_CAPS,
                      route: str = "auto") -> list[dict]:
    """One entry per k = n+1..k_max: the projected polytope and whether it shrank."""
    if k_max <= n:
        raise InvalidInput("k_max must exceed n")
    index = PatternIndex(d, n, alphabet, caps)
    prev = project_Iloc(n, n, d, alphabet, caps, route)
    out = []
    for k in range(n + 1, k_max + 1):
        cur = project_Iloc(k, n, d, alphabet, caps, route)
        out.append({
            "k": k,
            "vertices": _vertex_json(cur, index),
            "vertex_count": len(cur.vertices),
            "equal_to_previous": polytope_equal(cur, prev),
            "nested": polytope_subset(cur, prev),
        })
        prev = cur
    return out
