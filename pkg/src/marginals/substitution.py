"""Tile frequencies of primitive substitutions, exactly in Q(sqrt D) or as certified intervals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Mapping, Sequence

import mpmath
import sympy

from .errors import DegreeTooHigh, InvalidInput, NotPrimitive, VerificationFailure


def _squarefree(D: int) -> tuple[int, int]:
    """D = k^2 * r with r squarefree; returns (k, r)."""
    k, r = 1, D
    p = 2
    while p * p <= r:
        while r % (p * p) == 0:
            r //= p * p
            k *= p
        p += 1
    return k, r


@dataclass(frozen=True)
class QuadraticNumber:
    """a + b sqrt(D) with a, b rational and D a squarefree integer > 1 (D = 1 when b = 0)."""

    a: Fraction
    b: Fraction = Fraction(0)
    D: int = 1

    def __post_init__(self):
        a, b, D = Fraction(self.a), Fraction(self.b), int(self.D)
        if D < 1:
            raise InvalidInput("discriminant must be positive")
        k, r = _squarefree(D)
        b *= k
        if r == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            r = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "D", r)

    @classmethod
    def rational(cls, x) -> QuadraticNumber:
        return cls(Fraction(x))

    def _coerce(self, other) -> QuadraticNumber:
        if not isinstance(other, QuadraticNumber):
            other = QuadraticNumber(Fraction(other))
        if self.D != other.D and self.D != 1 and other.D != 1:
            raise InvalidInput(f"mixing Q(sqrt {self.D}) and Q(sqrt {other.D})")
        return other

    def _field(self, other) -> int:
        return max(self.D, other.D)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        D = self._field(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def inverse(self) -> QuadraticNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return QuadraticNumber(c.a / n, c.b / n, self.D)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if not isinstance(other, QuadraticNumber):
            try:
                other = QuadraticNumber(Fraction(other))
            except (TypeError, ValueError):
                return NotImplemented
        return (self.a, self.b, self.D) == (other.a, other.b, other.D)

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def sign(self) -> int:
        """Exact sign of a + b sqrt(D)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 D
        big = self.a * self.a - self.b * self.b * self.D
        return sa if big > 0 else (sb if big < 0 else 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __float__(self):
        return float(self.a) + float(self.b) * self.D ** 0.5

    def is_rational(self) -> bool:
        return self.b == 0

    def __str__(self) -> str:
        if self.b == 0:
            return f"{self.a.numerator}/{self.a.denominator}"
        den = self.a.denominator * self.b.denominator // gcd(self.a.denominator, self.b.denominator)
        A, B = int(self.a * den), int(self.b * den)
        op = "+" if B >= 0 else "-"
        return f"({A}{op}{abs(B)}*sqrt({self.D}))/{den}"

    def decimal(self, digits: int = 15) -> str:
        return _decimal(_as_fraction(self), digits)

    def to_json(self) -> dict:
        return {"exact": str(self), "decimal": self.decimal()}


@dataclass(frozen=True)
class Interval:
    """Closed rational interval."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInput("empty interval")

    @classmethod
    def point(cls, x) -> Interval:
        return cls(Fraction(x), Fraction(x))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, o):
        o = o if isinstance(o, Interval) else Interval.point(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __mul__(self, o):
        o = o if isinstance(o, Interval) else Interval.point(o)
        ps = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = o if isinstance(o, Interval) else Interval.point(o)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, o):
        return Interval.point(o) / self

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> dict:
        return {"lo": f"{self.lo.numerator}/{self.lo.denominator}", "hi": f"{self.hi.numerator}/{self.hi.denominator}",
                "decimal": _decimal((self.lo + self.hi) / 2)}


def _matmul(A, B):
    n, m, k = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(m)), 0) for j in range(k)] for i in range(n)]


def _is_primitive(M: Sequence[Sequence[int]]) -> bool:
    """Some power of M is positive; by Wielandt's bound it suffices to test the power (n-1)^2 + 1."""
    n = len(M)
    pattern = [[1 if x > 0 else 0 for x in row] for row in M]
    e = (n - 1) ** 2 + 1
    result = None
    base = pattern
    while e:
        if e & 1:
            result = base if result is None else [[min(1, x) for x in r] for r in _matmul(result, base)]
        e >>= 1
        if e:
            base = [[min(1, x) for x in r] for r in _matmul(base, base)]
    return all(x > 0 for row in result for x in row)


def faddeev_leverrier(M: Sequence[Sequence]) -> tuple[list[Fraction], list[list[list[Fraction]]]]:
    """Characteristic polynomial and adjugate polynomial of M.

    Returns (c, B) with det(tI - M) = sum_k c[k] t^k and
    adj(tI - M) = sum_{k=1}^{n} B[k-1] t^{n-k}.
    """
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    Bs = []
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = _matmul(A, Mk)
        Mk = [[AM[i][j] + (c[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        Bs.append(Mk)
        AMk = _matmul(A, Mk)
        c[n - k] = -Fraction(sum(AMk[i][i] for i in range(n)), k)
    return c, Bs


@dataclass(frozen=True)
class SubstitutionSystem:
    types: tuple[str, ...]
    M: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.M)
        n = len(M)
        if n == 0 or any(len(r) != n for r in M):
            raise InvalidInput("count matrix must be square and nonempty")
        if len(self.types) != n or len(set(self.types)) != n:
            raise InvalidInput("need one distinct type name per row")
        if any(x < 0 for r in M for x in r):
            raise InvalidInput("count matrix must be nonnegative")
        if not _is_primitive(M):
            raise NotPrimitive("count matrix is not primitive")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "types", tuple(self.types))

    def to_json(self) -> dict:
        return {"types": list(self.types), "M": [list(r) for r in self.M]}

    @classmethod
    def from_json(cls, obj: Mapping) -> SubstitutionSystem:
        return cls(tuple(str(t) for t in obj["types"]), tuple(tuple(r) for r in obj["M"]))

    def type_index(self, t) -> int:
        if isinstance(t, int):
            return t
        try:
            return self.types.index(t)
        except ValueError:
            raise InvalidInput(f"unknown tile type {t!r}") from None


PRESETS = {
    # fat / thin Robinson triangles: a fat one inflates to 2 fat + 1 thin, a thin one to 1 fat + 1 thin
    "penrose-robinson": SubstitutionSystem(("fat", "thin"), ((2, 1), (1, 1))),
    "fibonacci": SubstitutionSystem(("a", "b"), ((1, 1), (1, 0))),
}


def preset(name: str) -> SubstitutionSystem:
    try:
        return PRESETS[name]
    except KeyError:
        raise InvalidInput(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class Frequencies:
    mode: str  # "exact" | "interval"
    perron_root: QuadraticNumber | Interval
    values: tuple  # QuadraticNumber or Interval per type


def _perron_factor(M) -> tuple[sympy.Poly, float]:
    t = sympy.Symbol("t")
    c, _ = faddeev_leverrier(M)
    poly = sympy.Poly([sympy.Rational(x.numerator, x.denominator) for x in reversed(c)], t)
    lam = max(abs(complex(z)) for z in sympy.Poly(poly, t).nroots())
    best = None
    for f, _ in poly.factor_list()[1]:
        roots = [complex(z) for z in f.nroots()]
        gap = min(abs(z - lam) for z in roots)
        if best is None or gap < best[0]:
            best = (gap, f)
    return best[1], lam


def _adjugate_at(Bs, n, t):
    """adj(tI - M) evaluated at t (any ring/interval type supporting + and *)."""
    out = [[0] * n for _ in range(n)]
    power = 1
    for k in range(n, 0, -1):  # B[k-1] multiplies t^{n-k}
        B = Bs[k - 1]
        for i in range(n):
            for j in range(n):
                if B[i][j]:
                    out[i][j] = out[i][j] + B[i][j] * power
        power = power * t
    return out


def _normalized_column(adj, n):
    for j in range(n):
        col = [adj[i][j] for i in range(n)]
        total = col[0]
        for x in col[1:]:
            total = total + x
        try:
            return [x / total for x in col]
        except ZeroDivisionError:
            continue
    raise VerificationFailure("adjugate vanished at the Perron root")


def perron_frequencies(S: SubstitutionSystem, mode: str = "auto", width: Fraction = Fraction(1, 10**12)) -> Frequencies:
    """Normalized right Perron eigenvector of the count matrix."""
    if mode not in ("auto", "exact", "interval"):
        raise InvalidInput(f"unknown mode {mode!r}")
    n = len(S.M)
    _, Bs = faddeev_leverrier(S.M)
    f, lam_float = _perron_factor(S.M)
    deg = f.degree()
    if deg <= 2 and mode != "interval":
        coeffs = [Fraction(int(sympy.numer(x)), int(sympy.denom(x))) for x in f.all_coeffs()]
        if deg == 1:
            lam = QuadraticNumber(-coeffs[1] / coeffs[0])
        else:
            a, b, cc = coeffs
            disc = b * b - 4 * a * cc
            # disc = p/q; sqrt(p/q) = sqrt(p q) / q
            root = QuadraticNumber(0, Fraction(1, disc.denominator), disc.numerator * disc.denominator)
            lam = (root - b) / (2 * a)  # the larger root
        vec = _normalized_column(_adjugate_at(Bs, n, lam), n)
        vec = [v if isinstance(v, QuadraticNumber) else QuadraticNumber(v) for v in vec]
        # exact checks: M v = lam v, positivity, sum 1
        for i in range(n):
            lhs = QuadraticNumber(0)
            for j in range(n):
                lhs = lhs + vec[j] * S.M[i][j]
            if lhs != lam * vec[i]:
                raise VerificationFailure("Perron eigenvector check failed")
        if any(v.sign() <= 0 for v in vec) or sum(vec, QuadraticNumber(0)) != 1:
            raise VerificationFailure("frequencies are not a positive probability vector")
        return Frequencies("exact", lam, tuple(vec))
    if mode == "exact":
        raise DegreeTooHigh(f"Perron root has degree {deg} over Q; exact mode handles degree <= 2")
    return _interval_frequencies(f, lam_float, Bs, n, width)


def _interval_frequencies(f: sympy.Poly, lam_float: float, Bs, n: int, width: Fraction) -> Frequencies:
    isolating = [iv for iv, _ in f.intervals()]
    lo, hi = next((a, b) for a, b in isolating if a - 1e-6 <= lam_float <= b + 1e-6)
    eps = sympy.Rational(1, 10**6)
    while True:
        lo, hi = f.refine_root(lo, hi, eps=eps)
        lam = Interval(Fraction(int(sympy.numer(lo)), int(sympy.denom(lo))), Fraction(int(sympy.numer(hi)), int(sympy.denom(hi))))
        try:
            vec = _normalized_column(_adjugate_at(Bs, n, lam), n)
        except VerificationFailure:
            vec = None
        if vec is not None and all(v.width <= width for v in vec) and all(v.lo > 0 for v in vec):
            return Frequencies("interval", lam, tuple(vec))
        eps = eps / 1000


def frequency_ratio(S: SubstitutionSystem, i, j, freqs: Frequencies | None = None):
    freqs = freqs or perron_frequencies(S)
    a, b = freqs.values[S.type_index(i)], freqs.values[S.type_index(j)]
    return a / b


def iterate_counts(S: SubstitutionSystem, seed: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """[M seed, M^2 seed, ..., M^k seed] in exact integers."""
    seed = tuple(int(x) for x in seed)
    if len(seed) != len(S.M) or any(x < 0 for x in seed) or not any(seed):
        raise InvalidInput("seed must be a nonzero nonnegative vector of the right length")
    if k < 1:
        raise InvalidInput("k must be at least 1")
    out = []
    v = seed
    for _ in range(k):
        v = tuple(sum(S.M[i][j] * v[j] for j in range(len(v))) for i in range(len(v)))
        out.append(v)
    return out


def certify_irrational(x: QuadraticNumber) -> bool:
    """x is irrational iff its sqrt(D) coefficient survives reduction (D squarefree > 1)."""
    if x.b != 0 and isqrt(x.D) ** 2 == x.D:
        raise VerificationFailure("quadratic number with a square discriminant")
    return x.b != 0


def frequency_report(S: SubstitutionSystem, mode: str = "auto", k: int = 25) -> dict:
    freqs = perron_frequencies(S, mode)
    out = {
        "system": S.to_json(),
        "mode": freqs.mode,
        "perron_root": freqs.perron_root.to_json(),
        "frequencies": {t: v.to_json() for t, v in zip(S.types, freqs.values)},
    }
    if len(S.types) >= 2:
        r = frequency_ratio(S, 0, 1, freqs)
        out["ratio"] = {"numerator": S.types[0], "denominator": S.types[1], **r.to_json()}
        if isinstance(r, QuadraticNumber):
            out["ratio"]["irrational"] = certify_irrational(r)
        last = iterate_counts(S, [1] + [0] * (len(S.types) - 1), k)[-1]
        if last[1]:
            q = Fraction(last[0], last[1])
            out["ratio"]["iterate"] = {"k": k, "counts": list(last), "error_decimal": _decimal(abs(q - _as_fraction(r)), 30)}
    return out


def _decimal(x: Fraction, digits: int = 15) -> str:
    """x rounded half-up to ``digits`` decimal places."""
    scaled = x * 10**digits
    k = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    sign = "-" if k < 0 else ""
    k = abs(k)
    whole, frac = divmod(k, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _as_fraction(x) -> Fraction:
    """A rational within 1e-30 of x, for error reporting only."""
    if isinstance(x, Interval):
        return (x.lo + x.hi) / 2
    with mpmath.workdps(50):
        v = mpmath.mpf(x.a.numerator) / x.a.denominator + mpmath.mpf(x.b.numerator) / x.b.denominator * mpmath.sqrt(x.D)
        return Fraction(int(v * 10**40), 10**40)
