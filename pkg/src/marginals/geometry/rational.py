from __future__ import annotations

from fractions import Fraction
from typing import Iterable


def fmt_q(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_q(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise ValueError(f"refusing float {s!r}; serialize rationals as 'p/q' strings")
    return Fraction(str(s).strip())


def fmt_vec(v: Iterable) -> list[str]:
    return [fmt_q(x) for x in v]


def parse_vec(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(parse_q(x) for x in v)
