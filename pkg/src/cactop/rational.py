"""Exact rational parsing and formatting ("p/q" strings)."""
from __future__ import annotations

from fractions import Fraction


class RationalError(ValueError):
    pass


def parse_q(x) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction.  Floats are refused
    so that no binary rounding leaks into exact data."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise RationalError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise RationalError(f"not a rational: {x!r}")
    s = x.strip()
    num, slash, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if slash else 1
    except ValueError:
        raise RationalError(f"not a rational: {x!r}") from None
    if q == 0:
        raise RationalError(f"zero denominator in {x!r}")
    return Fraction(p, q)


def fmt_q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")
