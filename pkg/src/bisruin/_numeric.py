"""Conversions between user-facing numbers and mpmath values."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import mpf

DEFAULT_PREC = 256


def to_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats are read by their shortest repr so
    that ``0.3`` means 3/10, not the nearest binary double."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a number")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a number")


def to_mpf(x) -> mpf:
    """Convert at the current working precision."""
    if isinstance(x, mpf):
        return +x
    q = to_fraction(x)
    return mpf(q.numerator) / q.denominator


def workprec(bits: int):
    return mpmath.workprec(int(bits))
