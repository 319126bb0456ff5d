"""Exact rational arithmetic helpers.

All model parameters and solver arithmetic use exact rationals so that
frontier points, witnesses and serialized documents are reproducible to
the byte. gmpy2 is used when available; fractions.Fraction otherwise.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterable

try:
    from gmpy2 import mpq as _mpq

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    _mpq = None
    _HAVE_GMPY2 = False

# A Rat is whatever make_rat returns: gmpy2.mpq or Fraction. Both support
# exact +,-,*,/ and comparisons against ints and each other.
Rat = Any

ZERO: Rat = _mpq(0) if _HAVE_GMPY2 else Fraction(0)
ONE: Rat = _mpq(1) if _HAVE_GMPY2 else Fraction(1)


def make_rat(numerator: int, denominator: int = 1) -> Rat:
    """Exact rational from an integer pair."""
    if _HAVE_GMPY2:
        return _mpq(numerator, denominator)
    return Fraction(numerator, denominator)


def as_rat(value: Any) -> Rat:
    """Coerce an int, Fraction, mpq, decimal string or 'p/q' string."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational quantity")
    if isinstance(value, int):
        return make_rat(value)
    if _HAVE_GMPY2 and isinstance(value, type(ZERO)):
        return value
    if isinstance(value, Fraction):
        return make_rat(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        # Floats are rejected: callers must parse decimal *text* exactly.
        raise TypeError(f"refusing inexact float {value!r}; pass a string or int")
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def parse_rational(text: str) -> Rat:
    """Parse '3', '-7/2' or '0.25' into an exact rational.

    Raises ValueError on anything else (including inf/nan and floats in
    exponent notation with non-numeric payloads handled by Fraction).
    """
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    if "/" in text:
        num, _, den = text.partition("/")
        n = int(num.strip())
        d = int(den.strip())
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return make_rat(n, d)
    # Fraction parses integer and decimal strings exactly ('1.5' -> 3/2).
    frac = Fraction(text)
    return make_rat(frac.numerator, frac.denominator)


def format_rational(value: Rat) -> str:
    """Canonical text form: integers bare, otherwise 'p/q' in lowest terms."""
    value = as_rat(value)
    if value.denominator == 1:
        return str(int(value.numerator))
    return f"{int(value.numerator)}/{int(value.denominator)}"


def rat_to_json(value: Rat) -> int | str:
    """JSON form used by the document format: int when integral, else 'p/q'."""
    value = as_rat(value)
    if value.denominator == 1:
        return int(value.numerator)
    return format_rational(value)


def is_integral(value: Rat) -> bool:
    return as_rat(value).denominator == 1


def rat_floor(value: Rat) -> int:
    v = as_rat(value)
    return int(v.numerator) // int(v.denominator)


def rat_ceil(value: Rat) -> int:
    v = as_rat(value)
    return -((-int(v.numerator)) // int(v.denominator))


def common_denominator(values: Iterable[Rat]) -> int:
    """Positive lcm of denominators; 1 for an empty iterable."""
    lcm = 1
    for v in values:
        lcm = math.lcm(lcm, int(as_rat(v).denominator))
    return lcm


def to_float(value: Rat) -> float:
    v = as_rat(value)
    return int(v.numerator) / int(v.denominator)
