"""Exact rational parsing/formatting used by the wire formats.

Rationals are stdlib ``fractions.Fraction`` throughout: arbitrary precision,
always reduced, denominator positive.  No floating point enters the library.
"""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


class RationalFormatError(ValueError):
    """String is not an integer or 'p/q' rational."""


def parse_rational(value) -> Fraction:
    """Parse 'p/q' or integer strings into a Fraction; ints pass through.

    Decimal notation is deliberately rejected: the file formats carry exact
    rationals only.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if _RATIONAL_RE.match(text):
            return Fraction(text)
        raise RationalFormatError(f"malformed rational: {value!r}")
    raise RationalFormatError(f"expected rational string, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    """Canonical string form: 'p' when integral, else 'p/q' reduced."""
    return str(Fraction(q))
