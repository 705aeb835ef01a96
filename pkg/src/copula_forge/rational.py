"""Parsing and formatting of exact rationals used at the I/O boundary."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import DomainError

RationalLike = Union[int, Fraction, str]

MAX_DECIMAL_DIGITS = 12

_DECIMAL = re.compile(r"^\s*[+-]?(\d+)(?:\.(\d*))?\s*$")
_RATIO = re.compile(r"^\s*[+-]?\d+\s*/\s*[+-]?\d+\s*$")


def parse_rational(text) -> Fraction:
    """Convert ``text`` to an exact :class:`Fraction`.

    Accepts ``"p/q"``, integers and decimal strings with at most 12
    fractional digits. Longer decimals and floats that are not short
    decimals are rejected so that no binary rounding sneaks into exact paths.
    """
    if isinstance(text, bool):
        raise DomainError(f"not a rational: {text!r}")
    if isinstance(text, Rational):
        return Fraction(text)
    if isinstance(text, float):
        text = repr(text)
    if not isinstance(text, str):
        raise DomainError(f"not a rational: {text!r}")
    if _RATIO.match(text):
        num, den = text.split("/")
        if int(den) == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    m = _DECIMAL.match(text)
    if m is None:
        raise DomainError(f"not a rational: {text!r}")
    frac = m.group(2) or ""
    if len(frac) > MAX_DECIMAL_DIGITS:
        raise DomainError(
            f"decimal {text!r} has more than {MAX_DECIMAL_DIGITS} fractional digits; use p/q"
        )
    return Fraction(text.strip())


def format_rational(x) -> str:
    """Format as ``"p/q"`` (always with an explicit denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_float(x: float) -> str:
    """17-significant-digit decimal, enough to round-trip a double."""
    return f"{float(x):.17g}"
