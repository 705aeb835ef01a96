from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from copula_forge.errors import DomainError
from copula_forge.rational import format_float, format_rational, parse_rational


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1/2", Fraction(1, 2)),
        (" 3 / 9 ", Fraction(1, 3)),
        ("-2/4", Fraction(-1, 2)),
        ("0.25", Fraction(1, 4)),
        ("7", Fraction(7)),
        ("0.123456789012", Fraction(123456789012, 10**12)),
        (Fraction(2, 3), Fraction(2, 3)),
        (5, Fraction(5)),
        (0.5, Fraction(1, 2)),
    ],
)
def test_parse_accepts(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["0.1234567890123", "1/0", "abc", "1e-3", "", True, None, [1]])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        parse_rational(text)


def test_float_with_long_repr_rejected():
    with pytest.raises(DomainError):
        parse_rational(0.1 + 0.2)


@given(st.fractions())
def test_rational_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_format_rational_has_denominator():
    assert format_rational(3) == "3/1"
    assert format_rational(Fraction(0)) == "0/1"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_roundtrip(x):
    assert float(format_float(x)) == x
