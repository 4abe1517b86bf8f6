from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padic_dynamics import poly
from padic_dynamics.errors import ParseError, ZeroDenominator
from padic_dynamics.parser import parse_coefficient_json, parse_rational_function
from padic_dynamics.ratmap import RationalMap


def F(*xs):
    return [Fraction(x) for x in xs]


@pytest.mark.parametrize(
    "text,num,den",
    [
        ("z", F(0, 1), F(1)),
        ("2z^2 - 3", F(-3, 0, 2), F(1)),
        ("(z+1)^2", F(1, 2, 1), F(1)),
        ("1/2 z", F(0, Fraction(1, 2)), F(1)),
        ("2-3", F(-1), F(1)),
        ("2*-z", F(0, -2), F(1)),
        ("-(z)(z)", F(0, 0, -1), F(1)),
        ("z^2/(z-1)", F(0, 0, 1), F(-1, 1)),
        ("3/z", F(3), F(0, 1)),
        ("2/3^2", F(2), F(9)),
    ],
)
def test_parse_examples(text, num, den):
    assert parse_rational_function(text) == (num, den)


@pytest.mark.parametrize("text", ["", "z+", "(z+1", "z/(1/z)", "z/z/z", "z^-1", "2 $ z", "z)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_rational_function(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_rational_function("z + * 2")
    assert info.value.position == 4
    assert info.value.expected


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        parse_rational_function("z/(z-z)")
    with pytest.raises(ZeroDenominator):
        parse_coefficient_json('{"num": ["1"], "den": ["0"]}')


def test_coefficient_json():
    num, den = parse_coefficient_json('{"num": ["3", "2"], "den": ["2", "-3", "1"]}')
    assert num == F(3, 2) and den == F(2, -3, 1)
    num, _ = parse_coefficient_json({"num": ["1/2", 0], "den": [1]})
    assert num == F(Fraction(1, 2))
    with pytest.raises(ParseError):
        parse_coefficient_json("{not json")
    with pytest.raises(ParseError):
        parse_coefficient_json('{"num": ["x"], "den": ["1"]}')


small_poly = st.lists(st.integers(-9, 9), min_size=1, max_size=4)


def render(coeffs):
    return "+".join(f"({c})*z^{i}" for i, c in enumerate(coeffs))


@given(small_poly, small_poly.filter(lambda c: any(c)))
def test_parse_round_trip_through_rendering(num, den):
    n, d = parse_rational_function(f"({render(num)})/({render(den)})")
    assert n == poly.trim(F(*num)) and d == poly.trim(F(*den))


def test_json_and_text_give_same_map():
    a = RationalMap.parse("(2z+3)/((z-1)(z-2))")
    b = RationalMap.parse('{"num": ["3", "2"], "den": ["2", "-3", "1"]}')
    assert a == b
