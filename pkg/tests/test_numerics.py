from fractions import Fraction

import pytest

from dirichlet_spectrum.errors import InvalidArgument
from dirichlet_spectrum.numerics import (
    Enclosure,
    decimal_str,
    make_rational,
    nearest_integer,
    parse_int,
    parse_rational,
    rational_str,
)


def test_make_rational_reduces():
    assert make_rational(6, 4) == Fraction(3, 2)
    assert make_rational(3, -6) == Fraction(-1, 2)


def test_make_rational_rejects_zero_denominator():
    with pytest.raises(InvalidArgument):
        make_rational(1, 0)


@pytest.mark.parametrize("text,value", [("1/2", Fraction(1, 2)), ("9/10", Fraction(9, 10)), ("3", Fraction(3)),
                                        (" -2/4 ", Fraction(-1, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e-3", "1/0", "half", ""])
def test_parse_rational_rejects(text):
    with pytest.raises(InvalidArgument):
        parse_rational(text)


def test_parse_int():
    assert parse_int("131072") == 131072
    with pytest.raises(InvalidArgument):
        parse_int("2.0")


def test_rational_str_always_has_denominator():
    assert rational_str(Fraction(3)) == "3/1"
    assert rational_str(Fraction(-33, 256)) == "-33/256"


def test_nearest_integer():
    assert nearest_integer(Fraction(33, 256) * 256) == 33
    assert nearest_integer(Fraction(7, 3)) == 2
    assert nearest_integer(Fraction(-5, 3)) == -2


def test_decimal_rounding_is_outward():
    x = Fraction(1, 3)
    lo, hi = Fraction(decimal_str(x, "down")), Fraction(decimal_str(x, "up"))
    assert lo < x < hi
    assert decimal_str(Fraction(1, 2), "down") == decimal_str(Fraction(1, 2), "up")


def test_decimal_str_tiny_values_use_exponent():
    s = decimal_str(Fraction(1, 2**60), "down")
    assert "E" in s
    assert Fraction(s) <= Fraction(1, 2**60)


def test_enclosure_rejects_reversed_endpoints():
    with pytest.raises(InvalidArgument):
        Enclosure(Fraction(1), Fraction(0))


def test_enclosure_arithmetic():
    a = Enclosure(Fraction(1), Fraction(2))
    b = Enclosure(Fraction(-1), Fraction(3))
    assert a + b == Enclosure(Fraction(0), Fraction(5))
    assert a - b == Enclosure(Fraction(-2), Fraction(3))
    assert a * b == Enclosure(Fraction(-2), Fraction(6))
    assert abs(b) == Enclosure(Fraction(0), Fraction(3))
    assert a.scale(-2) == Enclosure(Fraction(-4), Fraction(-2))
    assert (a / Enclosure(Fraction(2), Fraction(4))) == Enclosure(Fraction(1, 4), Fraction(1))
    assert Fraction(3, 2) in a and 3 not in a
    assert a.width == 1 and a.midpoint == Fraction(3, 2)


def test_reciprocal_of_interval_containing_zero():
    with pytest.raises(InvalidArgument):
        Enclosure(Fraction(-1), Fraction(1)).reciprocal()


def test_nearest_integer_half_ties_go_to_even():
    assert nearest_integer(Fraction(1, 2)) == 0
    assert nearest_integer(Fraction(3, 2)) == 2
    assert nearest_integer(Fraction(-1, 2)) == 0
