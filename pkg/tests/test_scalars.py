from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedmat.scalars import I, ONE, ZERO, Scalar, half

rationals = st.fractions(
    min_value=-10, max_value=10, max_denominator=12
)
scalars = st.builds(Scalar, rationals, rationals)


def test_construction_and_equality():
    assert Scalar(1) == ONE
    assert Scalar(0, 1) == I
    assert Scalar(Fraction(1, 2)) == half()
    assert Scalar(2) != Scalar(2, 1)
    assert Scalar(Fraction(2, 4)) == Scalar(Fraction(1, 2))


def test_of_coercions():
    assert Scalar.of(3) == Scalar(3)
    assert Scalar.of(Fraction(-1, 3)) == Scalar(Fraction(-1, 3))
    assert Scalar.of(ONE) is ONE
    with pytest.raises(TypeError):
        Scalar.of(0.5)


def test_arithmetic_is_exact():
    third = Scalar(Fraction(1, 3))
    assert third + third + third == ONE
    assert (ONE / Scalar(7)) * Scalar(7) == ONE
    assert I * I == Scalar(-1)


def test_truthiness_and_as_fraction():
    assert not ZERO
    assert ONE
    assert Scalar(0, Fraction(1, 5))
    assert Scalar(Fraction(3, 4)).as_fraction() == Fraction(3, 4)
    with pytest.raises(ValueError):
        I.as_fraction()


def test_string_forms():
    assert str(Scalar(Fraction(1, 2))) == "1/2"
    assert str(Scalar(0, 2)) == "2i"
    assert str(Scalar(1, -1)) == "1-1i"
    assert str(ZERO) == "0"


@settings(max_examples=80, deadline=None)
@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(scalars)
def test_field_inverse(a):
    if a:
        assert a * (ONE / a) == ONE
    assert a - a == ZERO
