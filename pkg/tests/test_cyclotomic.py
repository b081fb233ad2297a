from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braided_gauge.cyclotomic import (
    ScalarSyntaxError,
    cyclotomic_polynomial,
    field,
    format_scalar,
    parse_scalar,
)

K = field(3)
q = K.q

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
scalars = st.builds(lambda a, b: K.from_coeffs([a, b]), rationals, rationals)


def test_worked_examples():
    assert q * q ** 2 == 1
    assert (1 + q) * (1 + q) == q
    assert K.one.inverse() == 1
    assert q.inverse() == -1 - q
    assert (1 + q).inverse() == -q
    assert parse_scalar("−3/2+1/2q") == K.from_coeffs([Fraction(-3, 2), Fraction(1, 2)])
    assert parse_scalar("0") == K.zero
    assert parse_scalar("q^2").coeffs == (-1, -1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 12])
def test_roots_of_unity_have_exact_order(n):
    F = field(n)
    assert F.q ** n == 1
    for k in range(1, n):
        assert F.q ** k != 1


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert len(cyclotomic_polynomial(12)) - 1 == 4


@settings(max_examples=1000, deadline=None)
@given(scalars, scalars, scalars)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x + K.zero == x
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@settings(max_examples=300, deadline=None)
@given(scalars)
def test_format_parse_round_trip(x):
    text = format_scalar(x)
    assert parse_scalar(text) == x
    assert format_scalar(parse_scalar(text)) == text


def test_format_is_canonical():
    assert str(K.zero) == "0"
    assert str(-1 - q) == "-1-q"
    assert str(K.from_coeffs([Fraction(3, 2), -2])) == "3/2-2q"
    assert str(q) == "q"


def test_field_of_degree_four_round_trip():
    F = field(5)
    x = F.from_coeffs([1, Fraction(-2, 3), 0, 5])
    assert parse_scalar(str(x), 5) == x
    assert x * x.inverse() == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        K.zero.inverse()


@pytest.mark.parametrize("text,offset", [("", 0), ("1+", 2), ("2x", 1), ("1/0", 2), ("q^", 2)])
def test_syntax_errors_report_offsets(text, offset):
    with pytest.raises(ScalarSyntaxError) as err:
        parse_scalar(text)
    assert err.value.offset == offset


def test_mixed_moduli_are_rejected():
    with pytest.raises(ValueError):
        field(3).q + field(4).q
    with pytest.raises(TypeError):
        K.coerce(1.5)
