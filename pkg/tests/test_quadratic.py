from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fieldrat.quadratic import QuadSurd

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def test_square_modulus_folds_into_rational_part():
    x = QuadSurd(1, 2, 9)
    assert x.is_rational()
    assert x == 7


def test_negative_modulus_rejected():
    with pytest.raises(ValueError):
        QuadSurd(0, 1, -2)


def test_sqrt_squares_to_modulus():
    r = QuadSurd.sqrt(2)
    assert r * r == 2
    assert str(QuadSurd.sqrt(2, 2)) == "2*sqrt(2)"


def test_sign_with_opposite_parts():
    # 3 - 2 sqrt 2 > 0, 2 - 2 sqrt 2 < 0
    assert QuadSurd(3, -2, 2).sign() == 1
    assert QuadSurd(2, -2, 2).sign() == -1
    assert QuadSurd(-3, 2, 2).sign() == -1


@given(rationals, rationals, st.sampled_from([2, 3, 5, 7, 10]))
def test_sign_matches_float(a, b, N):
    x = QuadSurd(a, b, N)
    f = float(a) + float(b) * N**0.5
    if abs(f) > 1e-9:
        assert x.sign() == (1 if f > 0 else -1)


@given(rationals, rationals, rationals, rationals)
def test_field_operations(a, b, c, d):
    x, y = QuadSurd(a, b, 3), QuadSurd(c, d, 3)
    assert (x + y) - y == x
    if y:
        assert (x * y) / y == x
    assert x * x.conjugate() == x.norm()


def test_power_and_division():
    x = QuadSurd(1, 1, 2)
    assert x**3 == QuadSurd(7, 5, 2)
    assert x ** -1 == QuadSurd(-1, 1, 2)
    with pytest.raises(ZeroDivisionError):
        x / 0
    assert QuadSurd(Fraction(1, 2)).to_fraction() == Fraction(1, 2)
