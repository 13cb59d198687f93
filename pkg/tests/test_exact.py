import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetgame.exact import SQRT2, QSqrt2

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=40)
elems = st.builds(QSqrt2, fracs, fracs)


def test_basic_values():
    assert SQRT2 * SQRT2 == 2
    assert QSqrt2.pow_sqrt2(3) == QSqrt2(0, 2)
    assert QSqrt2.pow_sqrt2(-2) == Fraction(1, 2)
    assert float(QSqrt2(1, 1)) == pytest.approx(1 + math.sqrt(2))
    assert str(QSqrt2(3)) == "3"


def test_cancellation_is_accurate():
    # (1+sqrt2)^-20 is tiny; a naive float sum would lose all digits
    x = QSqrt2(1, 1)
    p = QSqrt2(1)
    for _ in range(20):
        p = p * x
    tiny = p.inverse()
    assert float(tiny) == pytest.approx((math.sqrt(2) - 1) ** 20, rel=1e-12)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QSqrt2(1) / QSqrt2(0)
    with pytest.raises(TypeError):
        QSqrt2.coerce(1.5)


@given(elems, elems)
def test_field_axioms(x, y):
    assert x + y == y + x
    assert x * y == y * x
    assert (x - y) + y == x
    if x != 0:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(elems, elems)
def test_order_matches_floats(x, y):
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)
    assert (x - y).sign() == -(y - x).sign()
