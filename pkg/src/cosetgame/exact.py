"""Exact arithmetic in the field Q(sqrt 2)."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational



@total_ordering
class QSqrt2:
    """The number ``a + b*sqrt(2)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational | int = 0, b: Rational | int = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, x) -> QSqrt2:
        if isinstance(x, QSqrt2):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QSqrt2")

    @classmethod
    def pow_sqrt2(cls, e: int) -> QSqrt2:
        """sqrt(2)**e for any integer e."""
        half, odd = divmod(e, 2)
        scale = Fraction(2) ** half
        return cls(0, scale) if odd else cls(scale)

    def __repr__(self) -> str:
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt2"

    def __float__(self) -> float:
        # a + b*sqrt2 can cancel badly; round via the conjugate when it does
        if self.a and self.b and (self.a > 0) != (self.b > 0):
            conj = float(self.a) - float(self.b) * math.sqrt(2)
            return float(self.a * self.a - 2 * self.b * self.b) / conj
        return float(self.a) + float(self.b) * math.sqrt(2)

    def __eq__(self, other) -> bool:
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 2 b^2
        d = self.a * self.a - 2 * self.b * self.b
        return sa if d > 0 else -sa if d < 0 else 0

    def __lt__(self, other) -> bool:
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - o).sign() < 0

    def __neg__(self) -> QSqrt2:
        return QSqrt2(-self.a, -self.b)

    def __add__(self, other) -> QSqrt2:
        o = QSqrt2.coerce(other)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> QSqrt2:
        return self + (-QSqrt2.coerce(other))

    def __rsub__(self, other) -> QSqrt2:
        return QSqrt2.coerce(other) - self

    def __mul__(self, other) -> QSqrt2:
        o = QSqrt2.coerce(other)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> QSqrt2:
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("QSqrt2 division by zero")
        return QSqrt2(self.a / norm, -self.b / norm)

    def __truediv__(self, other) -> QSqrt2:
        return self * QSqrt2.coerce(other).inverse()

    def __rtruediv__(self, other) -> QSqrt2:
        return QSqrt2.coerce(other) * self.inverse()


SQRT2 = QSqrt2(0, 1)
