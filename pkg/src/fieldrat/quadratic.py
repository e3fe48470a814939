"""Exact arithmetic in Q(sqrt(N)) for a fixed nonnegative integer N.

Elements are ``a + b*sqrt(N)`` with rational ``a`` and ``b``.  Signs and
comparisons are decided without floating point: the sign of ``a + b*sqrt(N)``
follows from comparing ``a**2`` with ``N*b**2``.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    raise TypeError(f"expected a rational number, got {type(v).__name__}")


class QuadSurd:
    """Element ``a + b*sqrt(N)`` of Q(sqrt(N)), N >= 0."""

    __slots__ = ("a", "b", "N")

    def __init__(self, a=0, b=0, N: int = 0):
        N = int(N)
        if N < 0:
            raise ValueError(f"N must be nonnegative, got {N}")
        a, b = _frac(a), _frac(b)
        s = isqrt(N)
        if s * s == N:
            # perfect square: fold the surd part into the rational part
            a, b = a + b * s, Fraction(0)
        self.a, self.b, self.N = a, b, N

    @classmethod
    def sqrt(cls, N: int, coefficient=1) -> "QuadSurd":
        """``coefficient * sqrt(N)``."""
        return cls(0, coefficient, N)

    def _coerce(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if other.N != self.N and other.b and self.b:
                raise ValueError(f"mixing Q(sqrt({self.N})) with Q(sqrt({other.N}))")
            return other
        return QuadSurd(_frac(other), 0, self.N)

    def _n(self, other: "QuadSurd") -> int:
        # a rational element may have been built with any N
        return self.N if self.b else other.N

    def __add__(self, other):
        o = self._coerce(other)
        return QuadSurd(self.a + o.a, self.b + o.b, self._n(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.N)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        N = self._n(o)
        return QuadSurd(self.a * o.a + self.b * o.b * N, self.a * o.b + self.b * o.a, N)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b, self.N)

    def norm(self) -> Fraction:
        return self.a * self.a - self.N * self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(N))")
        num = self * o.conjugate()
        return QuadSurd(num.a / n, num.b / n, num.N)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return QuadSurd(1, 0, self.N) / (self ** (-k))
        result = QuadSurd(1, 0, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger magnitude wins
        lhs, rhs = a * a, self.N * b * b
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.N))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return self.sign() != 0

    def __float__(self):
        return float(self.a) + float(self.b) * self.N**0.5

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __repr__(self):
        return f"QuadSurd({self.a}, {self.b}, N={self.N})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.N})"
        return f"{self.a} + {self.b}*sqrt({self.N})"
