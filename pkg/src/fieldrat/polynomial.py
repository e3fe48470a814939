"""Integer polynomials and exact real-root counting.

Coefficients are stored lowest degree first as Python ints.  Sturm chains are
built with sign-corrected pseudo-remainders and reduced to primitive integer
polynomials, so chain evaluation never leaves Z (or Z[sqrt(N)] at surd
endpoints).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .quadratic import QuadSurd


def _trim(coeffs: Sequence) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = []
        for v in coeffs:
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise ValueError(f"non-integral coefficient {v}")
                v = v.numerator
            if isinstance(v, bool) or not isinstance(v, int):
                v = int(v)
            c.append(v)
        object.__setattr__(self, "coeffs", _trim(c))

    @classmethod
    def from_high(cls, *coeffs: int) -> "IntPolynomial":
        """Build from coefficients listed highest degree first."""
        return cls(reversed(coeffs))

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self[i] + other[i] for i in range(n))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        result = IntPolynomial((1,))
        for _ in range(k):
            result = result * self
        return result

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by x**k."""
        return IntPolynomial((0,) * k + self.coeffs)

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod_monic(self, divisor: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Quotient and remainder by a monic divisor, exact over Z."""
        if not divisor.is_monic():
            raise ValueError("divisor must be monic")
        r = list(self.coeffs)
        d = divisor.degree
        if len(r) - 1 < d:
            return IntPolynomial(()), self
        q = [0] * (len(r) - d)
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i]
            if c:
                q[i - d] = c
                for j, b in enumerate(divisor.coeffs):
                    r[i - d + j] -= c * b
        return IntPolynomial(q), IntPolynomial(r[:d])

    def divides(self, other: "IntPolynomial") -> bool:
        """True if this monic polynomial divides ``other`` in Z[x]."""
        return other.divmod_monic(self)[1].is_zero()

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        """Divide by the content, normalizing the leading coefficient to be positive."""
        g = self.content()
        if g == 0:
            return self
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def sort_key(self) -> tuple[int, ...]:
        """Lexicographic key on coefficients read from the top degree down."""
        return (self.degree,) + tuple(reversed(self.coeffs))

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "IntPolynomial":
        return cls(int(c) for c in data)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"


# -- helpers over Q[x], used for gcd and square-free decomposition -----------


def _qpoly(p: IntPolynomial) -> list[Fraction]:
    return [Fraction(c) for c in p.coeffs]


def _qtrim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _qdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _qtrim(a)
    q = [Fraction(0)] * (len(a) - db)
    lb = b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lb
        q[i - db] = c
        if c:
            for j, bj in enumerate(b):
                a[i - db + j] -= c * bj
    return _qtrim(q), _qtrim(a[:db])


def _to_primitive(c: list[Fraction]) -> IntPolynomial:
    if not c:
        return IntPolynomial(())
    den = 1
    for v in c:
        den = den * v.denominator // gcd(den, v.denominator)
    return IntPolynomial(int(v * den) for v in c).primitive()


def _qmonic(c: list[Fraction]) -> list[Fraction]:
    lead = c[-1]
    return [v / lead for v in c]


def _qgcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _qtrim(list(a)), _qtrim(list(b))
    while b:
        a, b = b, _qdivmod(a, b)[1]
    return _qmonic(a) if a else a


def _qderiv(c: list[Fraction]) -> list[Fraction]:
    return [i * v for i, v in enumerate(c)][1:]


def _qsub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _qtrim([x - y for x, y in zip(a, b)])


def _qexact(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    q, r = _qdivmod(a, b)
    if r:
        raise ValueError("inexact polynomial division")
    return q


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Q (positive leading coefficient)."""
    return _to_primitive(_qgcd(_qpoly(p), _qpoly(q)))


def exact_quotient(p: IntPolynomial, d: IntPolynomial) -> IntPolynomial:
    """``p / d`` over Q, returned as a primitive integer polynomial."""
    q, r = _qdivmod(_qpoly(p), _qpoly(d))
    if r:
        raise ValueError(f"{d} does not divide {p}")
    return _to_primitive(q)


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: ``p = c * prod f_i**i`` with square-free, pairwise coprime ``f_i``.

    Returns the nonconstant ``(f_i, i)`` pairs, each ``f_i`` primitive.
    """
    if p.degree < 1:
        return []
    f = _qmonic(_qpoly(p))
    df = _qderiv(f)
    a = _qgcd(f, df)
    b = _qexact(f, a)
    c = _qexact(df, a)
    d = _qsub(c, _qderiv(b))
    out = []
    i = 1
    while len(b) > 1:
        g = _qgcd(b, d)
        if len(g) > 1:
            out.append((_to_primitive(g), i))
        b = _qexact(b, g)
        c = _qexact(d, g)
        d = _qsub(c, _qderiv(b))
        i += 1
    return out


# -- Sturm sequences ----------------------------------------------------------


def _signed_prem(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Remainder of ``|lc(b)|**k * a`` by ``b``; a positive multiple of the true remainder."""
    r = list(a.coeffs)
    db, lb = b.degree, b.leading
    scale = abs(lb)
    while len(r) - 1 >= db and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        c = r[-1]
        shift = len(r) - 1 - db
        r = [v * scale for v in r]
        # eliminate the leading term: scale*c - (c*sign(lb))*lb == 0
        f = c if lb > 0 else -c
        for j, bj in enumerate(b.coeffs):
            r[shift + j] -= f * bj
        r.pop()
    return IntPolynomial(r)


def sturm_chain(p: IntPolynomial) -> list[IntPolynomial]:
    """Sturm sequence of ``p`` with every member primitive over Z."""
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [p, p.derivative()]
    if chain[-1].is_zero():
        return chain[:1]
    while chain[-1].degree > 0:
        r = _signed_prem(chain[-2], chain[-1])
        if r.is_zero():
            break
        g = r.content()
        chain.append(IntPolynomial(-c // g for c in r.coeffs))
    return chain


def _int_point(x) -> tuple[int, int, int, int]:
    """Write ``x`` as ``(u + v sqrt N) / d`` with integers and ``d > 0``."""
    if isinstance(x, QuadSurd):
        a, b, N = Fraction(x.a), Fraction(x.b), x.N
    else:
        a, b, N = Fraction(x), Fraction(0), 0
    d = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return a.numerator * (d // a.denominator), b.numerator * (d // b.denominator), N, d


def _surd_sign(A: int, B: int, N: int) -> int:
    """Sign of ``A + B sqrt N`` for a non-square or zero ``N``."""
    sa, sb = (A > 0) - (A < 0), (B > 0) - (B < 0)
    if sb == 0 or sa == sb:
        return sa or sb
    if sa == 0:
        return sb
    # opposite signs: compare magnitudes squared
    d = A * A - N * B * B
    return sa if d > 0 else (sb if d < 0 else 0)


def _sign_at_point(p: IntPolynomial, pt) -> int:
    # homogeneous Horner: d^deg * p(x) evaluated in Z[sqrt N]
    u, v, N, d = pt
    A, B, dk = 0, 0, 1
    for c in reversed(p.coeffs):
        A, B = A * u + B * v * N + c * dk, A * v + B * u
        dk *= d
    return _surd_sign(A, B, N)


def _sign_at(p: IntPolynomial, x) -> int:
    return _sign_at_point(p, _int_point(x))


def _variations(chain: list[IntPolynomial], x) -> int:
    pt = _int_point(x)
    signs = [s for s in (_sign_at_point(q, pt) for q in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _as_number(v):
    if isinstance(v, QuadSurd):
        return v
    if isinstance(v, (int, Fraction)):
        return v
    raise TypeError(f"endpoint must be int, Fraction or QuadSurd, got {type(v).__name__}")


def sturm_root_count(h: IntPolynomial, lo, hi) -> int:
    """Number of distinct real roots of ``h`` in the closed interval ``[lo, hi]``.

    Endpoints may be ints, Fractions or :class:`QuadSurd` values; all sign
    evaluations are exact.
    """
    if h.is_zero():
        raise ValueError("zero polynomial has no finite root count")
    lo, hi = _as_number(lo), _as_number(hi)
    if lo > hi:
        raise ValueError("empty interval: lo > hi")
    if h.degree < 1:
        return 0
    chain = sturm_chain(h)
    if chain[-1].degree > 0:
        # the chain ends in gcd(h, h'); redo it on the square-free part
        chain = sturm_chain(exact_quotient(h, chain[-1]))
    return _count_with_chain(chain, lo, hi)


def _count_with_chain(chain: list[IntPolynomial], lo, hi) -> int:
    # V(lo) - V(hi) counts roots in (lo, hi]
    count = _variations(chain, lo) - _variations(chain, hi)
    if _sign_at(chain[0], lo) == 0:
        count += 1
    return count


def real_root_count_with_multiplicity(h: IntPolynomial, lo, hi) -> int:
    """Real roots of ``h`` in ``[lo, hi]`` counted with multiplicity."""
    if h.is_zero():
        raise ValueError("zero polynomial has no finite root count")
    lo, hi = _as_number(lo), _as_number(hi)
    if lo > hi:
        raise ValueError("empty interval: lo > hi")
    if h.degree < 1:
        return 0
    chain = sturm_chain(h)
    if chain[-1].degree == 0:
        return _count_with_chain(chain, lo, hi)
    return sum(k * sturm_root_count(f, lo, hi) for f, k in squarefree_decomposition(h))
