"""Explicit depth and conductor bounds for representations of bounded
cyclotomic degree over a p-adic field.

Two depth bounds are provided.  ``v1`` bounds the wild inertia image by the
order of a finite general linear group over an auxiliary residue field; ``v2``
bounds it by the order of a p-Sylow subgroup instead.  Everything is exact:
integers, or Fractions for quantities divided by ``p - 1``.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from sympy import divisors, factorint, isprime, n_order, nextprime, totient


@dataclass(frozen=True)
class LocalFieldParams:
    p: int
    e_K: int = 1
    f_K: int = 1

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.e_K < 1 or self.f_K < 1:
            raise ValueError("ramification index and residue degree must be >= 1")


@dataclass(frozen=True)
class DepthBoundReport:
    n: int
    A: int
    method: str
    depth: Fraction
    conductor: Fraction
    f: int | None = None
    l: int | None = None
    residue_field_size: int | None = None
    gl_order: int | None = None
    sylow_bound: int | None = None
    flags: tuple[str, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "A": self.A,
            "method": self.method,
            "f": _int_str(self.f),
            "l": _int_str(self.l),
            "residue_field_size": _int_str(self.residue_field_size),
            "gl_order": _int_str(self.gl_order),
            "sylow_bound": _int_str(self.sylow_bound),
            "depth": frac_str(self.depth),
            "conductor": frac_str(self.conductor),
            "flags": list(self.flags),
        }


def big_str(v: int) -> str:
    """Decimal string of an integer of any size (lifts the interpreter digit guard)."""
    old = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        return str(v)
    finally:
        sys.set_int_max_str_digits(old)


def frac_str(x: Fraction) -> str:
    """"num/den", or just "num" for integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return big_str(x.numerator)
    return f"{big_str(x.numerator)}/{big_str(x.denominator)}"


def _int_str(v):
    return None if v is None else big_str(v)


def _positive(name, v):
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ValueError(f"{name} must be a positive integer, got {v!r}")


def lcm_phi_le(B: int) -> int:
    """lcm of every m >= 1 with phi(m) <= B.

    phi(m) >= sqrt(m/2), so m <= 2 B**2 covers every candidate.
    """
    _positive("B", B)
    out = 1
    for m in range(1, 2 * B * B + 1):
        if totient(m) <= B:
            out = lcm(out, m)
    return out


def gl_order(n: int, Q: int) -> int:
    """|GL_n(F_Q)| = prod_{i<n} (Q**n - Q**i)."""
    _positive("n", n)
    if Q < 2:
        raise ValueError("Q must be >= 2")
    Qn = Q**n
    out = 1
    for i in range(n):
        out *= Qn - Q**i
    return out


def _smallest_prime_coprime(f: int) -> int:
    l = 2
    while f % l == 0:
        l = nextprime(l)
    return l


def depth_bound_v1(n: int, A: int, field: LocalFieldParams) -> DepthBoundReport:
    _positive("n", n)
    _positive("A", A)
    f = lcm_phi_le(n * A)
    l = _smallest_prime_coprime(f)
    # (Z/f)^x is trivial for f <= 2
    order = 1 if f <= 2 else n_order(l, f)
    Q = l**order
    gl = gl_order(n, Q)
    depth = Fraction(gl * field.e_K, field.p - 1)
    return DepthBoundReport(
        n=n,
        A=A,
        method="v1",
        depth=depth,
        conductor=n * (depth + 1),
        f=f,
        l=l,
        residue_field_size=Q,
        gl_order=gl,
    )


def sylow_formula(n: int, p: int, t: int, m: int) -> int:
    """Exponent bound m*floor(n/t) + sum_{i>=1} floor(n/(p**i t))."""
    if not isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    _positive("t", t)
    if m < 0:
        raise ValueError("m must be >= 0")
    total = m * (n // t)
    step = p * t
    while step <= n:
        total += n // step
        step *= p
    return total


def _phi_prime_power(p: int, m: int) -> int:
    return 1 if m == 0 else (p - 1) * p ** (m - 1)


def sylow_order_bound(n: int, p: int, A: int) -> int:
    """Largest p**sylow_formula(n, p, t, m) over t | p-1 and phi(p**m) <= t A."""
    _positive("n", n)
    _positive("A", A)
    best = 1
    for t in divisors(p - 1):
        m = 0
        while _phi_prime_power(p, m + 1) <= t * A:
            m += 1
        # the exponent is increasing in m, so the largest feasible m wins
        best = max(best, p ** sylow_formula(n, p, t, m))
    return best


def depth_bound_v2(n: int, A: int, field: LocalFieldParams) -> DepthBoundReport:
    _positive("n", n)
    _positive("A", A)
    s = sylow_order_bound(n, field.p, A)
    depth = Fraction(s * field.e_K, field.p - 1)
    flags = ("p2_caveat",) if field.p == 2 else ()
    return DepthBoundReport(
        n=n,
        A=A,
        method="v2",
        depth=depth,
        conductor=n * (depth + 1),
        sylow_bound=s,
        flags=flags,
    )


@dataclass(frozen=True)
class CyclotomicRatio:
    n: int
    N: int
    ratio: Fraction
    bound: int
    within_bound: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "ratio": frac_str(self.ratio),
            "bound": big_str(self.bound),
            "within_bound": self.within_bound,
        }


def cyclotomic_ratio(n: int, N: int) -> CyclotomicRatio:
    """prod over p**r || N of min(phi(p**r), n, n**2/phi(p**r)), compared with n**n."""
    _positive("n", n)
    _positive("N", N)
    ratio = Fraction(1)
    for p, r in factorint(N).items():
        ph = _phi_prime_power(p, r)
        ratio *= min(Fraction(ph), Fraction(n), Fraction(n * n, ph))
    return CyclotomicRatio(n, N, ratio, n**n, ratio <= n**n)
