"""Genus bounds for curves over F_q whose Frobenius angles lie in a finite set.

If the Frobenius angles of a genus-g curve lie in S = {theta_j} with
multiplicities g_j (sum g_j = g), nonnegativity of the point counts over every
F_{q^n} gives the linear constraints

    2 q^(n/2) sum_j g_j cos(n theta_j) <= q^n + 1.

Maximizing sum g_j over them is a small LP.  Also here: the closed-form bound
23 s^2 q^(2s) ln q, the class-group exponent lower bound c (g/ln^3 g)^(1/4),
the product of |P(1)| over low-degree Weil polynomials, and Fermat curve data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .quadratic import QuadSurd
from .simplex import simplex_max
from .weil import WeilParams, enumerate_weil_polynomials

FLOAT_TOL = 1e-12
GENUS_CAP = 10**18


def exact_cos_pi(x: Fraction) -> Fraction | None:
    """cos(x pi) when it is rational (x with denominator 1, 2 or 3), else None."""
    x = Fraction(x) % 2
    table = {
        Fraction(0): Fraction(1),
        Fraction(1, 3): Fraction(1, 2),
        Fraction(1, 2): Fraction(0),
        Fraction(2, 3): Fraction(-1, 2),
        Fraction(1): Fraction(-1),
        Fraction(4, 3): Fraction(-1, 2),
        Fraction(3, 2): Fraction(0),
        Fraction(5, 3): Fraction(1, 2),
    }
    return table.get(x)


@dataclass(frozen=True)
class AngleSet:
    """Angles in [0, pi], strictly increasing, with optional multiplicities.

    ``pi_multiples`` holds each angle as an exact Fraction of pi when known.
    """

    angles: tuple[float, ...]
    pi_multiples: tuple[Fraction | None, ...] | None = None
    multiplicities: tuple | None = None

    def __post_init__(self):
        if any(not 0 <= a <= math.pi + 1e-15 for a in self.angles):
            raise ValueError("angles must lie in [0, pi]")
        if any(b <= a for a, b in zip(self.angles, self.angles[1:])):
            raise ValueError("angles must be strictly increasing")
        if self.pi_multiples is not None and len(self.pi_multiples) != len(self.angles):
            raise ValueError("pi multiples do not align with angles")
        if self.multiplicities is not None:
            if len(self.multiplicities) != len(self.angles):
                raise ValueError("multiplicities do not align with angles")
            if any(m < 0 for m in self.multiplicities):
                raise ValueError("multiplicities must be nonnegative")

    @classmethod
    def from_pi_multiples(cls, fracs, multiplicities=None) -> "AngleSet":
        pairs = sorted(zip((Fraction(f) for f in fracs), multiplicities or [None] * len(fracs)))
        fr = tuple(p[0] for p in pairs)
        mult = tuple(p[1] for p in pairs) if multiplicities is not None else None
        return cls(tuple(float(f) * math.pi for f in fr), fr, mult)

    @classmethod
    def parse(cls, text: str) -> "AngleSet":
        """Comma list such as "0.5pi,1pi", "pi/2, 2pi/3" or radians "1.2"."""
        items = []
        for tok in text.split(","):
            tok = tok.strip().replace("*", "").replace(" ", "")
            if not tok:
                continue
            if "pi" in tok:
                num, _, den = tok.partition("pi")
                num = num or "1"
                den = den.lstrip("/") or "1"
                f = Fraction(num) / Fraction(den)
                items.append((float(f) * math.pi, f))
            else:
                items.append((float(tok), None))
        if not items:
            raise ValueError("empty angle set")
        items.sort(key=lambda t: t[0])
        angles = tuple(a for a, _ in items)
        fr = tuple(f for _, f in items)
        return cls(angles, fr if any(f is not None for f in fr) else None)

    def __len__(self):
        return len(self.angles)

    def exact_cos(self, j: int, n: int) -> Fraction | None:
        if self.pi_multiples is None or self.pi_multiples[j] is None:
            return None
        return exact_cos_pi(n * self.pi_multiples[j])

    def default_n_max(self) -> int:
        if self.pi_multiples is None or any(f is None for f in self.pi_multiples):
            return 16
        return 2 * math.lcm(*(f.denominator for f in self.pi_multiples))

    def to_json(self) -> dict:
        return {
            "angles": list(self.angles),
            "pi_multiples": [None if f is None else str(f) for f in self.pi_multiples] if self.pi_multiples else None,
            "multiplicities": [str(m) if isinstance(m, Fraction) else m for m in self.multiplicities]
            if self.multiplicities is not None
            else None,
        }


def _scale(q: int, n: int, exact: bool):
    """2 q^(n/2), exact in Q(sqrt q) when requested."""
    if exact:
        return QuadSurd(2 * q ** (n // 2), 0, q) if n % 2 == 0 else QuadSurd(0, 2 * q ** (n // 2), q)
    return 2 * q ** (n / 2)


def _simplify(v):
    if isinstance(v, QuadSurd) and v.is_rational():
        return v.to_fraction()
    return v


def point_count(q: int, n: int, S: AngleSet):
    """q^n + 1 - 2 q^(n/2) sum_j g_j cos(n theta_j); exact when every cosine is rational."""
    if S.multiplicities is None:
        raise ValueError("point counts need multiplicities")
    cos_exact = [S.exact_cos(j, n) for j in range(len(S))]
    exact = all(c is not None for c in cos_exact) and all(isinstance(m, (int, Fraction)) for m in S.multiplicities)
    if exact:
        total = sum((Fraction(m) * c for m, c in zip(S.multiplicities, cos_exact)), Fraction(0))
        return _simplify(q**n + 1 - _scale(q, n, True) * total)
    total = sum(float(m) * math.cos(n * a) for m, a in zip(S.multiplicities, S.angles))
    return q**n + 1 - _scale(q, n, False) * total


@dataclass
class LPResult:
    status: str
    mode: str
    optimum: object | None
    multiplicities: list | None
    binding_rows: list
    n_max: int
    residual: float = 0.0

    @property
    def genus_bound(self) -> int | None:
        return None if self.optimum is None else math.floor(self.optimum)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            if isinstance(v, QuadSurd):
                return str(v)
            return v

        return {
            "status": self.status,
            "mode": self.mode,
            "optimum": enc(self.optimum),
            "genus_bound": self.genus_bound,
            "binding_rows": self.binding_rows,
            "multiplicities": None if self.multiplicities is None else [enc(m) for m in self.multiplicities],
            "n_max": self.n_max,
            "residual": self.residual,
        }


def lp_rows(q: int, S: AngleSet, n_max: int, exact: bool):
    rows, bounds = [], []
    for n in range(1, n_max + 1):
        if exact:
            scale = _scale(q, n, True)
            rows.append([scale * S.exact_cos(j, n) for j in range(len(S))])
            bounds.append(QuadSurd(q**n + 1, 0, q))
        else:
            scale = _scale(q, n, False)
            rows.append([scale * math.cos(n * a) for a in S.angles])
            bounds.append(float(q**n + 1))
    return rows, bounds


def max_genus_lp(q: int, S: AngleSet, n_max: int | None = None, mode: str = "auto") -> LPResult:
    """Largest sum of multiplicities allowed by the point-count inequalities for n <= n_max.

    ``mode`` is "exact", "float" or "auto" (exact whenever every cos(n theta)
    is rational).  An LP with no upper bound returns status "unbounded".
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    if len(S) == 0:
        raise ValueError("angle set is empty")
    n_max = S.default_n_max() if n_max is None else n_max
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rational = all(S.exact_cos(j, n) is not None for j in range(len(S)) for n in range(1, n_max + 1))
    if mode == "auto":
        mode = "exact" if rational else "float"
    if mode == "exact" and not rational:
        raise ValueError("exact mode needs every cos(n theta) to be rational")
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")

    exact = mode == "exact"
    rows, bounds = lp_rows(q, S, n_max, exact)
    one = QuadSurd(1, 0, q) if exact else 1.0
    res = simplex_max([one] * len(S), rows, bounds, tol=None if exact else FLOAT_TOL)
    if res.status == "unbounded":
        return LPResult("unbounded", mode, None, None, [], n_max)

    if exact:
        mult = [_simplify(v) for v in res.x]
        optimum = _simplify(res.value)
        binding = [n for n, s in zip(range(1, n_max + 1), res.slacks) if s == 0]
        residual = 0.0
    else:
        mult = [float(v) for v in res.x]
        optimum = float(res.value)
        lhs = [sum(a * g for a, g in zip(row, mult)) for row in rows]
        residual = max(0.0, max(l - bnd for l, bnd in zip(lhs, bounds)))
        binding = [n for n, l, bnd in zip(range(1, n_max + 1), lhs, bounds) if abs(l - bnd) <= 1e-9 * bnd]
    return LPResult("optimal", mode, optimum, mult, binding, n_max, residual)


def ehr_bound(q: int, s: int) -> float:
    """23 s^2 q^(2s) ln q (natural logarithm)."""
    if q < 2 or s < 1:
        raise ValueError("need q >= 2 and s >= 1")
    return 23 * s * s * float(q) ** (2 * s) * math.log(q)


def madan_madden_min_exponent(g, c: float = 1.0) -> float:
    """c (g / ln^3 g)^(1/4); the constant c is not known, so it is a parameter."""
    if g < 3:
        raise ValueError("g must be >= 3")
    if c <= 0:
        raise ValueError("c must be positive")
    return c * (g / math.log(g) ** 3) ** 0.25


@dataclass
class FermatRecord:
    p: int
    r: int
    genus: int
    angles: AngleSet
    point_count: object
    expected_count: int

    @property
    def maximal(self) -> bool:
        return self.point_count == self.expected_count


def fermat_data(p: int, r: int = 1) -> FermatRecord:
    """Fermat curve of degree p^r + 1 over F_p.

    Angles (2k+1) pi / (2r) for k < r, genus/r each; the count over
    F_{p^(2r)} is compared with 1 + p^(2r) + 2 g p^r.
    """
    if p < 2 or r < 1:
        raise ValueError("need p >= 2 and r >= 1")
    Q = p**r
    genus = Q * (Q - 1) // 2
    fr = [Fraction(2 * k + 1, 2 * r) for k in range(r)]
    share = Fraction(genus, r)
    S = AngleSet.from_pi_multiples(fr, [share] * r)
    count = point_count(p, 2 * r, S)
    return FermatRecord(p, r, genus, S, count, 1 + p ** (2 * r) + 2 * genus * Q)


@dataclass
class DeJongRecord:
    q: int
    d: int
    c: float
    factors: list
    P1_product: int
    genus_bound: int | None
    capped: bool

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "d": self.d,
            "c": self.c,
            "factors": [str(v) for v in self.factors],
            "P1_product": str(self.P1_product),
            "genus_bound": None if self.genus_bound is None else str(self.genus_bound),
            "capped": self.capped,
            "caveat": "implicit constant c is a free parameter; only the growth shape is meaningful",
        }


def genus_for_exponent(P, c: float = 1.0, cap: int = GENUS_CAP) -> tuple[int | None, bool]:
    """Largest g >= 3 with madan_madden_min_exponent(g, c) <= P.

    Returns ``(g, capped)``; g is None when no g qualifies, and capped is True
    when even ``cap`` qualifies (the true answer is beyond the cap).  The
    function dips to its minimum near e^3, so the increasing branch g >= 21 is
    searched exponentially then by bisection, and 3..20 are scanned otherwise.
    """
    def f(g):
        return madan_madden_min_exponent(g, c)

    start = 21
    if f(start) <= P:
        if f(cap) <= P:
            return cap, True
        lo, hi = start, start * 2
        while hi < cap and f(hi) <= P:
            lo, hi = hi, hi * 2
        hi = min(hi, cap)
        # invariant: f(lo) <= P < f(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if f(mid) <= P:
                lo = mid
            else:
                hi = mid
        return lo, False
    small = [g for g in range(3, start) if f(g) <= P]
    return (max(small) if small else None), False


def dejong_genus_bound(q: int, d: int, c: float = 1.0, cap: int = GENUS_CAP) -> DeJongRecord:
    """prod |P(1)| over irreducible weight-one q-Weil polynomials of degree <= 2d,
    and the largest genus whose class-group exponent bound stays below it."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if c <= 0:
        raise ValueError("c must be positive")
    params = WeilParams(q, 1)
    factors = []
    for m in range(1, 2 * d + 1):
        for poly in enumerate_weil_polynomials(params, m, irreducible_only=True):
            v = poly(1)
            if v == 0:
                raise ArithmeticError(f"P(1) = 0 for {poly}")
            factors.append(abs(v))
    product = math.prod(factors)
    g, capped = genus_for_exponent(product, c, cap)
    return DeJongRecord(q, d, c, factors, product, g, capped)
