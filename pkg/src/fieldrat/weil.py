"""Weil polynomials: exact certification, enumeration and counting.

A monic integer polynomial is a Weil polynomial for the modulus ``N = q**w``
when every complex root has squared absolute value ``N``.  Membership is
decided exactly: roots at +-sqrt(N) are stripped, the remaining factor must be
self-reciprocal under ``x -> N/x``, and its real Weil transform ``h`` must have
all of its roots in ``[-2 sqrt(N), 2 sqrt(N)]`` (Sturm counting in Z[sqrt(N)]).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, isqrt
from typing import Callable, Iterable, Union

from sympy import factorint, isprime

from .polynomial import IntPolynomial, real_root_count_with_multiplicity
from .quadratic import QuadSurd

THREADS_ENV = "FIELDRAT_THREADS"


@dataclass(frozen=True)
class WeilParams:
    """Residue cardinality ``q`` (a prime power) and weight ``w``; ``N = q**w``."""

    q: int
    w: int = 1

    def __post_init__(self):
        if isinstance(self.q, bool) or not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q!r}")
        if len(factorint(self.q)) != 1:
            raise ValueError(f"q = {self.q} is not a prime power")
        if isinstance(self.w, bool) or not isinstance(self.w, int) or self.w < 0:
            raise ValueError(f"weight must be a nonnegative integer, got {self.w!r}")

    @property
    def N(self) -> int:
        return self.q**self.w


Modulus = Union[WeilParams, int]


def _modulus(params: Modulus) -> int:
    if isinstance(params, WeilParams):
        return params.N
    if isinstance(params, bool) or not isinstance(params, int) or params < 1:
        raise ValueError(f"N must be a positive integer, got {params!r}")
    return params


def _square_root(N: int) -> int | None:
    s = isqrt(N)
    return s if s * s == N else None


@dataclass(frozen=True)
class WeilCertificate:
    """Witness that every root of a polynomial has squared modulus ``N``.

    The polynomial equals ``(x - sqrt N)**mult_plus * (x + sqrt N)**mult_minus
    * x**g * h(x + N/x)`` where ``h = real_weil_part`` has degree ``g`` and
    ``sturm_count`` (roots of ``h`` in ``[-2 sqrt N, 2 sqrt N]``, with
    multiplicity) equals ``g``.  ``epsilon`` is the sign in
    ``x**m p(N/x) = epsilon * N**(m/2) * p(x)``.
    """

    N: int
    mult_plus: int
    mult_minus: int
    real_weil_part: IntPolynomial
    sturm_count: int
    epsilon: int

    def __bool__(self):
        return True

    def reconstruct(self) -> IntPolynomial:
        N = self.N
        s = _square_root(N)
        if s is not None:
            linear = IntPolynomial((-s, 1)) ** self.mult_plus * IntPolynomial((s, 1)) ** self.mult_minus
        else:
            if self.mult_plus != self.mult_minus:
                raise ValueError("unpaired +-sqrt(N) roots with irrational sqrt(N)")
            linear = IntPolynomial((-N, 0, 1)) ** self.mult_plus
        return linear * _inverse_transform(self.real_weil_part, N)


@dataclass(frozen=True)
class WeilRejection:
    """Negative verdict; ``stage`` names the failing check."""

    stage: str
    reason: str

    def __bool__(self):
        return False


def strip_sqrt_roots(p: IntPolynomial, N: int) -> tuple[int, int, IntPolynomial]:
    """Remove every root at +-sqrt(N); returns ``(mult_plus, mult_minus, rest)``."""
    s = _square_root(N)
    if s is not None:
        counts = []
        for root in (s, -s):
            lin = IntPolynomial((-root, 1))
            k = 0
            while p.degree >= 1:
                q, r = p.divmod_monic(lin)
                if not r.is_zero():
                    break
                p, k = q, k + 1
            counts.append(k)
        return counts[0], counts[1], p
    quad = IntPolynomial((-N, 0, 1))
    k = 0
    while p.degree >= 2:
        q, r = p.divmod_monic(quad)
        if not r.is_zero():
            break
        p, k = q, k + 1
    return k, k, p


def _reversal_holds(p1: IntPolynomial, N: int) -> bool:
    d = p1.degree
    g = d // 2
    Ng = N**g
    return all(p1[i] * N**i == Ng * p1[d - i] for i in range(d + 1))


def _binomial_expansion(k: int, g: int, N: int) -> list[int]:
    """Coefficients (lowest first) of ``x**g * (x + N/x)**k`` for ``k <= g``."""
    out = [0] * (g + k + 1)
    for j in range(k + 1):
        out[g + k - 2 * j] += comb(k, j) * N**j
    return out


def _inverse_transform(h: IntPolynomial, N: int) -> IntPolynomial:
    g = h.degree
    out = [0] * (2 * g + 1)
    for k, hk in enumerate(h.coeffs):
        if hk:
            for i, v in enumerate(_binomial_expansion(k, g, N)):
                out[i] += hk * v
    return IntPolynomial(out)


def _transform(p1: IntPolynomial, N: int) -> IntPolynomial | None:
    """Triangular recursion for ``h`` with ``p1 = x**g h(x + N/x)``; None if no such h."""
    g = p1.degree // 2
    r = list(p1.coeffs)
    h = [0] * (g + 1)
    for k in range(g, -1, -1):
        ck = r[g + k]
        h[k] = ck
        if ck:
            for i, v in enumerate(_binomial_expansion(k, g, N)):
                r[i] -= ck * v
    if any(r):
        return None
    return IntPolynomial(h)


def real_weil_transform(p1: IntPolynomial, N: int) -> IntPolynomial:
    """The monic ``h`` of degree ``g`` with ``p1(x) = x**g * h(x + N/x)``.

    ``p1`` must be monic of even degree, self-reciprocal
    (``x**(2g) p1(N/x) = N**g p1(x)``) and must not vanish at +-sqrt(N).
    """
    N = _modulus(N)
    if not p1.is_monic():
        raise ValueError("p1 must be monic")
    if p1.degree % 2:
        raise ValueError(f"p1 must have even degree, got {p1.degree}")
    root = QuadSurd.sqrt(N)
    if p1(root) == 0 or p1(-root) == 0:
        raise ValueError("p1 has a root at +-sqrt(N)")
    if not _reversal_holds(p1, N):
        raise ValueError("reversal identity x^(2g) p1(N/x) = N^g p1(x) fails")
    h = _transform(p1, N)
    assert h is not None, "reversal identity holds but transform left a remainder"
    return h


def is_weil_polynomial(p: IntPolynomial, params: Modulus) -> WeilCertificate | WeilRejection:
    """Certify that every root of ``p`` has squared modulus ``N``.

    Returns a truthy :class:`WeilCertificate` on success and a falsy
    :class:`WeilRejection` naming the failing stage otherwise.
    """
    N = _modulus(params)
    if p.degree < 1:
        raise ValueError("polynomial must have degree >= 1")
    if not p.is_monic():
        raise ValueError(f"polynomial must be monic: {p}")

    mult_plus, mult_minus, p1 = strip_sqrt_roots(p, N)
    if p1.degree % 2:
        return WeilRejection("reversal", f"odd degree {p1.degree} after stripping +-sqrt(N) roots")
    if not _reversal_holds(p1, N):
        return WeilRejection("reversal", "x^(2g) p1(N/x) != N^g p1(x)")
    h = _transform(p1, N)
    if h is None:
        return WeilRejection("transform", "no real Weil transform")
    g = h.degree
    bound = QuadSurd.sqrt(N, 2)
    count = real_root_count_with_multiplicity(h, -bound, bound) if g else 0
    if count != g:
        return WeilRejection("sturm", f"only {count} of {g} roots of h lie in [-2 sqrt N, 2 sqrt N]")
    return WeilCertificate(
        N=N,
        mult_plus=mult_plus,
        mult_minus=mult_minus,
        real_weil_part=h,
        sturm_count=count,
        epsilon=-1 if mult_plus % 2 else 1,
    )


# -- enumeration --------------------------------------------------------------

Allowed = Callable[[int, list, int, int], Iterable[int]]


def _newton_search(
    m: int,
    box: list[int],
    power_bound_sq: list[int],
    allowed: Allowed | None = None,
    extra: Callable[[int, list], bool] | None = None,
    first: Iterable[int] | None = None,
) -> Iterable[list[int]]:
    """Depth-first search over monic ``x**m + c1 x**(m-1) + ... + cm``.

    At each prefix the Newton identity ``p_k = -(k c_k + sum_{i<k} c_i p_{k-i})``
    turns ``|p_k|**2 <= power_bound_sq[k]`` into an integer range for ``c_k``,
    intersected with ``|c_k| <= box[k]``.  Yields the list ``[1, c1, ..., cm]``.
    """
    c = [1] + [0] * m
    p = [m] + [0] * m

    def rec(k):
        if k > m:
            yield list(c)
            return
        s = sum(c[i] * p[k - i] for i in range(1, k))
        bound = isqrt(power_bound_sq[k])
        lo = max(-box[k], -((bound + s) // k))
        hi = min(box[k], (bound - s) // k)
        if lo > hi:
            return
        if k == 1 and first is not None:
            candidates = [v for v in first if lo <= v <= hi]
        elif allowed is not None:
            candidates = allowed(k, c, lo, hi)
        else:
            candidates = range(lo, hi + 1)
        for v in candidates:
            c[k] = v
            p[k] = -(k * v + s)
            if extra is not None and not extra(k, p):
                continue
            yield from rec(k + 1)
        c[k] = 0

    yield from rec(1)


def _to_poly(c: list[int]) -> IntPolynomial:
    return IntPolynomial(reversed(c))


def _reciprocal_rule(m: int, N: int, eps: int) -> Allowed:
    """Lower-half coefficients forced by ``x**m p(N/x) = eps N**(m/2) p(x)``."""
    s = _square_root(N)

    def allowed(k, c, lo, hi):
        twice = 2 * k - m
        if twice < 0:
            return range(lo, hi + 1)
        if twice == 0:
            if eps == 1:
                return range(lo, hi + 1)
            return [0] if lo <= 0 <= hi else []
        partner = c[m - k]
        if partner == 0:
            v = 0
        elif twice % 2 == 0:
            v = eps * partner * N ** (twice // 2)
        elif s is not None:
            v = eps * partner * s**twice
        else:
            return []
        return [v] if lo <= v <= hi else []

    return allowed


def _weil_bounds(m: int, N: int) -> tuple[list[int], list[int]]:
    box = [0] + [isqrt(comb(m, k) ** 2 * N**k) for k in range(1, m + 1)]
    power = [0] + [m * m * N**k for k in range(1, m + 1)]
    return box, power


def _weil_task(args) -> list[tuple[int, ...]]:
    N, m, eps, firsts = args
    box, power = _weil_bounds(m, N)
    out = []
    for c in _newton_search(m, box, power, _reciprocal_rule(m, N, eps), first=firsts):
        poly = _to_poly(c)
        if is_weil_polynomial(poly, N):
            out.append(poly.coeffs)
    return out


def _worker_count(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, workers)


_ALL_CACHE: dict[tuple[int, int], tuple[IntPolynomial, ...]] = {}


def _enumerate_all(N: int, m: int, workers: int = 1) -> tuple[IntPolynomial, ...]:
    # the output does not depend on the worker count, so cache on (N, m) only
    key = (N, m)
    if key not in _ALL_CACHE:
        _ALL_CACHE[key] = _compute_all(N, m, workers)
    return _ALL_CACHE[key]


def _compute_all(N: int, m: int, workers: int = 1) -> tuple[IntPolynomial, ...]:
    box, _ = _weil_bounds(m, N)
    top = list(range(-box[1], box[1] + 1))
    if workers > 1 and len(top) > 1:
        chunks = [top[i::workers] for i in range(workers)]
        tasks = [(N, m, eps, chunk) for eps in (1, -1) for chunk in chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_weil_task, tasks))
    else:
        results = [_weil_task((N, m, eps, top)) for eps in (1, -1)]
    polys = {IntPolynomial(c) for part in results for c in part}
    return tuple(sorted(polys, key=IntPolynomial.sort_key))


def is_irreducible_among(p: IntPolynomial, divisor_pool: Iterable[IntPolynomial]) -> bool:
    """True if no polynomial of degree ``1..deg(p)//2`` in the pool divides ``p``.

    Exact over Q by Gauss's lemma when the pool contains every monic integer
    polynomial of those degrees that can divide ``p``.
    """
    half = p.degree // 2
    pc = p.coeffs
    p3 = p(3)
    for d in divisor_pool:
        if not 1 <= d.degree <= half:
            continue
        # d | p forces d(3) | p(3); cheap screen before the division
        d3 = d(3)
        if d3 and p3 % d3:
            continue
        if _monic_divides(d.coeffs, pc):
            return False
    return True


def _monic_divides(dc: tuple, pc: tuple) -> bool:
    r = list(pc)
    k = len(dc) - 1
    for i in range(len(r) - 1, k - 1, -1):
        c = r[i]
        if c:
            for j in range(k):
                r[i - k + j] -= c * dc[j]
    return not any(r[:k])


@lru_cache(maxsize=None)
def _enumerate_irreducible(N: int, m: int) -> tuple[IntPolynomial, ...]:
    # every monic factor of a Weil polynomial is a Weil polynomial of the same modulus
    pool = [d for k in range(1, m // 2 + 1) for d in _enumerate_irreducible(N, k)]
    return tuple(p for p in _enumerate_all(N, m) if is_irreducible_among(p, pool))


def enumerate_weil_polynomials(
    params: Modulus, m: int, irreducible_only: bool = False, workers: int | None = None
) -> list[IntPolynomial]:
    """All monic integer polynomials of degree ``m`` whose roots have ``|a|**2 = N``.

    The list is complete, duplicate-free and sorted by :meth:`IntPolynomial.sort_key`.
    """
    N = _modulus(params)
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ValueError(f"degree must be >= 1, got {m!r}")
    if irreducible_only:
        return list(_enumerate_irreducible(N, m))
    return list(_enumerate_all(N, m, _worker_count(workers)))


@dataclass(frozen=True)
class WeilCount:
    by_degree: dict[int, int]
    cumulative: dict[int, int] = field(default_factory=dict)


def count_weil_integers(q: int, w: int, d_max: int) -> WeilCount:
    """Irreducible Weil polynomials (minimal polynomials of q-Weil integers) per degree."""
    params = WeilParams(q, w)
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    by_degree, cumulative, total = {}, {}, 0
    for d in range(1, d_max + 1):
        by_degree[d] = len(enumerate_weil_polynomials(params, d, irreducible_only=True))
        total += by_degree[d]
        cumulative[d] = total
    return WeilCount(by_degree, cumulative)


# -- totally real polynomials -------------------------------------------------


@lru_cache(maxsize=None)
def _real_rooted(N: int, g: int) -> tuple[IntPolynomial, ...]:
    """Monic degree-``g`` integer polynomials with all roots real in ``[-2 sqrt N, 2 sqrt N]``."""
    # roots bounded by R = 2 sqrt(N), so R**k = 2**k N**(k/2)
    box = [0] + [isqrt(comb(g, k) ** 2 * 4**k * N**k) for k in range(1, g + 1)]
    power = [0] + [g * g * 4**k * N**k for k in range(1, g + 1)]

    def extra(k, p):
        if k % 2 == 0 and p[k] < 0:
            return False
        # Cauchy-Schwarz for real roots: p1**2 <= g p2
        return k != 2 or p[1] * p[1] <= g * p[2]

    bound = QuadSurd.sqrt(N, 2)
    out = []
    for c in _newton_search(g, box, power, extra=extra):
        poly = _to_poly(c)
        if real_root_count_with_multiplicity(poly, -bound, bound) == g:
            out.append(poly)
    return tuple(sorted(out, key=IntPolynomial.sort_key))


@lru_cache(maxsize=None)
def _real_rooted_irreducible(N: int, g: int) -> tuple[IntPolynomial, ...]:
    pool = [d for k in range(1, g // 2 + 1) for d in _real_rooted_irreducible(N, k)]
    return tuple(p for p in _real_rooted(N, g) if is_irreducible_among(p, pool))


def real_weil_polynomials(params: Modulus, g: int, irreducible_only: bool = False) -> list[IntPolynomial]:
    """Monic integer ``h`` of degree ``g`` with all roots real in ``[-2 sqrt N, 2 sqrt N]``."""
    N = _modulus(params)
    if g < 1:
        raise ValueError("degree must be >= 1")
    return list(_real_rooted_irreducible(N, g) if irreducible_only else _real_rooted(N, g))


def hecke_trace_candidates(p: int, k: int, A: int) -> list[IntPolynomial]:
    """Possible minimal polynomials of ``a_p(f) = alpha + conj(alpha)`` with ``[Q(a_p):Q] <= A``.

    ``alpha`` is a p-Weil number of weight ``k - 1``, so ``a_p`` is totally real
    with every conjugate in ``[-2 p**((k-1)/2), 2 p**((k-1)/2)]``.
    """
    if not isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k < 2:
        raise ValueError("weight k must be >= 2")
    if A < 1:
        raise ValueError("degree bound A must be >= 1")
    N = p ** (k - 1)
    out = []
    for d in range(1, A + 1):
        out.extend(_real_rooted_irreducible(N, d))
    return out


def enumeration_payload(params: WeilParams, m: int, polys: list[IntPolynomial]) -> dict:
    return {
        "q": params.q,
        "w": params.w,
        "degree": m,
        "polynomials": [p.to_json() for p in polys],
    }
