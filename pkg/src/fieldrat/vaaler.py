"""Extremal trigonometric majorants and minorants of interval indicators on
the torus T = R/Z, their products on T^r, and Weyl-group averaging.

For an interval I = [a, a + L) and degree kappa the one-dimensional pair is

    c_nu = J(nu/(kappa+1)) * fhat(nu) +- K(nu/(kappa+1)) * (e(-nu a) + e(-nu b)) / (2 kappa + 2)

with J(t) = pi t (1-|t|) cot(pi t) + |t|, K(t) = 1 - |t| and fhat the Fourier
coefficients of the indicator.  The means are L +- 1/(kappa+1).  A point
(L = 0) uses the majorant 2 F(x - a)/(kappa+1) with F the Fejer kernel, and
the zero minorant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

IMAG_TOL = 1e-10
CHUNK = 4096

GROUPS = ("permutations", "sign_flips", "signed_permutations")


def beurling_transforms(t: float) -> tuple[float, float]:
    """(J(t), K(t)) = (pi t (1-|t|) cot(pi t) + |t|, 1 - |t|) for |t| < 1."""
    if not abs(t) < 1:
        raise ValueError(f"|t| must be < 1, got {t}")
    if t == 0:
        return 1.0, 1.0
    a = abs(t)
    return float(np.pi * t * (1 - a) / np.tan(np.pi * t) + a), 1.0 - a


def _transforms(nu: np.ndarray, kappa: int) -> tuple[np.ndarray, np.ndarray]:
    t = nu / (kappa + 1)
    a = np.abs(t)
    J = np.ones_like(t)
    nz = t != 0
    J[nz] = np.pi * t[nz] * (1 - a[nz]) / np.tan(np.pi * t[nz]) + a[nz]
    return J, 1 - a


@dataclass(frozen=True)
class TorusInterval:
    """Half-open arc [a, a + length) of T; length 0 is a point, length 1 is all of T."""

    a: Fraction | float
    length: Fraction | float

    def __post_init__(self):
        if not 0 <= self.a < 1:
            raise ValueError(f"start must lie in [0, 1), got {self.a}")
        if not 0 <= self.length <= 1:
            raise ValueError(f"length must lie in [0, 1], got {self.length}")

    @classmethod
    def from_endpoints(cls, a, b) -> "TorusInterval":
        """[a, b) with 0 <= a, b <= 1; a > b wraps through 0."""
        if not (0 <= a <= 1 and 0 <= b <= 1):
            raise ValueError("endpoints must lie in [0, 1]")
        if a == 1:
            a = a - 1
        if b == 1 and a == 0:
            return cls(a, b)
        return cls(a, (b - a) % 1)

    @property
    def b(self):
        return (self.a + self.length) % 1

    @property
    def is_point(self) -> bool:
        return self.length == 0

    def contains(self, x, point_tol: float = 1e-12):
        """Indicator; points use closed membership within ``point_tol``."""
        x = np.asarray(x, dtype=float)
        if self.length == 1:
            return np.ones(x.shape, dtype=bool)
        d = np.mod(x - float(self.a), 1.0)
        if self.is_point:
            return np.minimum(d, 1 - d) <= point_tol
        return d < float(self.length)


@dataclass
class TrigPolynomial:
    """Sum of c_nu e(<nu, x>) over multi-indices with |nu_i| <= degree.

    ``coeffs`` is a dense complex array of shape (2 degree + 1,)*rank with
    nu_i stored at offset nu_i + degree.  ``terms`` optionally holds the same
    polynomial as a weighted sum of products of one-dimensional coefficient
    vectors, which makes evaluation on large point sets cheap.
    """

    rank: int
    degree: int
    coeffs: np.ndarray
    terms: list | None = None
    exact_mean: Fraction | None = None

    @classmethod
    def from_terms(cls, rank, degree, terms, exact_mean=None) -> "TrigPolynomial":
        dense = np.zeros((2 * degree + 1,) * rank, dtype=complex)
        for w, factors in terms:
            prod = np.asarray(factors[0])
            for f in factors[1:]:
                prod = np.multiply.outer(prod, f)
            dense += w * prod
        return cls(rank, degree, dense, list(terms), exact_mean)

    def coefficient(self, nu) -> complex:
        idx = tuple(int(n) + self.degree for n in np.atleast_1d(nu))
        if any(i < 0 or i > 2 * self.degree for i in idx):
            return 0j
        return complex(self.coeffs[idx])

    @property
    def mean(self) -> float:
        return self.coefficient((0,) * self.rank).real

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        flipped = np.conj(np.flip(self.coeffs))
        return bool(np.max(np.abs(self.coeffs - flipped)) <= tol)

    def __call__(self, x):
        return evaluate(self, x)

    def to_json(self, tol: float = 0.0) -> dict:
        out = []
        k = self.degree
        for idx in zip(*np.nonzero(np.abs(self.coeffs) > tol)):
            c = self.coeffs[idx]
            out.append([[int(i) - k for i in idx], float(c.real), float(c.imag)])
        return {"rank": self.rank, "degree": self.degree, "coeffs": out}

    @classmethod
    def from_json(cls, data: dict) -> "TrigPolynomial":
        r, k = data["rank"], data["degree"]
        dense = np.zeros((2 * k + 1,) * r, dtype=complex)
        for nu, re, im in data["coeffs"]:
            dense[tuple(n + k for n in nu)] = complex(re, im)
        return cls(r, k, dense)


def _eval_1d(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Values of sum_nu c_nu e(nu x) at each x (complex)."""
    k = (len(c) - 1) // 2
    nu = np.arange(-k, k + 1)
    out = np.empty(len(x), dtype=complex)
    for s in range(0, len(x), CHUNK):
        xs = x[s : s + CHUNK]
        out[s : s + CHUNK] = np.exp(2j * np.pi * np.outer(xs, nu)) @ c
    return out


def _eval_dense(P: TrigPolynomial, pts: np.ndarray) -> np.ndarray:
    k = P.degree
    nu = np.arange(-k, k + 1)
    out = np.empty(len(pts), dtype=complex)
    for s in range(0, len(pts), CHUNK):
        chunk = pts[s : s + CHUNK]
        acc = np.broadcast_to(P.coeffs, (len(chunk),) + P.coeffs.shape)
        # contract the last axis each round
        for i in range(P.rank - 1, -1, -1):
            E = np.exp(2j * np.pi * np.outer(chunk[:, i], nu))
            acc = np.einsum("n...j,nj->n...", acc, E)
        out[s : s + CHUNK] = acc
    return out


def evaluate(P: TrigPolynomial, x) -> float | np.ndarray:
    """Real value of P at one point of T^r or at each row of an (n, r) array."""
    pts = np.asarray(x, dtype=float)
    # a scalar, or a 1-D point when rank > 1; a 1-D array in rank 1 is many points
    single = pts.ndim == 0 or (pts.ndim == 1 and P.rank > 1)
    pts = pts.reshape(-1, P.rank)
    if P.terms is not None:
        vals = np.zeros(len(pts), dtype=complex)
        for w, factors in P.terms:
            prod = np.full(len(pts), w, dtype=complex)
            for i, f in enumerate(factors):
                prod *= _eval_1d(np.asarray(f), pts[:, i])
            vals += prod
    else:
        vals = _eval_dense(P, pts)
    scale = max(1.0, float(np.max(np.abs(vals.real)))) if len(vals) else 1.0
    resid = float(np.max(np.abs(vals.imag))) if len(vals) else 0.0
    assert resid <= IMAG_TOL * scale, f"imaginary residue {resid} exceeds tolerance"
    return float(vals.real[0]) if single else vals.real


def grid_values(P: TrigPolynomial, M: int = 2**16) -> np.ndarray:
    """Values of a rank-1 P at x = j/M, j < M, via FFT (M > 2 degree)."""
    if P.rank != 1:
        raise ValueError("grid evaluation is rank 1 only")
    k = P.degree
    if M <= 2 * k:
        raise ValueError("grid too coarse for the degree")
    buf = np.zeros(M, dtype=complex)
    nu = np.arange(-k, k + 1)
    buf[nu % M] = P.coeffs
    vals = np.fft.ifft(buf) * M
    assert np.max(np.abs(vals.imag)) <= IMAG_TOL * max(1.0, np.max(np.abs(vals.real)))
    return vals.real


def _exact_or_none(v):
    return v if isinstance(v, (int, Fraction)) else None


def _check_kappa(kappa):
    if isinstance(kappa, bool) or not isinstance(kappa, (int, np.integer)) or kappa < 1:
        raise ValueError(f"degree kappa must be a positive integer, got {kappa!r}")


def fejer_coeffs(kappa: int, shift: float = 0.0) -> np.ndarray:
    """Coefficients of the Fejer kernel F(x - shift) = sum (1 - |nu|/(kappa+1)) e(nu (x - shift))."""
    nu = np.arange(-kappa, kappa + 1)
    return (1 - np.abs(nu) / (kappa + 1)) * np.exp(-2j * np.pi * nu * shift)


def vaaler_coeffs(I: TorusInterval, kappa: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense rank-1 coefficient vectors (minorant, majorant)."""
    _check_kappa(kappa)
    a = float(I.a)
    if I.is_point:
        plus = 2 * fejer_coeffs(kappa, a) / (kappa + 1)
        return np.zeros_like(plus), plus
    if I.length == 1:
        # 1_T is constant: the constants 1 -+ 1/(kappa+1) keep the mean gap
        minus, plus = np.zeros(2 * kappa + 1, dtype=complex), np.zeros(2 * kappa + 1, dtype=complex)
        minus[kappa], plus[kappa] = 1 - 1 / (kappa + 1), 1 + 1 / (kappa + 1)
        return minus, plus
    L = float(I.length)
    b = a + L
    nu = np.arange(-kappa, kappa + 1)
    J, K = _transforms(nu.astype(float), kappa)
    ea, eb = np.exp(-2j * np.pi * nu * a), np.exp(-2j * np.pi * nu * b)
    fhat = np.empty(len(nu), dtype=complex)
    nz = nu != 0
    fhat[nz] = (ea[nz] - eb[nz]) / (2j * np.pi * nu[nz])
    fhat[~nz] = L
    drift = K * (ea + eb) / (2 * kappa + 2)
    return J * fhat - drift, J * fhat + drift


def _exact_means(I: TorusInterval, kappa: int):
    L = _exact_or_none(I.length)
    if L is None:
        return None, None
    if I.length == 0:
        return Fraction(0), Fraction(2, kappa + 1)
    L = Fraction(L)
    return L - Fraction(1, kappa + 1), L + Fraction(1, kappa + 1)


def vaaler_pair(I: TorusInterval, kappa: int) -> tuple[TrigPolynomial, TrigPolynomial]:
    """(P_minus, P_plus) of degree kappa with P_minus <= 1_I <= P_plus on T."""
    minus, plus = vaaler_coeffs(I, kappa)
    m_lo, m_hi = _exact_means(I, kappa)
    lo = TrigPolynomial(1, kappa, minus, [(1.0, [minus])], m_lo)
    hi = TrigPolynomial(1, kappa, plus, [(1.0, [plus])], m_hi)
    return lo, hi


@dataclass(frozen=True)
class TorusRectangle:
    intervals: tuple[TorusInterval, ...]

    def __post_init__(self):
        if not self.intervals:
            raise ValueError("a rectangle needs at least one interval")

    @classmethod
    def point(cls, x) -> "TorusRectangle":
        return cls(tuple(TorusInterval(xi, 0) for xi in x))

    @property
    def rank(self) -> int:
        return len(self.intervals)

    @property
    def is_point(self) -> bool:
        return all(I.is_point for I in self.intervals)

    def contains(self, pts, point_tol: float = 1e-12) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, self.rank)
        inside = np.ones(len(pts), dtype=bool)
        for i, I in enumerate(self.intervals):
            inside &= I.contains(pts[:, i], point_tol)
        return inside


def rect_pair(R: TorusRectangle, kappa: int) -> tuple[TrigPolynomial, TrigPolynomial]:
    """(minorant, majorant) of 1_R on T^r.

    The majorant is the product of one-dimensional majorants; the minorant is
    prod P_i+ - sum_i (P_i+ - P_i-) prod_{j != i} P_j+, or zero when a side
    is a single point.
    """
    r = R.rank
    pairs = [vaaler_coeffs(I, kappa) for I in R.intervals]
    means = [_exact_means(I, kappa) for I in R.intervals]
    plus = [p for _, p in pairs]
    major_terms = [(1.0, plus)]
    minor_terms = [(1.0, plus)]
    for i, (m, p) in enumerate(pairs):
        minor_terms.append((-1.0, plus[:i] + [p - m] + plus[i + 1 :]))

    exact_hi = exact_lo = None
    if all(lo is not None for lo, _ in means):
        his = [hi for _, hi in means]
        exact_hi = _prod(his)
        exact_lo = exact_hi - sum((hi - lo) * _prod(his[:i] + his[i + 1 :]) for i, (lo, hi) in enumerate(means))
    if any(I.is_point for I in R.intervals):
        # 1_R vanishes off a null set, so zero is a valid and tighter minorant
        minor_terms = [(0.0, [np.zeros(2 * kappa + 1, dtype=complex)] * r)]
        exact_lo = Fraction(0)
    major = TrigPolynomial.from_terms(r, kappa, major_terms, exact_hi)
    minor = TrigPolynomial.from_terms(r, kappa, minor_terms, exact_lo)
    return minor, major


def _prod(vals):
    out = Fraction(1)
    for v in vals:
        out *= v
    return out


def rect_gap_bound(R: TorusRectangle, kappa: int) -> float:
    """Closed-form bound prod(|I_i| + 2/(kappa+1)) - prod max(|I_i| - 2/(kappa+1), 0)."""
    d = 2 / (kappa + 1)
    up = np.prod([float(I.length) + d for I in R.intervals])
    down = np.prod([max(float(I.length) - d, 0.0) for I in R.intervals])
    return float(up - down)


def _group_elements(rank: int, group: str):
    if group not in GROUPS:
        raise ValueError(f"unknown group {group!r}; choose from {GROUPS}")
    perms = list(itertools.permutations(range(rank))) if group != "sign_flips" else [tuple(range(rank))]
    flips = list(itertools.product((False, True), repeat=rank)) if group != "permutations" else [(False,) * rank]
    return [(p, f) for p in perms for f in flips]


def group_order(rank: int, group: str) -> int:
    sizes = {"permutations": factorial(rank), "sign_flips": 2**rank, "signed_permutations": factorial(rank) * 2**rank}
    if group not in sizes:
        raise ValueError(f"unknown group {group!r}")
    return sizes[group]


def weyl_symmetrize(P: TrigPolynomial, group: str) -> TrigPolynomial:
    """Average of P over the action of ``group`` on the coordinates of T^r.

    A permutation s acts by nu -> s(nu); a sign flip negates coordinates.
    """
    elems = _group_elements(P.rank, group)
    n = len(elems)
    dense = np.zeros_like(P.coeffs)
    for perm, flip in elems:
        c = np.transpose(P.coeffs, perm)
        axes = tuple(i for i, f in enumerate(flip) if f)
        if axes:
            c = np.flip(c, axis=axes)
        dense += c
    dense /= n
    terms = None
    if P.terms is not None:
        terms = []
        for perm, flip in elems:
            for w, factors in P.terms:
                moved = [np.asarray(factors[j]) for j in perm]
                moved = [f[::-1] if fl else f for f, fl in zip(moved, flip)]
                terms.append((w / n, moved))
    return TrigPolynomial(P.rank, P.degree, dense, terms, P.exact_mean)


def coefficient_decay_constant(P: TrigPolynomial) -> float:
    """max over nu != 0 of |c_nu| * |nu| (|nu| the max-norm), rank 1 or any rank."""
    k = P.degree
    grids = np.meshgrid(*[np.arange(-k, k + 1)] * P.rank, indexing="ij")
    norm = np.max(np.abs(np.stack(grids)), axis=0)
    mask = norm > 0
    return float(np.max(np.abs(P.coeffs[mask]) * norm[mask]))


def samples_csv_rows(I: TorusInterval, kappa: int, n: int = 512):
    """Rows (x, P_minus(x), 1_I(x), P_plus(x)) on an n-point grid."""
    lo, hi = vaaler_pair(I, kappa)
    x = np.arange(n) / n
    return list(zip(x, lo(x), I.contains(x).astype(float), hi(x)))
