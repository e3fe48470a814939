"""Seeded families of points on T^r standing in for unramified spectral
parameters, and the small-ball estimates that bound how much of a family can
sit on a finite set.

A family is an i.i.d. sample from an absolutely continuous density (Lebesgue by
default, or a product of piecewise-linear tables).  The mass of a finite set Z
is bounded by averaging the point majorants of each z over the family; their
means are (2/(kappa+1))**r, so the bound decays like kappa**(-r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .vaaler import TorusRectangle, TrigPolynomial, rect_pair
from .weil import WeilParams, enumerate_weil_polynomials, hecke_trace_candidates

CHUNK = 65536
POINT_TOL = 1e-12
SANDWICH_EPS = 1e-9


# -- densities -----------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinearDensity:
    """Density on [0, 1) linear between knots, normalized at construction."""

    knots: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        x = np.asarray(self.knots, dtype=float)
        y = np.asarray(self.values, dtype=float)
        if len(x) < 2 or len(x) != len(y):
            raise ValueError("need at least two knots with one value each")
        if x[0] != 0 or x[-1] != 1 or np.any(np.diff(x) <= 0):
            raise ValueError("knots must increase strictly from 0 to 1")
        if np.any(y < 0):
            raise ValueError("density values must be nonnegative")
        total = float(np.sum(np.diff(x) * (y[:-1] + y[1:]) / 2))
        if not total > 0:
            raise ValueError("density is not normalizable (zero total mass)")
        object.__setattr__(self, "values", tuple(float(v) for v in y / total))
        object.__setattr__(self, "knots", tuple(float(v) for v in x))

    def pdf(self, t):
        return np.interp(t, self.knots, self.values)

    def _cdf_knots(self) -> np.ndarray:
        x, y = np.asarray(self.knots), np.asarray(self.values)
        return np.concatenate([[0.0], np.cumsum(np.diff(x) * (y[:-1] + y[1:]) / 2)])

    def inverse_cdf(self, u: np.ndarray) -> np.ndarray:
        """Exact inverse: on each piece the CDF is quadratic in the offset."""
        x, y = np.asarray(self.knots), np.asarray(self.values)
        F = self._cdf_knots()
        u = np.clip(np.asarray(u, dtype=float) * F[-1], 0, F[-1])
        i = np.clip(np.searchsorted(F, u, side="right") - 1, 0, len(x) - 2)
        h = x[i + 1] - x[i]
        y0 = y[i]
        slope = (y[i + 1] - y0) / h
        r = u - F[i]
        # solve y0 s + slope s^2 / 2 = r for s in [0, h]; stable root form
        disc = np.sqrt(np.maximum(y0 * y0 + 2 * slope * r, 0.0))
        denom = y0 + disc
        s = np.where(denom > 0, 2 * r / np.where(denom > 0, denom, 1.0), 0.0)
        return np.clip(x[i] + np.minimum(s, h), 0.0, np.nextafter(1.0, 0.0))

    def integrate_trig(self, coeffs: np.ndarray) -> complex:
        """Integral of sum_nu c_nu e(nu t) against this density (Gauss-Legendre)."""
        k = (len(coeffs) - 1) // 2
        nodes, weights = np.polynomial.legendre.leggauss(8)
        x = np.asarray(self.knots)
        pts, wts = [], []
        for lo, hi in zip(x[:-1], x[1:]):
            pieces = max(1, math.ceil((hi - lo) * 4 * (k + 1)))
            edges = np.linspace(lo, hi, pieces + 1)
            for a, b in zip(edges[:-1], edges[1:]):
                pts.append((b - a) / 2 * nodes + (a + b) / 2)
                wts.append((b - a) / 2 * weights)
        t = np.concatenate(pts)
        w = np.concatenate(wts) * self.pdf(t)
        nu = np.arange(-k, k + 1)
        return complex(np.sum(w * (np.exp(2j * np.pi * np.outer(t, nu)) @ coeffs)))

    def to_json(self) -> dict:
        return {"knots": list(self.knots), "values": list(self.values)}


@dataclass(frozen=True)
class DensitySpec:
    """``lebesgue`` on T^r, or a product of one-dimensional tables."""

    rank: int
    tables: tuple[PiecewiseLinearDensity, ...] | None = None
    bounded_below: bool = False

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.tables is not None:
            if len(self.tables) != self.rank:
                raise ValueError("need one table per coordinate")
            if self.bounded_below and any(min(t.values) <= 0 for t in self.tables):
                raise ValueError("density flagged bounded below but vanishes somewhere")

    @classmethod
    def lebesgue(cls, rank: int = 1) -> "DensitySpec":
        return cls(rank)

    @classmethod
    def from_tables(cls, tables, bounded_below: bool = False) -> "DensitySpec":
        dens = tuple(t if isinstance(t, PiecewiseLinearDensity) else PiecewiseLinearDensity(*zip(*t)) for t in tables)
        return cls(len(dens), dens, bounded_below)

    @property
    def tag(self) -> str:
        return "lebesgue" if self.tables is None else "product"

    def transform(self, u: np.ndarray) -> np.ndarray:
        if self.tables is None:
            return u
        return np.column_stack([t.inverse_cdf(u[:, i]) for i, t in enumerate(self.tables)])

    def expectation(self, P: TrigPolynomial) -> float:
        """Integral of P against the density."""
        if self.tables is None:
            return P.mean
        if P.terms is None:
            raise ValueError("density expectation needs a polynomial in product form")
        total = 0j
        for w, factors in P.terms:
            prod = complex(w)
            for t, f in zip(self.tables, factors):
                prod *= t.integrate_trig(np.asarray(f))
            total += prod
        return total.real

    def to_json(self) -> dict:
        out = {"tag": self.tag, "rank": self.rank, "bounded_below": self.bounded_below}
        if self.tables is not None:
            out["tables"] = [t.to_json() for t in self.tables]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DensitySpec":
        if data.get("tag", "lebesgue") == "lebesgue":
            return cls.lebesgue(data["rank"])
        tables = [PiecewiseLinearDensity(tuple(t["knots"]), tuple(t["values"])) for t in data["tables"]]
        return cls(data["rank"], tuple(tables), data.get("bounded_below", False))


# -- families -------------------------------------------------------------------


@dataclass
class SpectralFamily:
    points: np.ndarray
    weights: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim == 1:
            self.points = self.points.reshape(-1, 1)
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights differ in length")
        if np.any(self.weights < 0) or not self.weights.sum() > 0:
            raise ValueError("weights must be nonnegative with positive total")

    @classmethod
    def from_points(cls, points, weights=None, **meta) -> "SpectralFamily":
        pts = np.asarray(points, dtype=float)
        w = np.ones(len(pts)) if weights is None else weights
        return cls(pts, w, dict(meta))

    @property
    def rank(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return len(self.points)

    def average(self, values: np.ndarray) -> float:
        return math.fsum(self.weights * values) / math.fsum(self.weights)

    def snapshot(self) -> dict:
        """Replay record: the seed and density regenerate the points."""
        return dict(self.meta)


def sample_family(density: DensitySpec, size: int, seed: int) -> SpectralFamily:
    """``size`` i.i.d. points from ``density``.

    Uniforms come in fixed chunks; chunk ``j`` uses a Philox stream keyed by
    (seed, j), so the result does not depend on how chunks are scheduled.
    """
    if isinstance(size, bool) or not isinstance(size, (int, np.integer)) or size < 1:
        raise ValueError(f"size must be >= 1, got {size!r}")
    parts = []
    for j, start in enumerate(range(0, size, CHUNK)):
        n = min(CHUNK, size - start)
        gen = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, j])))
        parts.append(gen.random((n, density.rank)))
    u = np.concatenate(parts)
    meta = {"seed": seed, "size": size, "density": density.to_json()}
    return SpectralFamily(density.transform(u), np.ones(size), meta)


def replay_family(snapshot: dict) -> SpectralFamily:
    return sample_family(DensitySpec.from_json(snapshot["density"]), snapshot["size"], snapshot["seed"])


# -- estimates ------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureEstimate:
    lower: float
    upper: float
    exact: float

    def sandwich_holds(self, eps: float = SANDWICH_EPS) -> bool:
        return self.lower - eps <= self.exact <= self.upper + eps


def estimate_measure(family: SpectralFamily, R: TorusRectangle, kappa: int) -> MeasureEstimate:
    """Family mass of R, with family averages of its minorant and majorant."""
    if R.rank != family.rank:
        raise ValueError("rectangle rank differs from family rank")
    lo, hi = rect_pair(R, kappa)
    exact = family.average(R.contains(family.points, POINT_TOL).astype(float))
    return MeasureEstimate(family.average(lo(family.points)), family.average(hi(family.points)), exact)


@dataclass(frozen=True)
class SparseFraction:
    exact: float
    lower: float
    upper: float
    ceiling: float
    main_term: float
    deviation: float


def _on_point(points: np.ndarray, z) -> np.ndarray:
    d = np.mod(points - np.asarray(z, dtype=float), 1.0)
    return np.all(np.minimum(d, 1 - d) <= POINT_TOL, axis=1)


def sparse_fraction(
    family: SpectralFamily, Z, kappa: int, density: DensitySpec | None = None
) -> SparseFraction:
    """Mass of the finite set Z and its majorant bound.

    ``upper`` sums the family averages of the point majorants.  ``ceiling``
    is the expected value of that sum under ``density`` plus the observed
    sampling deviation, i.e. |Z| (2/(kappa+1))**r + deviation for Lebesgue.
    """
    Z = [tuple(np.atleast_1d(z)) for z in Z]
    if any(len(z) != family.rank for z in Z):
        raise ValueError("points of Z must match the family rank")
    density = density or DensitySpec.lebesgue(family.rank)
    hit = np.zeros(family.size, dtype=bool)
    uppers, mains, devs = [], [], []
    for z in Z:
        hit |= _on_point(family.points, z)
        _, hi = rect_pair(TorusRectangle.point(z), kappa)
        avg = family.average(hi(family.points))
        expected = density.expectation(hi)
        uppers.append(avg)
        mains.append(expected)
        devs.append(abs(avg - expected))
    main, dev = math.fsum(mains), math.fsum(devs)
    exact = family.average(hit.astype(float))
    return SparseFraction(exact, 0.0, math.fsum(uppers), main + dev, main, dev)


def kappa_for_size(size: int) -> int:
    return max(1, math.ceil(math.log(size)))


def trace_points(q: int, k: int, A: int) -> list[float]:
    """Torus points arccos(t / (2 q**((k-1)/2))) / (2 pi) for integer trace candidates t."""
    scale = 2 * q ** ((k - 1) / 2)
    pts = []
    for h in hecke_trace_candidates(q, k, A):
        if h.degree != 1:
            continue
        t = -h.coeffs[0]
        c = min(1.0, max(-1.0, t / scale))
        pts.append(math.acos(c) / (2 * math.pi))
    return pts


def serre_decay_experiment(
    q: int, k: int, A: int, sizes, seed: int, density: DensitySpec | None = None
) -> list[dict]:
    """Bounds on the fraction of a family lying on the admissible trace set.

    Only rational-integer traces give single torus points; higher-degree
    candidates are ignored here.
    """
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    density = density or DensitySpec.lebesgue(1)
    Z = [(z,) for z in trace_points(q, k, A)]
    rows = []
    for size in sizes:
        kappa = kappa_for_size(size)
        family = sample_family(density, size, seed)
        if Z:
            s = sparse_fraction(family, Z, kappa, density)
            row = {"size": size, "kappa": kappa, "exact": s.exact, "lower": s.lower, "upper": s.upper, "ceiling": s.ceiling}
        else:
            row = {"size": size, "kappa": kappa, "exact": 0.0, "lower": 0.0, "upper": 0.0, "ceiling": 0.0}
        rows.append(row)
    return rows


def min_degree_for_count(q: int, M: int, cap: int = 6) -> int | None:
    """Smallest d with at least M weight-one q-Weil integers of degree <= d; None past ``cap``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    params = WeilParams(q, 1)
    total = 0
    for d in range(1, cap + 1):
        total += len(enumerate_weil_polynomials(params, d, irreducible_only=True))
        if total >= M:
            return d
    return None
