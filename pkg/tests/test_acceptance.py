"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from fieldrat import weil
from fieldrat.conductor import LocalFieldParams, cyclotomic_ratio, depth_bound_v1, lcm_phi_le
from fieldrat.genus import AngleSet, dejong_genus_bound, fermat_data, madan_madden_min_exponent, max_genus_lp, point_count
from fieldrat.plancherel import DensitySpec, sample_family, serre_decay_experiment, sparse_fraction
from fieldrat.polynomial import IntPolynomial
from fieldrat.vaaler import TorusInterval, TorusRectangle, coefficient_decay_constant, grid_values, rect_pair, vaaler_pair
from fieldrat.weil import WeilParams, count_weil_integers, enumerate_weil_polynomials, is_weil_polynomial
from oracles import circle_box_oracle, circle_reduced_oracle

P = IntPolynomial.from_high


@pytest.fixture
def report(capsys):
    @contextmanager
    def _report(n, title):
        notes = []
        t0 = time.perf_counter()
        try:
            yield notes
        except BaseException:
            with capsys.disabled():
                print(f"\nCRITERION {n} FAIL  {title}  ({time.perf_counter() - t0:.2f}s) {'; '.join(notes)}")
            raise
        with capsys.disabled():
            print(f"\nCRITERION {n} PASS  {title}  ({time.perf_counter() - t0:.2f}s) {'; '.join(notes)}")

    return _report


def clear_caches():
    weil._ALL_CACHE.clear()
    weil._enumerate_irreducible.cache_clear()


def test_criterion_01_weil_enumeration(report):
    with report(1, "Weil enumeration q=2 w=1 m=2") as notes:
        clear_caches()
        t0 = time.perf_counter()
        got = enumerate_weil_polynomials(WeilParams(2, 1), 2)
        elapsed = time.perf_counter() - t0
        want = {P(1, -a, 2) for a in range(-2, 3)} | {P(1, 0, -2)}
        oracle = {p for p in circle_box_oracle(2, 2) if is_weil_polynomial(p, 2)}
        notes.append(f"{len(got)} polynomials, enumeration {elapsed:.3f}s")
        assert len(got) == 6 and set(got) == want == oracle
        assert elapsed < 1


def test_criterion_02_oracle_sweep(report):
    with report(2, "oracle sweep N<=16, m<=4") as notes:
        clear_caches()
        t0 = time.perf_counter()
        pairs = 0
        for N in range(1, 17):
            for m in range(1, 5):
                exact = set(enumerate_weil_polynomials(N, m))
                # float pre-filter at 1e-6, exact certification of the survivors
                oracle = {p for p in circle_reduced_oracle(N, m) if is_weil_polynomial(p, N)}
                assert exact == oracle, (N, m)
                pairs += 1
        elapsed = time.perf_counter() - t0
        notes.append(f"{pairs} (N, m) pairs agree in {elapsed:.1f}s")
        assert elapsed < 60


def test_criterion_03_vaaler_identities(report):
    with report(3, "Vaaler sandwich, gap and decay") as notes:
        rng = np.random.default_rng(20240)
        grid = np.arange(2**16) / 2**16
        worst_gap = worst_sandwich = worst_C = 0.0
        for kappa in (4, 16, 64, 256):
            for a, length in zip(rng.random(200), rng.random(200)):
                I = TorusInterval(float(a), float(length))
                lo, hi = vaaler_pair(I, kappa)
                ind = I.contains(grid)
                worst_gap = max(worst_gap, abs(hi.mean - lo.mean - 2 / (kappa + 1)))
                worst_sandwich = max(
                    worst_sandwich, float(np.max(ind - grid_values(hi))), float(np.max(grid_values(lo) - ind))
                )
                worst_C = max(worst_C, coefficient_decay_constant(hi), coefficient_decay_constant(lo))
        notes.append(f"max gap error {worst_gap:.1e}, max sandwich violation {worst_sandwich:.1e}, C = {worst_C:.4f}")
        assert worst_gap <= 1e-12
        assert worst_sandwich <= 1e-9
        assert worst_C <= 2


def test_criterion_04_small_ball_rate(report):
    with report(4, "point majorant scaling and decay slope") as notes:
        rng = np.random.default_rng(4)
        for r in (1, 2, 3):
            for kappa in range(1, 65):
                _, major = rect_pair(TorusRectangle.point(tuple(rng.random(r))), kappa)
                assert major.exact_mean * (kappa + 1) ** r == 2**r
        kappas = [8, 16, 32, 64]
        for r in (1, 2):
            fam = sample_family(DensitySpec.lebesgue(r), 100_000, seed=100 + r)
            Z = [tuple(rng.random(r)) for _ in range(5)]
            ceil = [sparse_fraction(fam, Z, k).ceiling for k in kappas]
            slope = np.polyfit(np.log(kappas), np.log(ceil), 1)[0]
            notes.append(f"rank {r} slope {slope:.3f}")
            assert abs(slope + r) <= 0.2


def test_criterion_05_serre_decay(report):
    with report(5, "Serre decay experiment q=2 k=2 A=1") as notes:
        sizes = [100, 1000, 10_000, 100_000]
        rows = serre_decay_experiment(2, 2, 1, sizes, seed=5)
        ups = [r["upper"] for r in rows]
        notes.append("upper " + ", ".join(f"{u:.4f}" for u in ups))
        assert all(b < a for a, b in zip(ups, ups[1:]))
        assert all(r["upper"] < 10 * 2 / (r["kappa"] + 1) for r in rows)
        assert serre_decay_experiment(2, 2, 1, sizes, seed=5) == rows


def test_criterion_06_genus_lp(report):
    with report(6, "genus LP exact values") as notes:
        half = AngleSet.from_pi_multiples([Fraction(1, 2)])
        pi = AngleSet.from_pi_multiples([1])
        a = max_genus_lp(3, half, 4, mode="exact")
        b = max_genus_lp(2, pi, 4, mode="exact")
        notes.append(f"{a.optimum}, {b.optimum}")
        assert a.optimum == Fraction(41, 9) and b.optimum == Fraction(5, 4)
        for q, S, res in ((3, half, a), (2, pi, b)):
            T = AngleSet(S.angles, S.pi_multiples, tuple(res.multiplicities))
            assert all(point_count(q, n, T) >= 0 for n in range(1, res.n_max + 1))


def test_criterion_07_fermat(report):
    with report(7, "Fermat curves against the LP") as notes:
        half = AngleSet.from_pi_multiples([Fraction(1, 2)])
        for p in (2, 3, 5):
            f = fermat_data(p)
            bound = max_genus_lp(p, half, 8).optimum
            notes.append(f"p={p} g={f.genus} lp={bound}")
            assert f.genus == p * (p - 1) // 2
            assert f.genus <= bound
            assert f.point_count == 1 + p**2 + 2 * f.genus * p


def test_criterion_08_dejong(report):
    with report(8, "de Jong pipeline q=2 d=1") as notes:
        rec = dejong_genus_bound(2, 1)
        g = rec.genus_bound
        notes.append(f"P1_product {rec.P1_product}, genus bound {g}")
        assert rec.P1_product == 120 and all(v != 0 for v in rec.factors)
        assert not rec.capped
        assert madan_madden_min_exponent(g) <= 120 < madan_madden_min_exponent(g + 1)


def test_criterion_09_bound_calculators(report):
    with report(9, "bound calculators") as notes:
        times = []
        t0 = time.perf_counter()
        assert depth_bound_v1(1, 1, LocalFieldParams(5, e_K=1)).depth == Fraction(1, 2)
        times.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        assert lcm_phi_le(2) == 12
        times.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        assert all(cyclotomic_ratio(n, N).ratio <= n**n for n in range(1, 6) for N in range(1, 10**4 + 1))
        times.append(time.perf_counter() - t0)
        notes.append("check times " + ", ".join(f"{t:.3f}s" for t in times))
        assert all(t < 5 for t in times)


def test_criterion_10_count_growth(report):
    with report(10, "Weil integer count growth") as notes:
        ratios = {}
        for q in (2, 3):
            cum = count_weil_integers(q, 1, 6).cumulative
            notes.append(f"q={q} counts {[cum[d] for d in range(1, 7)]}")
            for d in range(1, 7):
                if cum[d]:
                    ratios[q, d] = math.log(cum[d]) / (d * d * math.log(q))
        C = max(ratios.values())
        notes.append(f"fitted C = {C:.4f}")
        for (q, d), ratio in ratios.items():
            assert ratio <= C
        cum2, cum3 = count_weil_integers(2, 1, 6).cumulative, count_weil_integers(3, 1, 6).cumulative
        for q, cum in ((2, cum2), (3, cum3)):
            for d in range(1, 7):
                assert cum[d] == 0 or math.log(cum[d]) <= C * d * d * math.log(q) + 1e-12
