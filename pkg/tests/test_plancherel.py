import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fieldrat.plancherel import (
    DensitySpec,
    PiecewiseLinearDensity,
    SpectralFamily,
    estimate_measure,
    kappa_for_size,
    min_degree_for_count,
    replay_family,
    sample_family,
    serre_decay_experiment,
    sparse_fraction,
    trace_points,
)
from fieldrat.vaaler import TorusInterval, TorusRectangle, rect_pair

GRID4096 = SpectralFamily.from_points(np.arange(4096) / 4096)


# -- densities -----------------------------------------------------------------


def test_density_normalized_and_rejected():
    d = PiecewiseLinearDensity((0, 1), (2, 6))
    assert d.values == (0.5, 1.5)
    with pytest.raises(ValueError):
        PiecewiseLinearDensity((0, 1), (0, 0))
    with pytest.raises(ValueError):
        PiecewiseLinearDensity((0, 0.5), (1, 1))
    with pytest.raises(ValueError):
        PiecewiseLinearDensity((0, 1), (-1, 2))
    with pytest.raises(ValueError):
        DensitySpec.from_tables([[(0, 0), (0.5, 1), (1, 0)]], bounded_below=True)


def test_inverse_cdf_closed_form():
    # pdf (1 + 2x)/2, CDF (x + x^2)/2, inverse (-1 + sqrt(1 + 8u))/2
    d = PiecewiseLinearDensity((0, 1), (1, 3))
    u = np.linspace(0, 0.999, 500)
    assert np.allclose(d.inverse_cdf(u), (-1 + np.sqrt(1 + 8 * u)) / 2, atol=1e-12)


def test_inverse_cdf_with_zero_piece():
    # density vanishing on [0, 1/2): every sample lands in [1/2, 1)
    d = PiecewiseLinearDensity((0, 0.5, 1), (0, 0, 1))
    x = d.inverse_cdf(np.linspace(0, 1, 101))
    assert np.all(x >= 0.5) and np.all(x < 1)


def test_table_sampling_histogram():
    spec = DensitySpec.from_tables([[(0, 1), (0.5, 3), (1, 1)]])
    fam = sample_family(spec, 100_000, seed=5)
    counts, edges = np.histogram(fam.points[:, 0], bins=10, range=(0, 1))
    table = spec.tables[0]
    fine = np.linspace(0, 1, 100_001)
    pdf = table.pdf(fine)
    want = np.array([np.trapezoid(pdf[(fine >= a) & (fine <= b)], fine[(fine >= a) & (fine <= b)]) for a, b in zip(edges[:-1], edges[1:])])
    sigma = np.sqrt(want * (1 - want) / 100_000)
    assert np.all(np.abs(counts / 100_000 - want) < 5 * sigma)


def test_expectation_matches_quadrature():
    spec = DensitySpec.from_tables([[(0, 1), (0.3, 2), (1, 0.5)]])
    _, hi = rect_pair(TorusRectangle((TorusInterval(0.2, 0.3),)), 12)
    t = np.linspace(0, 1, 200_001)
    vals = hi(t) * spec.tables[0].pdf(t)
    assert spec.expectation(hi) == pytest.approx(np.trapezoid(vals, t), abs=1e-8)


def test_density_json_round_trip():
    spec = DensitySpec.from_tables([[(0, 1), (1, 3)], [(0, 2), (0.5, 1), (1, 2)]], bounded_below=True)
    back = DensitySpec.from_json(spec.to_json())
    assert back == spec
    assert DensitySpec.from_json(DensitySpec.lebesgue(2).to_json()) == DensitySpec.lebesgue(2)


# -- sampling -------------------------------------------------------------------


def test_sampling_deterministic():
    a = sample_family(DensitySpec.lebesgue(), 1000, 42)
    b = sample_family(DensitySpec.lebesgue(), 1000, 42)
    assert np.array_equal(a.points, b.points)
    c = sample_family(DensitySpec.lebesgue(), 1000, 43)
    assert not np.array_equal(a.points, c.points)


def test_sampling_prefix_stable_across_chunks():
    # chunk streams are keyed by (seed, chunk), so a longer sample extends a shorter one
    small = sample_family(DensitySpec.lebesgue(2), 70_000, 9)
    big = sample_family(DensitySpec.lebesgue(2), 140_000, 9)
    assert np.array_equal(small.points[:65536], big.points[:65536])


def test_uniform_mean():
    fam = sample_family(DensitySpec.lebesgue(), 100_000, 3)
    assert abs(fam.points[:, 0].mean() - 0.5) < 0.01


def test_single_point_sample():
    fam = sample_family(DensitySpec.lebesgue(3), 1, 0)
    assert fam.points.shape == (1, 3)
    assert np.all((fam.points >= 0) & (fam.points < 1))


def test_sample_errors():
    with pytest.raises(ValueError):
        sample_family(DensitySpec.lebesgue(), 0, 1)
    with pytest.raises(ValueError):
        SpectralFamily.from_points([0.1, 0.2], weights=[0, 0])


def test_replay_snapshot():
    spec = DensitySpec.from_tables([[(0, 1), (1, 3)]])
    fam = sample_family(spec, 500, 11)
    assert np.array_equal(replay_family(fam.snapshot()).points, fam.points)


# -- estimates ------------------------------------------------------------------


def test_estimate_grid_quarter():
    est = estimate_measure(GRID4096, TorusRectangle((TorusInterval.from_endpoints(0, 0.25),)), 64)
    assert est.exact == 0.25
    assert est.upper - est.exact <= 2 / 65 + 1e-6
    assert est.sandwich_holds()


def test_estimate_full_torus():
    fam = sample_family(DensitySpec.lebesgue(), 3000, 1)
    for kappa in (1, 7, 30):
        est = estimate_measure(fam, TorusRectangle((TorusInterval.from_endpoints(0, 1),)), kappa)
        assert est.exact == 1
        # the majorant of the constant 1 is the constant 1 + 1/(kappa+1)
        assert abs(est.upper - (1 + 1 / (kappa + 1))) < 1e-9


def test_estimate_empty_interval():
    est = estimate_measure(GRID4096, TorusRectangle((TorusInterval(0.123456, 0),)), 9)
    assert est.exact == 0
    assert est.upper <= 0.2 + 1e-6


@settings(max_examples=25, deadline=None)
@given(
    st.integers(1, 2),
    st.lists(st.tuples(st.floats(0, 0.99), st.floats(0, 1)), min_size=2, max_size=2),
    st.integers(1, 20),
    st.integers(0, 1000),
)
def test_sandwich_invariance(rank, sides, kappa, seed):
    fam = sample_family(DensitySpec.lebesgue(rank), 2000, seed)
    R = TorusRectangle(tuple(TorusInterval(a, l) for a, l in sides[:rank]))
    assert estimate_measure(fam, R, kappa).sandwich_holds()


def test_sparse_examples():
    s = sparse_fraction(GRID4096, [0.5], 64)
    assert s.exact == 1 / 4096
    assert s.upper <= 2 / 65 + 1e-6
    fam = SpectralFamily.from_points([[0.25], [0.75], [0.25]])
    assert sparse_fraction(fam, [0.25, 0.75], 5).exact == 1
    fam2 = sample_family(DensitySpec.lebesgue(2), 2000, 4)
    s = sparse_fraction(fam2, [(0.1, 0.1), (0.5, 0.5)], 9)
    assert s.exact == 0
    assert s.main_term == pytest.approx(2 * 0.04, abs=1e-12)
    assert s.ceiling == pytest.approx(s.main_term + s.deviation)


def test_sparse_weighted_family():
    fam = SpectralFamily.from_points([[0.5], [0.1]], weights=[3, 1])
    assert sparse_fraction(fam, [0.5], 4).exact == 0.75


@pytest.mark.parametrize("rank", [1, 2])
def test_decay_slope(rank):
    fam = sample_family(DensitySpec.lebesgue(rank), 100_000, 2024)
    rng = np.random.default_rng(rank)
    Z = [tuple(rng.random(rank)) for _ in range(5)]
    kappas = [8, 16, 32, 64]
    ceil = [sparse_fraction(fam, Z, k).ceiling for k in kappas]
    slope = np.polyfit(np.log(kappas), np.log(ceil), 1)[0]
    assert abs(slope + rank) <= 0.2


# -- experiment -----------------------------------------------------------------


def test_trace_points_q2():
    pts = trace_points(2, 2, 1)
    assert len(pts) == 5
    for p in pts:
        assert 0 <= p <= 0.5
    assert sorted(pts)[2] == pytest.approx(0.25)


def test_serre_experiment_decreasing_and_deterministic():
    sizes = [100, 1000, 10_000]
    rows = serre_decay_experiment(2, 2, 1, sizes, seed=7)
    ups = [r["upper"] for r in rows]
    assert all(b < a for a, b in zip(ups, ups[1:]))
    assert [r["kappa"] for r in rows] == [kappa_for_size(s) for s in sizes]
    assert rows == serre_decay_experiment(2, 2, 1, sizes, seed=7)
    with pytest.raises(ValueError):
        serre_decay_experiment(2, 2, 1, [100, 10], seed=1)


def test_serre_experiment_empty_set(monkeypatch):
    import fieldrat.plancherel as pl

    monkeypatch.setattr(pl, "trace_points", lambda q, k, A: [])
    rows = pl.serre_decay_experiment(2, 2, 1, [100, 200], seed=1)
    assert all(r["exact"] == 0 and r["upper"] == 0 for r in rows)


def test_kappa_rule():
    assert kappa_for_size(100) == math.ceil(math.log(100)) == 5
    assert kappa_for_size(1) == 1


def test_min_degree_examples():
    assert min_degree_for_count(2, 1) == 2
    assert min_degree_for_count(4, 1) == 1
    assert min_degree_for_count(2, 6) == 2
    assert min_degree_for_count(2, 10**9, cap=3) is None
