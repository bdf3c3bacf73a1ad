import numpy as np
import pytest

import oracles
from conftest import TOY_D, TOY_T
from exposure_hawkes import Bandwidths, CountSeries, GroundTruth, PairCounts, simulate
from exposure_hawkes.bandwidth import (
    BandwidthGrid,
    _leave_day_out,
    best_from_table,
    cv_score,
    cv_table,
    select_bandwidths,
)
from exposure_hawkes.estimation import LocalLinearSmoother, estimate_full_info, interior_mask


@pytest.mark.parametrize("b1,b2,burn_in", [(0.3, 1.5, 0), (0.5, 2.0, 0), (0.4, 2.0, 2)])
def test_leave_day_out_matches_oracle(toy, b1, b2, burn_in):
    c, pairs, pd = toy
    sm = LocalLinearSmoother(c, Bandwidths(b1, b2), TOY_D, burn_in=burn_in)
    got = _leave_day_out(sm, pairs.counts)
    want = oracles.leave_day_out(pd, c, TOY_T, TOY_D, b1, b2, burn_in=burn_in)
    assert np.max(np.abs(got[burn_in:] - want[burn_in:])) < 1e-10


@pytest.mark.parametrize("b1,b2", [(0.3, 1.5), (0.5, 3.0)])
def test_cv_score_matches_oracle(toy, b1, b2):
    c, pairs, pd = toy
    got = cv_score(c, c, pairs, Bandwidths(b1, b2), TOY_D)
    assert got == pytest.approx(oracles.cv_score(pd, c, TOY_T, TOY_D, b1, b2), rel=1e-10, abs=1e-12)


def test_zero_pairs_zero_score(toy):
    c, _, _ = toy
    assert cv_score(c, c, PairCounts.zeros(TOY_T, TOY_D), Bandwidths(0.3, 1.5), TOY_D) == 0.0


def test_grid_validation():
    with pytest.raises(ValueError):
        BandwidthGrid((), (1.0,))
    with pytest.raises(ValueError):
        BandwidthGrid((0.2, 0.1), (1.0,))
    with pytest.raises(ValueError):
        BandwidthGrid((0.1, 1.5), (1.0,))
    with pytest.raises(ValueError):
        BandwidthGrid((0.1,), (0.0, 1.0))


def test_cells_respect_support():
    grid = BandwidthGrid((0.1, 0.2), (2.0, 5.0, 20.0))
    assert len(grid.cells(14)) == 4
    with pytest.raises(ValueError):
        cv_table(np.ones(20), np.ones(20), BandwidthGrid((0.1,), (9.0,)), 3)


def test_single_cell_grid(critical_sim):
    s = critical_sim
    bw = select_bandwidths(
        s.infections, s.infections, BandwidthGrid((0.2,), (5.0,)), 14, mode="full-info", pairs=s.pair_counts1
    )
    assert bw == Bandwidths(0.2, 5.0)


def test_ties_prefer_smoother():
    table = [(0.1, 2.0, -1.0), (0.2, 2.0, -1.0), (0.2, 3.0, -1.0), (0.05, 5.0, -0.5)]
    assert best_from_table(table) == Bandwidths(0.2, 3.0)


def test_full_info_needs_pairs():
    with pytest.raises(ValueError):
        cv_table(np.ones(20), np.ones(20), BandwidthGrid(), 14, mode="full-info")
    with pytest.raises(ValueError):
        cv_table(np.ones(20), np.ones(20), BandwidthGrid(), 14, mode="bogus")


def test_dates_do_not_matter(critical_sim):
    s = critical_sim
    c = s.infections.counts
    a = CountSeries(s.infections.start_date, c)
    b = CountSeries(s.infections.start_date.replace(year=2021), c)
    grid = BandwidthGrid((0.1, 0.2), (3.0, 5.0))
    ta = cv_table(a, a, grid, 14, mode="full-info", pairs=s.pair_counts1)
    tb = cv_table(b, b, grid, 14, mode="full-info", pairs=s.pair_counts1)
    assert ta == tb


def test_threads_deterministic(critical_sim):
    s = critical_sim
    grid = BandwidthGrid((0.1, 0.2, 0.3), (3.0, 5.0, 7.0))
    kw = dict(mode="full-info", pairs=s.pair_counts1)
    t1 = cv_table(s.infections, s.infections, grid, 14, threads=1, **kw)
    t4 = cv_table(s.infections, s.infections, grid, 14, threads=4, **kw)
    assert t1 == t4
    assert cv_table(s.infections, s.infections, grid, 14, threads=4, **kw) == t4


def test_missing_link_fast_runs(critical_sim):
    s = critical_sim
    grid = BandwidthGrid((0.2, 0.3), (5.0, 10.0))
    table = cv_table(s.infections, s.infections, grid, 14, fast=True, threads=1)
    assert len(table) == 4 and all(np.isfinite(q) for _, _, q in table)


def _wave_truth():
    T, D = 300, 14
    w = np.arange(1, D + 1)
    g = w**1.5 * np.exp(-w / 2.5)
    g /= g.sum()
    x = np.arange(1, T + 1) / T
    mu = (1.0 + 0.3 * np.sin(4 * np.pi * x))[:, None] * g[None, :]
    rho = np.zeros(T)
    rho[:D] = 1.0
    return GroundTruth(mu, rho, n_scale=30.0, name="wave")


@pytest.fixture(scope="module")
def wave_cv():
    gt = _wave_truth()
    sim = simulate(gt, 0)
    grid = BandwidthGrid((0.02, 0.04, 0.06, 0.1, 0.15, 0.2), (0.75, 1.0, 1.5, 2.0, 3.0, 4.0))
    best, table = select_bandwidths(
        sim.infections, sim.infections, grid, 14, mode="full-info", pairs=sim.pair_counts1, return_table=True
    )
    mask = interior_mask(gt.T, 14)
    mise = {}
    for b1, b2, _ in table:
        s = estimate_full_info(sim.pair_counts1, sim.infections, Bandwidths(b1, b2))
        mise[(b1, b2)] = float(np.mean((s.values - gt.mu1)[mask] ** 2))
    return gt, sim, grid, best, table, mise


@pytest.mark.slow
def test_selection_strictly_inside_bracketing_grid(wave_cv):
    _, _, grid, best, _, _ = wave_cv
    assert grid.b1_candidates[0] < best.b1 < grid.b1_candidates[-1]
    assert grid.b2_candidates[0] < best.b2 < grid.b2_candidates[-1]


@pytest.mark.slow
def test_selected_mise_near_grid_minimum(wave_cv):
    _, _, _, best, _, mise = wave_cv
    assert mise[(best.b1, best.b2)] <= 2.0 * min(mise.values())


@pytest.mark.slow
def test_oversmoothing_scores_worse(wave_cv):
    _, sim, _, best, table, _ = wave_cv
    q_best = min(q for _, _, q in table)
    q_over = cv_score(sim.infections, sim.infections, sim.pair_counts1, Bandwidths(1.0, 14.0), 14)
    assert q_over >= q_best
