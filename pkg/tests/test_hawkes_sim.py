import numpy as np
import pytest

import oracles
from exposure_hawkes.errors import ExplosionError
from exposure_hawkes.hawkes_sim import (
    SCENARIOS,
    GroundTruth,
    expected_hospitalizations,
    expected_intensity,
    hospitalization_rates,
    rho_from_history,
    simulate,
    simulate_paths,
    stationary_subcritical,
)


def test_no_sources_no_events():
    gt = GroundTruth(np.zeros((50, 5)), np.zeros(50))
    sim = simulate(gt, 0)
    assert sim.infections.total() == 0
    assert sim.pair_counts1.total() == 0


def test_pure_immigration_mean():
    rho = np.zeros(20)
    rho[:5] = 2.0
    gt = GroundTruth(np.zeros((20, 3)), rho)
    inf, _ = simulate_paths(gt, 1000, seed=5)
    m = inf.mean(axis=0)
    se = inf.std(axis=0, ddof=1) / np.sqrt(1000)
    assert np.all(np.abs(m[:5] - 2.0) <= 3 * se[:5])
    assert not inf[:, 5:].any()


def test_seed_determinism():
    gt = stationary_subcritical(n_scale=50)
    a = simulate(gt, 11)
    b = simulate(gt, 11)
    assert np.array_equal(a.infections.counts, b.infections.counts)
    assert np.array_equal(a.pair_counts1.counts, b.pair_counts1.counts)
    assert np.array_equal(a.hospitalizations.counts, b.hospitalizations.counts)
    c = simulate(gt, 12)
    assert not np.array_equal(a.infections.counts, c.infections.counts)


@pytest.mark.parametrize("seed", range(5))
def test_accounting_identity(seed):
    gt = SCENARIOS["lockdown-drop"]()
    sim = simulate(gt, seed)
    inf = sim.infections.counts
    assert np.array_equal(inf, sim.immigrant_counts + sim.pair_counts1.per_offspring_day().astype(np.int64))
    hosp = sim.hospitalizations.counts
    assert np.array_equal(hosp, sim.hosp_immigrant_counts + sim.pair_counts2.per_offspring_day().astype(np.int64))
    # no pair violates the support cutoffs
    assert sim.pair_counts1.D == gt.D1
    assert sim.pair_counts2.D == gt.D2


def test_explosion_guard():
    gt = GroundTruth(np.full((200, 5), 1.0), np.r_[np.ones(5), np.zeros(195)], n_scale=100)
    with pytest.raises(ExplosionError, match="day"):
        simulate(gt, 0, cap=1e6)
    with pytest.raises(ExplosionError):
        simulate_paths(gt, 3, 0, cap=1e6)


def test_ground_truth_validation():
    with pytest.raises(ValueError):
        GroundTruth(-np.ones((5, 2)), np.zeros(5))
    with pytest.raises(ValueError):
        GroundTruth(np.ones((5, 2)), np.zeros(4))


def test_from_functions():
    gt = GroundTruth.from_functions(lambda x, w: 0.1 * x + 0 * w, 3, 10, np.r_[1.0, np.zeros(9)])
    assert gt.mu1.shape == (10, 3)
    assert gt.mu1[9, 0] == pytest.approx(0.1)
    assert gt.D1p == 1
    assert gt.burn_in == 3


def test_expected_intensity_trivial():
    rho = np.r_[np.ones(3), np.zeros(7)]
    gt = GroundTruth(np.zeros((10, 2)), rho, n_scale=4)
    assert np.allclose(expected_intensity(gt).values, 4 * rho)


def test_expected_intensity_single_convolution():
    rng = np.random.default_rng(0)
    mu = rng.uniform(0, 0.2, (15, 4))
    rho = np.r_[rng.uniform(0, 2, 5), np.zeros(10)]
    gt = GroundTruth(mu, rho, n_scale=3)
    got = expected_intensity(gt, k_max=1).values
    want = 3 * rho.copy()
    for t in range(1, 16):
        for u in range(1, t):
            if t - u <= 4:
                want[t - 1] += 3 * mu[t - 1, t - u - 1] * rho[u - 1]
    assert np.allclose(got, want, rtol=1e-13)


def test_expected_intensity_matches_linear_solve():
    gt = stationary_subcritical(n_scale=7)
    ei = expected_intensity(gt, k_max=300)
    ref = oracles.expected_counts_linear_solve(gt.mu1, gt.n_scale * gt.rho1)
    assert ei.last_term_sup < 1e-10
    assert np.allclose(ei.values, ref, rtol=1e-10, atol=1e-12)


def test_expected_intensity_monotone_in_k():
    gt = stationary_subcritical()
    prev = expected_intensity(gt, 0).values
    for k in (1, 2, 5, 20):
        cur = expected_intensity(gt, k).values
        assert np.all(cur >= prev - 1e-15)
        prev = cur


def test_geometric_total_mass():
    # total expected offspring of all generations: n * sum(rho) / (1 - R)
    T = 2000
    gt = stationary_subcritical(T=T)
    total = expected_intensity(gt, k_max=400).values.sum()
    assert total == pytest.approx(14 / (1 - 0.8), rel=1e-6)


def test_expected_hospitalizations():
    gt = stationary_subcritical(n_scale=100)
    lam = expected_intensity(gt).values
    inf, hosp = simulate_paths(gt, 400, seed=9)
    want = expected_hospitalizations(gt, lam)
    m = hosp.mean(0)
    se = hosp.std(0, ddof=1) / np.sqrt(400)
    sel = want > 1
    assert np.all(np.abs(m[sel] - want[sel]) <= 4.5 * se[sel])


def test_rho_from_history():
    mu = np.full((10, 3), 0.1)
    rho = rho_from_history(mu, [5.0, 2.0])
    # day 1: lags 1 and 2 reach days 0 and -1
    assert rho[0] == pytest.approx(0.1 * 5 + 0.1 * 2)
    assert rho[1] == pytest.approx(0.1 * 5 + 0.1 * 2)
    assert rho[2] == pytest.approx(0.1 * 5)
    assert rho[3] == 0.0


def test_simulate_paths_history_is_kept():
    gt = stationary_subcritical(n_scale=20)
    hist = simulate(gt, 1).infections.counts[:50]
    inf, _ = simulate_paths(gt, 5, 2, history=hist)
    assert np.all(inf[:, :50] == hist)


def test_hospitalization_rates_profile():
    r = hospitalization_rates(100)
    assert r.shape == (100, 21)
    assert r[0].sum() == pytest.approx(0.04 + (0.01 - 0.04) / 100)
    assert r[-1].sum() == pytest.approx(0.01)
    assert np.allclose(r, r[:, :1])


def test_scenarios_construct():
    for name, make in SCENARIOS.items():
        gt = make()
        assert gt.T > 0 and gt.mu2 is not None, name
