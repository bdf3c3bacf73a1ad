"""Discrete-time locally stationary Hawkes simulator with parent links.

Each day ``t`` draws ``Poisson(sum_v mu1(t/T, t-v) N1[v] + n rho1[t])`` new
infections and attributes every one of them to a parent day (or to
immigration) by a multinomial draw with the same weights. Hospitalizations
follow the same construction driven by infections through ``mu2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import ExplosionError
from .pairs import PairCounts
from .timeline import CountSeries, Dataset

DEFAULT_CAP = 1e7
DEFAULT_START = date(2020, 5, 15)


def _grid(values, T: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != T:
        raise ValueError(f"{name} must be a (T={T}, D) grid, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError(f"{name} must be finite and non-negative")
    arr.setflags(write=False)
    return arr


def _seq(values, T: int, name: str) -> np.ndarray:
    arr = np.zeros(T) if values is None else np.array(values, dtype=float)
    if arr.shape != (T,):
        raise ValueError(f"{name} must have length T={T}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError(f"{name} must be finite and non-negative")
    arr.setflags(write=False)
    return arr


def _last_active(rho: np.ndarray) -> int:
    nz = np.flatnonzero(rho)
    return int(nz[-1]) + 1 if nz.size else 0


@dataclass(frozen=True)
class GroundTruth:
    """True transition rates on the daily grid.

    ``mu1[t-1, w-1]`` is the rate at calendar day ``t`` (rescaled ``t/T``)
    and lag ``w``; lags beyond the grid width ``D1`` are zero. ``mu2`` has
    the same layout with width ``D2``; ``None`` means no hospitalizations.
    """

    mu1: np.ndarray
    rho1: np.ndarray
    mu2: Optional[np.ndarray] = None
    rho2: Optional[np.ndarray] = None
    n_scale: float = 1.0
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        mu1 = np.asarray(self.mu1)
        T = mu1.shape[0] if mu1.ndim == 2 else -1
        object.__setattr__(self, "mu1", _grid(self.mu1, T, "mu1"))
        object.__setattr__(self, "rho1", _seq(self.rho1, T, "rho1"))
        if self.mu2 is not None:
            object.__setattr__(self, "mu2", _grid(self.mu2, T, "mu2"))
        object.__setattr__(self, "rho2", _seq(self.rho2, T, "rho2"))
        if not self.n_scale > 0:
            raise ValueError("n_scale must be positive")

    @property
    def T(self) -> int:
        return self.mu1.shape[0]

    @property
    def D1(self) -> int:
        return self.mu1.shape[1]

    @property
    def D2(self) -> int:
        return 0 if self.mu2 is None else self.mu2.shape[1]

    @property
    def D1p(self) -> int:
        """Last day with active infection immigration (0 if none)."""
        return _last_active(self.rho1)

    @property
    def D2p(self) -> int:
        return _last_active(self.rho2)

    @property
    def burn_in(self) -> int:
        return max(self.D1p, self.D1)

    @classmethod
    def from_functions(
        cls,
        mu1: Callable,
        D1: int,
        T: int,
        rho1,
        mu2: Optional[Callable] = None,
        D2: int = 0,
        rho2=None,
        n_scale: float = 1.0,
        name: str = "custom",
    ) -> "GroundTruth":
        """Evaluate ``mu(x, w)`` callables on the day grid ``x = t/T``."""
        x = (np.arange(1, T + 1) / T)[:, None]

        def grid(f, D):
            w = np.arange(1, D + 1)[None, :]
            return np.broadcast_to(np.asarray(f(x, w), dtype=float), (T, D)).copy()

        return cls(
            grid(mu1, D1),
            rho1,
            None if mu2 is None else grid(mu2, D2),
            rho2,
            n_scale,
            name,
        )


def rho_from_history(mu1: np.ndarray, nu1) -> np.ndarray:
    """Immigration implied by pre-sample history.

    ``nu1[k]`` is the (scaled) count on day ``-k`` (``k = 0`` is the day
    before day 1). Returns ``rho1[t] = sum_k mu1(t/T, t + k) nu1[k]``.
    """
    mu1 = np.asarray(mu1, dtype=float)
    nu = np.asarray(nu1, dtype=float)
    T, D = mu1.shape
    rho = np.zeros(T)
    for k, n in enumerate(nu):
        for t in range(1, T + 1):
            lag = t + k
            if lag > D:
                break
            rho[t - 1] += mu1[t - 1, lag - 1] * n
    return rho


@dataclass(frozen=True)
class SimOutput:
    infections: CountSeries
    hospitalizations: CountSeries
    pair_counts1: PairCounts
    pair_counts2: PairCounts
    immigrant_counts: np.ndarray
    hosp_immigrant_counts: np.ndarray
    seed: int

    def dataset(self, n_scale: float = 1.0) -> Dataset:
        return Dataset(self.infections, self.hospitalizations, n_scale)


def _recent(x: np.ndarray, i: int, L: int) -> np.ndarray:
    """``x[i-1], x[i-2], ..., x[i-L]`` (lags 1..L before index ``i``)."""
    return x[i - L : i][::-1]


def simulate(gt: GroundTruth, seed: int, cap: float = DEFAULT_CAP, start_date: date = DEFAULT_START) -> SimOutput:
    """One seeded replicate with full parent attribution."""
    rng = np.random.default_rng(seed)
    T, D1, D2 = gt.T, gt.D1, gt.D2
    n = gt.n_scale
    inf = np.zeros(T, dtype=np.int64)
    hosp = np.zeros(T, dtype=np.int64)
    pairs1 = np.zeros((T, D1))
    pairs2 = np.zeros((T, max(D2, 1)))
    imm1 = np.zeros(T, dtype=np.int64)
    imm2 = np.zeros(T, dtype=np.int64)

    def draw(i, weights, base):
        total = weights.sum() + base
        if total > cap:
            raise ExplosionError(i + 1, total, cap)
        if total <= 0:
            return 0, None, 0
        k = rng.poisson(total)
        if k == 0:
            return 0, np.zeros(weights.size, dtype=np.int64), 0
        p = np.append(weights, base) / total
        split = rng.multinomial(k, p)
        return k, split[:-1], split[-1]

    for i in range(T):
        L = min(D1, i)
        w = gt.mu1[i, :L] * _recent(inf, i, L)
        k, split, k0 = draw(i, w, n * gt.rho1[i])
        inf[i] = k
        imm1[i] = k0
        if split is not None:
            pairs1[i, :L] = split
        if gt.mu2 is not None:
            L2 = min(D2, i)
            w2 = gt.mu2[i, :L2] * _recent(inf, i, L2)
            k2, split2, k20 = draw(i, w2, n * gt.rho2[i])
            hosp[i] = k2
            imm2[i] = k20
            if split2 is not None:
                pairs2[i, :L2] = split2

    return SimOutput(
        CountSeries(start_date, inf, "new_positives"),
        CountSeries(start_date, hosp, "new_hospitalized"),
        PairCounts(pairs1),
        PairCounts(pairs2),
        imm1,
        imm2,
        seed,
    )


def simulate_paths(
    gt: GroundTruth,
    n_paths: int,
    seed: int,
    history=None,
    cap: float = DEFAULT_CAP,
) -> tuple[np.ndarray, np.ndarray]:
    """Count-only replicates, vectorised across paths.

    Parameters
    ----------
    history : array-like, optional
        Observed infections for days ``1..k``. Every path reproduces them and
        is simulated forward from day ``k + 1``; hospitalizations on days
        ``<= k`` are still drawn.

    Returns
    -------
    infections, hospitalizations : ndarray, shape (n_paths, T)
    """
    rng = np.random.default_rng(seed)
    T, D1, D2 = gt.T, gt.D1, gt.D2
    n = gt.n_scale
    inf = np.zeros((n_paths, T))
    hosp = np.zeros((n_paths, T))
    k_hist = 0
    if history is not None:
        h = np.asarray(getattr(history, "counts", history), dtype=float)
        k_hist = h.size
        inf[:, :k_hist] = h
    for i in range(T):
        if i >= k_hist:
            L = min(D1, i)
            lam = inf[:, i - L : i][:, ::-1] @ gt.mu1[i, :L] + n * gt.rho1[i]
            if lam.max(initial=0.0) > cap:
                raise ExplosionError(i + 1, float(lam.max()), cap)
            inf[:, i] = rng.poisson(lam)
        if gt.mu2 is not None:
            L2 = min(D2, i)
            lam2 = inf[:, i - L2 : i][:, ::-1] @ gt.mu2[i, :L2] + n * gt.rho2[i]
            hosp[:, i] = rng.poisson(lam2)
    return inf, hosp


class ExpectedIntensity(NamedTuple):
    values: np.ndarray
    last_term_sup: float


def _propagate(mu: np.ndarray, g: np.ndarray) -> np.ndarray:
    """``out[t] = sum_l mu[t, l] g[t - l]`` over lags ``l = 1..D``."""
    T, D = mu.shape
    out = np.zeros(T)
    for l in range(1, min(D, T - 1) + 1):
        out[l:] += mu[l:, l - 1] * g[: T - l]
    return out


def expected_intensity(gt: GroundTruth, k_max: int = 200) -> ExpectedIntensity:
    """Expected daily infections from the truncated generation series.

    Term ``k`` is the expected number of ``k``-th generation descendants of
    immigrants; the sum of terms ``0..k_max`` is returned together with the
    sup-norm of term ``k_max`` as a truncation diagnostic.
    """
    g = gt.n_scale * np.asarray(gt.rho1, dtype=float)
    total = g.copy()
    last = float(g.max(initial=0.0))
    for _ in range(k_max):
        g = _propagate(gt.mu1, g)
        total += g
        last = float(g.max(initial=0.0))
        if last == 0.0:
            break
    return ExpectedIntensity(total, last)


def expected_hospitalizations(gt: GroundTruth, infections_mean: np.ndarray) -> np.ndarray:
    if gt.mu2 is None:
        return np.zeros(gt.T)
    return gt.n_scale * gt.rho2 + _propagate(gt.mu2, np.asarray(infections_mean, dtype=float))


# -- built-in scenarios -------------------------------------------------------

HOSP_LAGS = 21


def hospitalization_rates(T: int, D2: int = HOSP_LAGS, start: float = 0.04, end: float = 0.01) -> np.ndarray:
    """Uniform lag profile whose total probability falls linearly in time."""
    x = np.arange(1, T + 1) / T
    p = start + (end - start) * x
    return np.repeat((p / D2)[:, None], D2, axis=1)


def _seeded(T: int, D1: int) -> np.ndarray:
    rho = np.zeros(T)
    rho[:D1] = 1.0
    return rho


def stationary_subcritical(T: int = 300, n_scale: float = 1.0, R: float = 0.8, D1: int = 14) -> GroundTruth:
    """Constant uniform kernel with total mass ``R``, seeded on days ``1..D1``."""
    return GroundTruth(
        np.full((T, D1), R / D1), _seeded(T, D1), hospitalization_rates(T), None, n_scale, "stationary-subcritical"
    )


def stationary_critical(T: int = 300, n_scale: float = 300.0, D1: int = 14) -> GroundTruth:
    """Reproduction number exactly one: the mean settles on a plateau."""
    gt = stationary_subcritical(T, n_scale, 1.0, D1)
    return GroundTruth(gt.mu1, gt.rho1, gt.mu2, None, n_scale, "stationary-critical")


def ramp_up(T: int = 228, t_star: int = 200, factor: float = 1.5, n_scale: float = 200.0, D1: int = 14) -> GroundTruth:
    """Critical until ``t_star``, then the kernel ramps linearly to ``factor`` times at day ``T``."""
    scale = np.ones(T)
    s = np.arange(1, T - t_star + 1)
    scale[t_star:] = 1.0 + (factor - 1.0) * s / (T - t_star)
    mu1 = np.full((T, D1), 1.0 / D1) * scale[:, None]
    return GroundTruth(mu1, _seeded(T, D1), hospitalization_rates(T), None, n_scale, f"ramp-up-{factor:g}x")


def lockdown_drop(T: int = 300, n_scale: float = 10.0, R: float = 1.2, D1: int = 14) -> GroundTruth:
    """Growth at ``R`` for the first half, then the kernel is halved."""
    mu1 = np.full((T, D1), R / D1)
    mu1[T // 2 :] *= 0.5
    return GroundTruth(mu1, _seeded(T, D1), hospitalization_rates(T), None, n_scale, "lockdown-drop")


SCENARIOS = {
    "stationary-subcritical": stationary_subcritical,
    "stationary-critical": stationary_critical,
    "ramp-up-1.5x": ramp_up,
    "lockdown-drop": lockdown_drop,
}
