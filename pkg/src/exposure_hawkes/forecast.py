"""Forecasting under an expert change factor ``C``.

The infection kernel estimated at the last observed day ``t*`` is scaled by
``1 + (C - 1) s / h`` on forecast day ``t* + s``, so the reproduction number
reaches ``C`` times its current value at the end of the horizon ``h``. The
hospitalization kernel stays frozen at its ``t*`` row. Expected counts are
propagated forward with the model recursion.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .estimation import IntensitySurface
from .timeline import Dataset, as_counts

DEFAULT_C_GRID = (0.2, 3.0, 0.01)


@dataclass(frozen=True)
class ForecastConfig:
    t_star: int
    h: int
    C: float = 1.0

    def __post_init__(self):
        if self.t_star < 1:
            raise ValueError("t_star must be a positive day index")
        if self.h < 1:
            raise ValueError("forecast horizon h must be at least one day")
        if not self.C > 0:
            raise ValueError(f"C must be positive, got {self.C}")


@dataclass(frozen=True)
class ForecastResult:
    """Expected daily counts for days ``t_star + 1 .. t_star + h``."""

    infections_forecast: np.ndarray
    hospitalizations_forecast: np.ndarray
    C_used: float
    R_at_tstar: float
    t_star: int
    h: int
    warnings: tuple = field(default=(), compare=False)

    @property
    def days(self) -> np.ndarray:
        return np.arange(self.t_star + 1, self.t_star + self.h + 1)


def ramp_factors(h: int, C: float) -> np.ndarray:
    """``1 + (C - 1) s / h`` for ``s = 1..h``; the last entry is exactly ``C``."""
    if not C > 0:
        raise ValueError(f"C must be positive, got {C}")
    s = np.arange(1, h + 1, dtype=float)
    f = 1.0 + (C - 1.0) * s / h
    f[-1] = C
    return f


def extrapolate_mu1(surface: IntensitySurface, t_star: int, h: int, C: float) -> np.ndarray:
    """Rows for days ``t_star + 1 .. t_star + h``, shape ``(h, D)``."""
    ForecastConfig(t_star, h, C)
    if t_star > surface.T:
        raise ValueError(f"t_star={t_star} is beyond the surface horizon T={surface.T}")
    return ramp_factors(h, C)[:, None] * surface.row(t_star)[None, :]


def reproduction_number(surface, t: int) -> float:
    """Sum of the kernel over lags at day ``t``."""
    values = surface.values if isinstance(surface, IntensitySurface) else np.asarray(surface)
    return float(values[t - 1].sum())


def c_from_R(R_hat_at_tstar: float, R_target: float) -> float:
    """Change factor that moves the current reproduction number to ``R_target``."""
    if not R_hat_at_tstar > 0:
        raise ValueError(f"current reproduction number must be positive, got {R_hat_at_tstar}")
    if not R_target > 0:
        raise ValueError(f"target reproduction number must be positive, got {R_target}")
    return R_target / R_hat_at_tstar


def _infections(x):
    return x.infections if isinstance(x, Dataset) else x


def _history(x, t_star: int) -> np.ndarray:
    c = as_counts(_infections(x))
    if c.size < t_star:
        raise ValueError(f"history covers {c.size} days, need at least t_star={t_star}")
    return c[:t_star]


def _propagate(rows1: np.ndarray, row2: Optional[np.ndarray], hist: np.ndarray):
    h, D1 = rows1.shape
    t_star = hist.size
    n1 = np.concatenate([hist, np.zeros(h)])
    out2 = np.zeros(h)
    D2 = 0 if row2 is None else row2.size
    for s in range(1, h + 1):
        i = t_star + s - 1
        L1 = min(D1, i)
        n1[i] = rows1[s - 1, :L1] @ n1[i - L1 : i][::-1]
        if D2:
            L2 = min(D2, i)
            out2[s - 1] = row2[:L2] @ n1[i - L2 : i][::-1]
    return n1[t_star:], out2


def forecast_counts(
    mu1_surface: IntensitySurface,
    mu2_surface: Optional[IntensitySurface],
    infections,
    t_star: int,
    h: int,
    C: float = 1.0,
    extension: Optional[np.ndarray] = None,
    immigration_cutoff: int = 0,
) -> ForecastResult:
    """Expected infections and hospitalizations over the forecast window.

    Parameters
    ----------
    infections : Dataset, CountSeries or array-like
        Observed infections; only days ``1..t_star`` are used.
    extension : ndarray, optional
        Precomputed ``extrapolate_mu1`` rows; built from ``C`` when omitted.
    immigration_cutoff : int
        Last day of baseline immigration, if known. Forecasting from inside
        that window ignores immigration and attaches a warning.
    """
    hist = _history(infections, t_star)
    rows1 = extrapolate_mu1(mu1_surface, t_star, h, C) if extension is None else np.asarray(extension, dtype=float)
    if rows1.shape[0] != h:
        raise ValueError(f"extension has {rows1.shape[0]} rows, expected h={h}")
    row2 = None
    if mu2_surface is not None:
        if t_star > mu2_surface.T:
            raise ValueError(f"t_star={t_star} is beyond the hospitalization surface horizon")
        row2 = mu2_surface.row(t_star)
    notes = []
    if t_star <= immigration_cutoff:
        msg = f"t_star={t_star} lies inside the immigration window (<= {immigration_cutoff}); immigration is ignored"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    inf, hosp = _propagate(rows1, row2, hist)
    return ForecastResult(inf, hosp, float(C), reproduction_number(mu1_surface, t_star), t_star, h, tuple(notes))


def sample_paths(
    mu1_surface: IntensitySurface,
    mu2_surface: Optional[IntensitySurface],
    infections,
    t_star: int,
    h: int,
    C: float,
    n_paths: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Poisson-sampled forecast paths, each of shape ``(n_paths, h)``."""
    rng = np.random.default_rng(seed)
    hist = _history(infections, t_star)
    rows1 = extrapolate_mu1(mu1_surface, t_star, h, C)
    row2 = None if mu2_surface is None else mu2_surface.row(t_star)
    D1 = rows1.shape[1]
    n1 = np.zeros((n_paths, t_star + h))
    n1[:, :t_star] = hist
    hosp = np.zeros((n_paths, h))
    for s in range(1, h + 1):
        i = t_star + s - 1
        L1 = min(D1, i)
        n1[:, i] = rng.poisson(n1[:, i - L1 : i][:, ::-1] @ rows1[s - 1, :L1])
        if row2 is not None:
            L2 = min(row2.size, i)
            hosp[:, s - 1] = rng.poisson(n1[:, i - L2 : i][:, ::-1] @ row2[:L2])
    return n1[:, t_star:], hosp


def c_grid(start: float = DEFAULT_C_GRID[0], stop: float = DEFAULT_C_GRID[1], step: float = DEFAULT_C_GRID[2]) -> np.ndarray:
    if not step > 0 or stop < start:
        raise ValueError("C grid needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(n), 12)


def optimal_c(
    mu1_surface: IntensitySurface,
    mu2_surface: Optional[IntensitySurface],
    infections,
    hospitalizations,
    t_star: int,
    h: int,
    objective: str = "infections",
    grid=None,
) -> tuple[float, np.ndarray]:
    """Retrospective change factor minimising squared daily forecast error.

    ``infections`` may be a Dataset, whose hospitalizations are then used
    unless given. Observations must cover days ``1..t_star + h``. Returns the
    best ``C`` and the error curve as ``(C, sse)`` rows. Ties go to the ``C``
    closest to 1.
    """
    if objective not in ("infections", "hospitalizations"):
        raise ValueError(f"unknown objective {objective!r}")
    if isinstance(infections, Dataset):
        if hospitalizations is None:
            hospitalizations = infections.hospitalizations
        infections = infections.infections
    cs = c_grid() if grid is None else np.asarray(grid, dtype=float)
    if cs.size == 0:
        raise ValueError("empty C grid")
    obs_series = infections if objective == "infections" else hospitalizations
    if obs_series is None:
        raise ValueError(f"{objective} objective needs observed {objective}")
    obs = as_counts(obs_series)
    if obs.size < t_star + h:
        raise ValueError(f"observations cover {obs.size} days, need t_star + h = {t_star + h}")
    if objective == "hospitalizations" and mu2_surface is None:
        raise ValueError("hospitalizations objective needs a hospitalization surface")
    target = obs[t_star : t_star + h]
    sse = np.empty(cs.size)
    for k, C in enumerate(cs):
        res = forecast_counts(mu1_surface, mu2_surface, infections, t_star, h, float(C))
        pred = res.infections_forecast if objective == "infections" else res.hospitalizations_forecast
        sse[k] = float(np.sum((pred - target) ** 2))
    best = min(range(cs.size), key=lambda k: (sse[k], abs(cs[k] - 1.0)))
    return float(cs[best]), np.column_stack([cs, sse])
