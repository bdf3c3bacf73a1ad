"""Least-squares cross-validation for the two smoothing bandwidths."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .estimation import (
    DENOMINATOR_FLOOR,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    LocalLinearSmoother,
    estimate_missing_link,
    responsibilities,
)
from .kernels import Bandwidths, KernelSpec, kernel_eval, offsets, solve_moments, window_sums
from .pairs import PairCounts
from .timeline import as_counts

DEFAULT_B1 = (0.05, 0.1, 0.15, 0.2, 0.3)
DEFAULT_B2 = (2.0, 3.0, 5.0, 7.0, 10.0)
THREADS_ENV = "EXPOSURE_HAWKES_THREADS"


def max_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass(frozen=True)
class BandwidthGrid:
    b1_candidates: tuple = DEFAULT_B1
    b2_candidates: tuple = DEFAULT_B2

    def __post_init__(self):
        for name in ("b1_candidates", "b2_candidates"):
            vals = tuple(float(x) for x in getattr(self, name))
            if not vals:
                raise ValueError(f"{name} is empty")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError(f"{name} must be strictly increasing")
            if vals[0] <= 0:
                raise ValueError(f"{name} must be positive")
            object.__setattr__(self, name, vals)
        if self.b1_candidates[-1] > 1:
            raise ValueError("b1 candidates are fractions of the horizon and must be <= 1")

    def cells(self, D: Optional[int] = None) -> list[Bandwidths]:
        return [
            Bandwidths(b1, b2)
            for b1 in self.b1_candidates
            for b2 in self.b2_candidates
            if D is None or b2 <= D
        ]


def _leave_day_out(sm: LocalLinearSmoother, P: np.ndarray) -> np.ndarray:
    """Surface at each offspring cell ``(u, l)`` re-estimated without day ``u``.

    Day ``u`` is removed from the occurrence sum and from the exposure
    moments alike; removing only the occurrences would bias the estimate
    down by about ``K(0) / (b1 T)`` with daily bins.
    """
    E = sm.E
    if sm.burn_in:
        P = P.copy()
        P[: sm.burn_in] = 0.0
    D = sm.D
    k2 = offsets(sm.spec, sm.bw.b2)
    r2 = (len(k2) - 1) // 2
    diff = np.subtract.outer(np.arange(D), np.arange(D)).astype(float)  # l - l'
    K2 = np.where(np.abs(diff) <= r2, k2[np.clip(diff.astype(int) + r2, 0, 2 * r2)], 0.0)
    k1_0 = float(kernel_eval(sm.spec, sm.bw.b1, 0.0))
    # day u sits at x1 = 0, so it only feeds the S0, a2 and A22 moments
    M = sm.moments.copy()
    M[..., 0] -= k1_0 * (E @ K2.T)
    M[..., 2] -= k1_0 * (E @ (K2 * diff).T)
    M[..., 5] -= k1_0 * (E @ (K2 * diff**2).T)
    b1, b2, _ = solve_moments(M)
    den = M[..., 0] - b1 * M[..., 1] - b2 * M[..., 2]
    ok = (den > DENOMINATOR_FLOOR * np.abs(M[..., 0])) & (M[..., 0] > 0)
    Q = window_sums(P, sm.spec, sm.bw, sm.T, full=False, backend=sm.backend)
    Q[..., 0] -= k1_0 * (P @ K2.T)
    Q[..., 2] -= k1_0 * (P @ (K2 * diff).T)
    num = Q[..., 0] - b1 * Q[..., 1] - b2 * Q[..., 2]
    vals = np.where(ok, num / np.where(ok, den, 1.0), 0.0)
    return np.maximum(vals, 0.0)


def cv_score(
    exposure,
    offspring,
    pairs_or_soft: PairCounts,
    bw: Bandwidths,
    D: int,
    spec: KernelSpec = KernelSpec(),
    burn_in: int = 0,
    smoother: Optional[LocalLinearSmoother] = None,
) -> float:
    """Least-squares cross-validation score; smaller is better.

    ``Q = sum_cells mu(t, w)^2 c[t - w] - 2 sum_(u, l) mu^(-u)(u, l) N(u, l)``
    where ``mu^(-u)`` is the estimate with offspring day ``u`` deleted. The
    ``offspring`` series is implied by the pairs and kept for a uniform call
    signature.
    """
    sm = smoother or LocalLinearSmoother(exposure, bw, D, spec, burn_in)
    P = pairs_or_soft.counts if isinstance(pairs_or_soft, PairCounts) else np.asarray(pairs_or_soft, dtype=float)
    surf = sm.apply(P)
    keep = np.ones(sm.T, dtype=bool)
    keep[: sm.burn_in] = False
    fit = np.sum((surf.values**2 * sm.E)[keep])
    loo = _leave_day_out(sm, P)
    cross = np.sum((loo * P)[keep])
    return float(fit - 2.0 * cross)


def _score_cell(bw, c, n, D, spec, mode, pairs, fast_pairs, tol, max_iter, burn_in):
    sm = LocalLinearSmoother(c, bw, D, spec, burn_in)
    if mode == "full-info":
        P = pairs
    elif fast_pairs is not None:
        P = fast_pairs
    else:
        surf, _ = estimate_missing_link(c, n, bw, D, spec, tol=tol, max_iter=max_iter, smoother=sm)
        P = responsibilities(surf, n, c)
    return cv_score(c, n, P, bw, D, spec, smoother=sm)


def cv_table(
    exposure,
    offspring,
    grid: BandwidthGrid,
    D: int,
    spec: KernelSpec = KernelSpec(),
    mode: str = "missing-link",
    pairs: Optional[PairCounts] = None,
    fast: bool = False,
    pilot: Optional[Bandwidths] = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    burn_in: Optional[int] = None,
    threads: Optional[int] = None,
) -> list[tuple[float, float, float]]:
    """Score every grid cell; rows are ``(b1, b2, score)`` in grid order.

    In ``missing-link`` mode each candidate re-runs the iteration and scores
    its converged responsibilities; ``fast`` instead reuses the
    responsibilities of a single ``pilot`` fit (default: the middle cell).
    ``burn_in`` defaults to 0 in full-info mode and to ``D`` otherwise.
    """
    if mode not in ("full-info", "missing-link"):
        raise ValueError(f"unknown mode {mode!r}")
    c = as_counts(exposure)
    n = as_counts(offspring)
    if burn_in is None:
        burn_in = 0 if mode == "full-info" else D
    P = None
    if mode == "full-info":
        if pairs is None:
            raise ValueError("full-info mode needs observed pairs")
        P = pairs.counts
    cells = grid.cells(D)
    if not cells:
        raise ValueError(f"no grid cell has b2 <= D={D}")
    fast_pairs = None
    if mode == "missing-link" and fast:
        pilot = pilot or cells[len(cells) // 2]
        surf, _ = estimate_missing_link(c, n, pilot, D, spec, tol=tol, max_iter=max_iter, burn_in=burn_in)
        fast_pairs = responsibilities(surf, n, c).counts

    def run(bw):
        return _score_cell(bw, c, n, D, spec, mode, P, fast_pairs, tol, max_iter, burn_in)

    workers = min(threads or max_threads(), len(cells))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scores = list(pool.map(run, cells))
    else:
        scores = [run(bw) for bw in cells]
    return [(bw.b1, bw.b2, s) for bw, s in zip(cells, scores)]


def best_from_table(table) -> Bandwidths:
    """Minimum score; ties go to the larger (smoother) bandwidths."""
    ordered = sorted(table, key=lambda r: (r[2], -r[0], -r[1]))
    b1, b2, _ = ordered[0]
    return Bandwidths(b1, b2)


def select_bandwidths(
    exposure,
    offspring,
    grid: BandwidthGrid,
    D: int,
    spec: KernelSpec = KernelSpec(),
    mode: str = "missing-link",
    pairs: Optional[PairCounts] = None,
    return_table: bool = False,
    **kwargs,
):
    """Grid cell minimising :func:`cv_score` (see :func:`cv_table` for options)."""
    table = cv_table(exposure, offspring, grid, D, spec, mode, pairs, **kwargs)
    best = best_from_table(table)
    return (best, table) if return_table else best
