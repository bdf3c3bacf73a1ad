"""Local-linear estimation of the transition intensity surface.

The full-information estimator smooths observed parent/offspring pairs
against the smoothed exposure. Without observed links the pairs are
reconstructed as responsibilities from the current surface, and the two
steps alternate until the surface stops changing.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from datetime import date
from typing import Optional

import numpy as np

from .kernels import Bandwidths, KernelSpec, lag_matrix, solve_moments, window_sums
from .pairs import PairCounts
from .timeline import CountSeries, as_counts

log = logging.getLogger(__name__)

EPS = 1e-12
DEFAULT_TOL = 1e-4
DEFAULT_MAX_ITER = 100
# relative floor below which a local-linear denominator counts as non-positive
DENOMINATOR_FLOOR = 1e-12

SURFACE_COLUMNS = ("day", "lag", "value", "evaluated")


@dataclass(frozen=True)
class IntensitySurface:
    """Estimated rate ``mu(t/T, w)`` for days ``t = 1..T`` and lags ``w = 1..D``.

    ``values[t-1, w-1]`` is in events per exposed individual per day. Cells
    whose denominator was not positive hold 0 and are flagged False in
    ``evaluated``. ``clipped`` counts cells whose ratio was negative and set
    to 0.
    """

    values: np.ndarray
    evaluated: np.ndarray
    clipped: int = 0
    start_date: Optional[date] = None
    bandwidths: Optional[Bandwidths] = field(default=None, compare=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        e = np.array(self.evaluated, dtype=bool)
        if v.ndim != 2 or v.shape != e.shape:
            raise ValueError("values and evaluated must be matching 2-D arrays")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("surface values must be finite and non-negative")
        v.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "evaluated", e)

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def D(self) -> int:
        return self.values.shape[1]

    def row(self, t: int) -> np.ndarray:
        return self.values[t - 1]

    def at(self, t: int, w: int) -> float:
        if w < 1 or w > self.D:
            return 0.0
        return float(self.values[t - 1, w - 1])

    @classmethod
    def uniform(cls, T: int, D: int, height: Optional[float] = None) -> "IntensitySurface":
        h = 1.0 / D if height is None else height
        return cls(np.full((T, D), h), np.ones((T, D), dtype=bool))

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SURFACE_COLUMNS)
        for t in range(self.T):
            for l in range(self.D):
                w.writerow([t + 1, l + 1, repr(float(self.values[t, l])), int(self.evaluated[t, l])])
        return buf.getvalue()

    @classmethod
    def read_csv(cls, path, start_date: Optional[date] = None) -> "IntensitySurface":
        rows = []
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            for col in ("day", "lag", "value"):
                if col not in (reader.fieldnames or []):
                    raise ValueError(f"{path}: missing column {col!r}")
            for row in reader:
                ev = row.get("evaluated")
                rows.append((int(row["day"]), int(row["lag"]), float(row["value"]), 1 if ev is None else int(ev)))
        T = max(r[0] for r in rows)
        D = max(r[1] for r in rows)
        vals = np.zeros((T, D))
        ev = np.zeros((T, D), dtype=bool)
        for t, l, v, e in rows:
            vals[t - 1, l - 1] = v
            ev[t - 1, l - 1] = bool(e)
        return cls(vals, ev, 0, start_date)


@dataclass(frozen=True)
class IterationDiagnostics:
    iterations_run: int
    sup_relative_change: tuple
    converged: bool
    final_residual: float
    skipped_days: tuple = ()
    clipped: int = 0


class LocalLinearSmoother:
    """Local-linear ratio estimator for one exposure series and bandwidth pair.

    The exposure moments and the correction coefficients ``A^{-1} a`` do not
    depend on the pairs being smoothed, so they are computed once here and
    reused by every update.

    With ``local_constant`` the correction is switched off (``C1 = 1``).

    Offspring days ``u <= burn_in`` are left out of both sums. Their events
    may descend from pre-sample infections or immigration, which the
    responsibilities would otherwise pile onto short in-sample lags.
    """

    def __init__(
        self,
        exposure,
        bw: Bandwidths,
        D: int,
        spec: KernelSpec = KernelSpec(),
        burn_in: int = 0,
        backend=None,
        local_constant: bool = False,
    ):
        self.c = as_counts(exposure)
        self.T = self.c.size
        self.D = int(D)
        self.bw = bw.check(self.D)
        self.spec = spec
        self.burn_in = max(0, int(burn_in))
        self.backend = backend
        self.E = lag_matrix(self.c, self.D)
        self.E[: self.burn_in] = 0.0
        M = window_sums(self.E, spec, bw, self.T, full=True, backend=backend)
        self.moments = M
        self.beta1, self.beta2, self.singular = solve_moments(M)
        if local_constant:
            self.beta1 = np.zeros_like(self.beta1)
            self.beta2 = np.zeros_like(self.beta2)
        den = M[..., 0] - self.beta1 * M[..., 1] - self.beta2 * M[..., 2]
        self.s0 = M[..., 0]
        self.evaluated = (den > DENOMINATOR_FLOOR * self.s0) & (self.s0 > 0)
        self.den = np.where(self.evaluated, den, 1.0)

    def numerator(self, pairs: np.ndarray) -> np.ndarray:
        if self.burn_in:
            pairs = np.array(pairs, dtype=float)
            pairs[: self.burn_in] = 0.0
        P = window_sums(pairs, self.spec, self.bw, self.T, full=False, backend=self.backend)
        return P[..., 0] - self.beta1 * P[..., 1] - self.beta2 * P[..., 2]

    def apply(self, pairs) -> IntensitySurface:
        P = pairs.counts if isinstance(pairs, PairCounts) else np.asarray(pairs, dtype=float)
        if P.shape != (self.T, self.D):
            raise ValueError(f"pairs grid {P.shape} does not match ({self.T}, {self.D})")
        ratio = np.where(self.evaluated, self.numerator(P) / self.den, 0.0)
        negative = ratio < 0
        clipped = int(negative.sum())
        if clipped:
            log.debug("clipped %d negative cells", clipped)
        return IntensitySurface(np.where(negative, 0.0, ratio), self.evaluated, clipped, bandwidths=self.bw)


def _start(series) -> Optional[date]:
    return series.start_date if isinstance(series, CountSeries) else None


def estimate_full_info(
    pairs: PairCounts,
    exposure,
    bw: Bandwidths,
    D: Optional[int] = None,
    spec: KernelSpec = KernelSpec(),
    burn_in: int = 0,
    smoother: Optional[LocalLinearSmoother] = None,
    local_constant: bool = False,
) -> IntensitySurface:
    """Local-linear estimate from observed (or reconstructed) pair counts."""
    D = pairs.D if D is None else D
    sm = smoother or LocalLinearSmoother(exposure, bw, D, spec, burn_in, local_constant=local_constant)
    surf = sm.apply(pairs)
    return IntensitySurface(surf.values, surf.evaluated, surf.clipped, _start(exposure), bw)


update_surface = estimate_full_info


def responsibilities(surface: IntensitySurface, offspring, exposure) -> PairCounts:
    """Split each day's offspring count over candidate parent days.

    ``N(u, v) = mu(u, u-v) c[v] n[u] / sum_w mu(u, u-w) c[w]``. Days with
    offspring but no weighted parent are listed in ``skipped_days``.
    """
    c = as_counts(exposure)
    n = as_counts(offspring)
    T, D = surface.values.shape
    if c.size != T or n.size != T:
        raise ValueError(f"series length ({c.size}, {n.size}) does not match surface horizon {T}")
    W = surface.values * lag_matrix(c, D)
    tot = W.sum(axis=1)
    ok = tot > 0
    scale = np.divide(n, tot, out=np.zeros(T), where=ok)
    skipped = tuple(int(u) + 1 for u in np.flatnonzero(~ok & (n > 0)))
    return PairCounts(W * scale[:, None], skipped)


def _sup_change(new: np.ndarray, old: np.ndarray) -> float:
    return float(np.max(np.abs(new - old), initial=0.0) / (np.max(old, initial=0.0) + EPS))


def estimate_missing_link(
    exposure,
    offspring,
    bw: Bandwidths,
    D: int,
    spec: KernelSpec = KernelSpec(),
    init: Optional[IntensitySurface] = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    burn_in: Optional[int] = None,
    smoother: Optional[LocalLinearSmoother] = None,
) -> tuple[IntensitySurface, IterationDiagnostics]:
    """Alternate responsibilities and local-linear updates to a fixed point.

    For the infection-to-infection rate pass the infections as both
    ``exposure`` and ``offspring``; for the infection-to-hospitalization rate
    pass the hospitalizations as ``offspring``.

    ``burn_in`` defaults to ``D``: only offspring days whose whole lag
    window lies inside the sample enter the smoother. Non-convergence is
    reported in the diagnostics, not raised.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    c = as_counts(exposure)
    n = as_counts(offspring)
    T = c.size
    cur = init if init is not None else IntensitySurface.uniform(T, D)
    if cur.values.shape != (T, D):
        raise ValueError(f"initial surface shape {cur.values.shape} does not match ({T}, {D})")
    if not c.any() and not n.any():
        return cur, IterationDiagnostics(1, (0.0,), True, 0.0)

    sm = smoother or LocalLinearSmoother(c, bw, D, spec, D if burn_in is None else burn_in)
    changes = []
    pairs = None
    for _ in range(max_iter):
        pairs = responsibilities(cur, n, c)
        new = sm.apply(pairs)
        changes.append(_sup_change(new.values, cur.values))
        cur = new
        if changes[-1] <= tol:
            break
    converged = changes[-1] <= tol
    if not converged:
        log.info("missing-link iteration stopped after %d steps (change %.3g)", len(changes), changes[-1])
    out = IntensitySurface(cur.values, cur.evaluated, cur.clipped, _start(exposure), bw)
    return out, IterationDiagnostics(
        len(changes), tuple(changes), converged, changes[-1], pairs.skipped_days, cur.clipped
    )


def fixed_point_residual(
    surface: IntensitySurface,
    exposure,
    offspring,
    bw: Bandwidths,
    D: Optional[int] = None,
    spec: KernelSpec = KernelSpec(),
    burn_in: Optional[int] = None,
    smoother: Optional[LocalLinearSmoother] = None,
) -> float:
    """Sup-norm distance between ``surface`` and one more iteration, relative to ``sup surface``.

    ``burn_in`` must match the value used to produce ``surface``.
    """
    D = surface.D if D is None else D
    c = as_counts(exposure)
    if not c.any() and not as_counts(offspring).any() and not surface.values.any():
        return 0.0
    sm = smoother or LocalLinearSmoother(c, bw, D, spec, D if burn_in is None else burn_in)
    step = sm.apply(responsibilities(surface, offspring, c))
    mask = surface.evaluated
    diff = np.abs(surface.values - step.values)[mask]
    return float(np.max(diff, initial=0.0) / (np.max(surface.values[mask], initial=0.0) + EPS))


def compare_restarts(
    exposure,
    offspring,
    bw: Bandwidths,
    D: int,
    inits,
    spec: KernelSpec = KernelSpec(),
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    burn_in: Optional[int] = None,
):
    """Run the iteration from several initial surfaces.

    Returns the surfaces, their diagnostics and the largest pairwise sup
    distance relative to the largest value. A small spread supports, but
    does not prove, a unique fixed point.
    """
    c = as_counts(exposure)
    sm = LocalLinearSmoother(c, bw, D, spec, D if burn_in is None else burn_in)
    runs = [estimate_missing_link(c, offspring, bw, D, spec, init, tol, max_iter, smoother=sm) for init in inits]
    surfaces = [r[0] for r in runs]
    top = max((float(s.values.max(initial=0.0)) for s in surfaces), default=0.0) + EPS
    spread = 0.0
    for i, a in enumerate(surfaces):
        for b in surfaces[i + 1 :]:
            spread = max(spread, float(np.max(np.abs(a.values - b.values), initial=0.0)) / top)
    return surfaces, [r[1] for r in runs], spread


def interior_mask(T: int, D: int, lo: float = 0.2, hi: float = 0.8, lag_lo: int = 2, lag_hi: Optional[int] = None) -> np.ndarray:
    """Cells with ``lo*T <= t <= hi*T`` and ``lag_lo <= w <= lag_hi`` (default ``D-1``)."""
    lag_hi = D - 1 if lag_hi is None else lag_hi
    t = np.arange(1, T + 1)[:, None]
    w = np.arange(1, D + 1)[None, :]
    return (t >= lo * T) & (t <= hi * T) & (w >= lag_lo) & (w <= lag_hi)


def sup_relative_error(est: np.ndarray, truth: np.ndarray, mask: np.ndarray) -> float:
    return float(np.max(np.abs(est[mask] - truth[mask]) / truth[mask]))


def relative_l2(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> float:
    """``||a - b|| / ||b||`` over the masked cells."""
    return float(np.linalg.norm(a[mask] - b[mask]) / np.linalg.norm(b[mask]))
