"""One-dimensional kernels and the local-linear moment machinery.

Every estimator in the package is a ratio of kernel-weighted sums over
(offspring day ``u``, lag ``l = u - v``) cells around an evaluation point
(day ``t``, lag ``w``). The local-linear correction reweights each cell by

    C1 = 1 - z' A^{-1} a,   z = ((t - u) / T, w - l)

where ``a`` and ``A`` are the first and second exposure moments of the
window. The window sums are computed by a compiled extension when it is
available and by a numpy fallback otherwise; see :data:`BACKEND`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from . import _fallback

try:
    from ._core import weighted_sums as _compiled_sums
except ImportError:  # extension not built
    _compiled_sums = None

#: Name of the backend used by :func:`window_sums` unless overridden.
BACKEND = (
    "compiled"
    if _compiled_sums is not None and os.environ.get("EXPOSURE_HAWKES_PURE", "") not in ("1", "true")
    else "python"
)

SINGULAR_RATIO = 1e-10

_TRUNC_GAUSS_NORM = 3.0 / (math.sqrt(2.0 * math.pi) * erf(3.0 / math.sqrt(2.0)))


def _epanechnikov(x):
    return 0.75 * (1.0 - x * x)


def _quartic(x):
    return 0.9375 * (1.0 - x * x) ** 2


def _gaussian_truncated(x):
    # N(0, 1/9) restricted to [-1, 1] and renormalised
    return _TRUNC_GAUSS_NORM * np.exp(-4.5 * x * x)


_FAMILIES = {
    "epanechnikov": _epanechnikov,
    "quartic": _quartic,
    "gaussian-truncated": _gaussian_truncated,
}


@dataclass(frozen=True)
class KernelSpec:
    """A symmetric kernel supported on [-1, 1] with unit mass."""

    family: str = "epanechnikov"

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; choose from {sorted(_FAMILIES)}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        # round-off at the support edge must not decide membership
        inside = np.abs(x) <= 1.0 + 1e-9
        return np.where(inside, _FAMILIES[self.family](np.clip(x, -1.0, 1.0)), 0.0)


@dataclass(frozen=True)
class Bandwidths:
    """``b1`` in units of the horizon ``T``; ``b2`` in days."""

    b1: float
    b2: float

    def __post_init__(self):
        if not (self.b1 > 0 and self.b2 > 0):
            raise ValueError(f"bandwidths must be positive, got b1={self.b1}, b2={self.b2}")
        if self.b1 > 1:
            raise ValueError(f"b1 is a fraction of the horizon and must be <= 1, got {self.b1}")

    def check(self, D: int) -> "Bandwidths":
        if self.b2 > D:
            raise ValueError(f"b2={self.b2} exceeds the lag support D={D}")
        return self


@dataclass(frozen=True)
class MomentSet:
    """Exposure moments of the kernel window at one evaluation point."""

    t: int
    w: int
    s0: float
    a: np.ndarray
    A: np.ndarray


def kernel_eval(spec: KernelSpec, b: float, x):
    """Scaled kernel ``K(x / b) / b``."""
    if not b > 0:
        raise ValueError(f"bandwidth must be positive, got {b}")
    return spec(np.asarray(x, dtype=float) / b) / b


def kernel_mass(spec: KernelSpec, n_points: int = 10_001) -> float:
    """Simpson-rule integral of ``spec`` over its support."""
    from scipy.integrate import simpson

    x = np.linspace(-1.0, 1.0, n_points)
    return float(simpson(spec(x), x=x))


def offsets(spec: KernelSpec, b: float, scale: float = 1.0) -> np.ndarray:
    """Kernel weights at integer offsets ``-r..r`` covering the support.

    Entry ``i`` is ``K_b((i - r) * scale)``; ``r`` is the largest offset
    with ``|r * scale| <= b``.
    """
    # b / scale can land just below an integer (0.15 / 0.025 = 5.999...)
    r = int(math.floor(b / scale * (1.0 + 1e-12) + 1e-9))
    return kernel_eval(spec, b, np.arange(-r, r + 1) * scale)


def lag_matrix(counts, D: int) -> np.ndarray:
    """``E[u-1, l-1] = counts[u - l]`` (1-based days), zero when ``u - l < 1``."""
    c = np.asarray(counts, dtype=float)
    T = c.size
    E = np.zeros((T, D))
    for l in range(1, min(D, T - 1) + 1):
        E[l:, l - 1] = c[: T - l]
    return E


def window_sums(X, spec: KernelSpec, bw: Bandwidths, T: int, full: bool, backend: str | None = None):
    """Kernel-weighted sums of ``X`` over every (day, lag) evaluation window.

    Returns an array of shape ``(n_days, D, 6)`` holding
    ``S0, a1, a2, A11, A12, A22`` when ``full``; otherwise ``(n_days, D, 3)``
    holding the zeroth and first moments only.
    """
    X = np.ascontiguousarray(X, dtype=float)
    D = X.shape[1]
    k1 = offsets(spec, bw.b1, 1.0 / T)
    k2 = offsets(spec, bw.b2)
    # lags never differ by more than D - 1
    if len(k2) > 2 * D - 1:
        cut = (len(k2) - (2 * D - 1)) // 2
        k2 = k2[cut:-cut]
    backend = backend or BACKEND
    if backend == "compiled":
        if _compiled_sums is None:
            raise RuntimeError("compiled backend requested but the extension is not built")
        return _compiled_sums(X, np.ascontiguousarray(k1), np.ascontiguousarray(k2), T, bool(full))
    if backend != "python":
        raise ValueError(f"unknown backend {backend!r}")
    return _fallback.weighted_sums(X, k1, k2, T, full)


def singular_mask(A11, A12, A22):
    """True where the 2x2 moment matrix counts as numerically singular.

    Singular means the largest eigenvalue is not positive or the smallest is
    below ``SINGULAR_RATIO`` times the largest.
    """
    half_tr = 0.5 * (A11 + A22)
    rad = np.sqrt(0.25 * (A11 - A22) ** 2 + A12 * A12)
    lmax = half_tr + rad
    lmin = half_tr - rad
    return (lmax <= 0) | (lmin < SINGULAR_RATIO * lmax)


def solve_moments(M):
    """``beta = A^{-1} a`` per cell from full window sums ``M``.

    Returns ``(beta1, beta2, singular)``; ``beta`` is zero where singular,
    which turns the correction weight into the local-constant weight 1.
    """
    a1, a2 = M[..., 1], M[..., 2]
    A11, A12, A22 = M[..., 3], M[..., 4], M[..., 5]
    sing = singular_mask(A11, A12, A22)
    det = np.where(sing, 1.0, A11 * A22 - A12 * A12)
    beta1 = np.where(sing, 0.0, (A22 * a1 - A12 * a2) / det)
    beta2 = np.where(sing, 0.0, (A11 * a2 - A12 * a1) / det)
    return beta1, beta2, sing


def local_moments(t: int, w: int, exposure, spec: KernelSpec, bw: Bandwidths, D: int, T: int | None = None) -> MomentSet:
    """Exposure moments at one evaluation point by direct summation.

    ``exposure`` holds daily counts for days ``1..T``. Sums run over offspring
    days ``u`` with ``|t - u| <= b1 T`` and lags ``l`` in ``1..D`` with
    ``|w - l| <= b2``; the parent day is ``v = u - l >= 1``.
    """
    c = np.asarray(getattr(exposure, "counts", exposure), dtype=float)
    T = c.size if T is None else T
    s0 = 0.0
    a = np.zeros(2)
    A = np.zeros((2, 2))
    r1 = int(math.floor(bw.b1 * T * (1.0 + 1e-12) + 1e-9))
    for u in range(max(1, t - r1), min(c.size, t + r1) + 1):
        k1 = float(kernel_eval(spec, bw.b1, (t - u) / T))
        if k1 == 0.0:
            continue
        for l in range(1, D + 1):
            v = u - l
            if v < 1:
                break
            k2 = float(kernel_eval(spec, bw.b2, w - l))
            g = k1 * k2 * c[v - 1]
            if g == 0.0:
                continue
            z = np.array([(t - u) / T, float(w - l)])
            s0 += g
            a += g * z
            A += g * np.outer(z, z)
    return MomentSet(t, w, s0, a, A)


def c1_weight(t: int, w: int, v: int, u: int, m: MomentSet, T: int) -> float:
    """Local-linear correction weight for the pair (offspring ``u``, parent ``v``)."""
    A = m.A
    if singular_mask(A[0, 0], A[0, 1], A[1, 1]):
        return 1.0
    z = np.array([(t - u) / T, float(w - (u - v))])
    return float(1.0 - z @ np.linalg.solve(A, m.a))
