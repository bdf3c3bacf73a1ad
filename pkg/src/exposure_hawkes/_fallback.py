"""Pure numpy implementation of the banded window sums in ``_core.pyx``.

The band structure is expanded into dense day-by-day and lag-by-lag weight
matrices so every moment is two matrix products.
"""

import numpy as np


def _band(n, weights, scale):
    r = (len(weights) - 1) // 2
    diff = np.subtract.outer(np.arange(n), np.arange(n))
    inside = np.abs(diff) <= r
    K = np.where(inside, weights[np.clip(diff + r, 0, 2 * r)], 0.0)
    return K, diff * scale


def weighted_sums(X, k1, k2, T, full):
    X = np.ascontiguousarray(X, dtype=float)
    n, D = X.shape
    K1, x1 = _band(n, np.asarray(k1, dtype=float), 1.0 / T)
    K2, x2 = _band(D, np.asarray(k2, dtype=float), 1.0)
    left = [K1, K1 * x1]
    right = [K2, K2 * x2]
    if full:
        left.append(K1 * x1 * x1)
        right.append(K2 * x2 * x2)
    # (i, j) -> sum over window of g * x1**i * x2**j
    pairs = [(0, 0), (1, 0), (0, 1)]
    if full:
        pairs += [(2, 0), (1, 1), (0, 2)]
    out = np.empty((n, D, len(pairs)))
    for k, (i, j) in enumerate(pairs):
        out[:, :, k] = left[i] @ X @ right[j].T
    return out
