# Banded kernel-window sums over a (day, lag) grid.
#
# out[t, w, :] accumulates g = k1[t-u] * k2[w-l] * X[u, l] times the
# monomials 1, x1, x2 (and x1^2, x1*x2, x2^2 when full) with
# x1 = (t-u)/T and x2 = w-l, over u in the k1 window and l in [0, D).
# The weight factors, so the lag window is summed first and the day
# window second: O(n D (r1 + r2)) instead of O(n D r1 r2).

import numpy as np


def weighted_sums(const double[:, ::1] X, const double[::1] k1, const double[::1] k2,
                  Py_ssize_t T, bint full):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t D = X.shape[1]
    cdef Py_ssize_t r1 = (k1.shape[0] - 1) // 2
    cdef Py_ssize_t r2 = (k2.shape[0] - 1) // 2
    cdef Py_ssize_t m = 6 if full else 3
    out_arr = np.zeros((n, D, m), dtype=np.float64)
    # Y[u, w, j] = sum_l k2[w-l] (w-l)^j X[u, l]
    Y_arr = np.zeros((n, D, 3), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef double[:, :, ::1] Y = Y_arr
    cdef Py_ssize_t t, u, du, w, l, dl
    cdef double g, x1, invT = 1.0 / T
    cdef double y0, y1, y2, s0, s1, s2, s11, s12, s22
    with nogil:
        for u in range(n):
            for w in range(D):
                y0 = 0.0; y1 = 0.0; y2 = 0.0
                for dl in range(-r2, r2 + 1):
                    l = w - dl
                    if l < 0 or l >= D:
                        continue
                    g = k2[dl + r2] * X[u, l]
                    y0 += g
                    y1 += g * dl
                    y2 += g * dl * dl
                Y[u, w, 0] = y0
                Y[u, w, 1] = y1
                Y[u, w, 2] = y2
        for t in range(n):
            for w in range(D):
                s0 = 0.0; s1 = 0.0; s2 = 0.0; s11 = 0.0; s12 = 0.0; s22 = 0.0
                for du in range(-r1, r1 + 1):
                    u = t - du
                    if u < 0 or u >= n:
                        continue
                    g = k1[du + r1]
                    if g == 0.0:
                        continue
                    x1 = du * invT
                    s0 += g * Y[u, w, 0]
                    s1 += g * x1 * Y[u, w, 0]
                    s2 += g * Y[u, w, 1]
                    if full:
                        s11 += g * x1 * x1 * Y[u, w, 0]
                        s12 += g * x1 * Y[u, w, 1]
                        s22 += g * Y[u, w, 2]
                out[t, w, 0] = s0
                out[t, w, 1] = s1
                out[t, w, 2] = s2
                if full:
                    out[t, w, 3] = s11
                    out[t, w, 4] = s12
                    out[t, w, 5] = s22
    return out_arr
