# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: counting, change-point scan, J1 alignment DP.

Operation-for-operation mirrors of ``empirica._pykernels`` (same float
op order), so the two backends return bit-identical results.
"""

import numpy as np

from libc.math cimport INFINITY, fabs


def count_leq(double[:, ::1] values, double[::1] thresholds):
    cdef Py_ssize_t m = values.shape[0]
    cdef Py_ssize_t n = values.shape[1]
    cdef Py_ssize_t t = thresholds.shape[0]
    out_arr = np.empty((m, t), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef long long c
    cdef double thr
    for j in range(t):
        thr = thresholds[j]
        for i in range(m):
            c = 0
            for k in range(n):
                if values[i, k] <= thr:
                    c += 1
            out[i, j] = c
    return out_arr


def changepoint_scan(double[:, ::1] rows, double[::1] hi_grid, double[::1] lo_grid):
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t n = rows.shape[1]
    idx_arr = np.empty(m, dtype=np.int64)
    dmax_arr = np.empty(m, dtype=np.float64)
    ties_arr = np.empty(m, dtype=np.int64)
    cdef long long[::1] idx = idx_arr
    cdef double[::1] dmax = dmax_arr
    cdef long long[::1] ties = ties_arr
    cdef Py_ssize_t i, j, best_j
    cdef double x, va, vb, c, best
    cdef long long cnt
    for i in range(m):
        best = -INFINITY
        best_j = 0
        for j in range(n):
            x = rows[i, j]
            va = fabs(hi_grid[j] - x)
            vb = fabs(lo_grid[j] - x)
            c = va if va > vb else vb
            if c > best:
                best = c
                best_j = j
        cnt = 0
        for j in range(n):
            x = rows[i, j]
            va = fabs(hi_grid[j] - x)
            vb = fabs(lo_grid[j] - x)
            c = va if va > vb else vb
            if c == best:
                cnt += 1
        idx[i] = best_j
        dmax[i] = best
        ties[i] = cnt
    return idx_arr, dmax_arr, ties_arr


def j1_alignment_dp(double[::1] g_vals, double[::1] f_vals,
                    double[::1] g_cuts, double[::1] f_cuts,
                    double lo, double hi):
    cdef Py_ssize_t q = g_cuts.shape[0]
    cdef Py_ssize_t p = f_cuts.shape[0]
    dp_arr = np.full((q + 1) * (p + 1), np.inf)
    cdef double[::1] dp = dp_arr
    cdef Py_ssize_t i, j, w = p + 1
    cdef double cur, pair, base, tcost, val, d, piece_lo, piece_hi
    cdef double final_pair, res
    dp[0] = 0.0
    for i in range(q + 1):
        for j in range(p + 1):
            cur = dp[i * w + j]
            if cur == INFINITY:
                continue
            pair = fabs(g_vals[i] - f_vals[j])
            base = cur if cur >= pair else pair
            if i < q and base < dp[(i + 1) * w + j]:
                dp[(i + 1) * w + j] = base
            if j < p:
                d = f_cuts[j]
                if not (d == hi and i < q):
                    piece_lo = lo if i == 0 else g_cuts[i - 1]
                    piece_hi = hi if i == q else g_cuts[i]
                    tcost = piece_lo - d
                    if d - piece_hi > tcost:
                        tcost = d - piece_hi
                    if tcost < 0.0:
                        tcost = 0.0
                    val = base if base >= tcost else tcost
                    if val < dp[i * w + j + 1]:
                        dp[i * w + j + 1] = val
            if i < q and j < p and (g_cuts[i] == hi) == (f_cuts[j] == hi):
                tcost = fabs(f_cuts[j] - g_cuts[i])
                val = base if base >= tcost else tcost
                if val < dp[(i + 1) * w + j + 1]:
                    dp[(i + 1) * w + j + 1] = val
    final_pair = fabs(g_vals[q] - f_vals[p])
    res = dp[q * w + p]
    return res if res >= final_pair else final_pair
