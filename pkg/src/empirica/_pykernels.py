"""Pure-python/numpy kernels.

These are the fallback twins of the compiled kernels in ``_ckernels``;
both backends perform the same floating-point operations in the same
order, so results are bit-identical whichever one is loaded.
"""

from __future__ import annotations

import numpy as np


def count_leq(values: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """counts[i, j] = #{k : values[i, k] <= thresholds[j]}."""
    values = np.asarray(values, dtype=np.float64)
    thresholds = np.asarray(thresholds, dtype=np.float64)
    out = np.empty((values.shape[0], thresholds.size), dtype=np.int64)
    for j in range(thresholds.size):
        out[:, j] = (values <= thresholds[j]).sum(axis=1)
    return out


def changepoint_scan(rows: np.ndarray, hi_grid: np.ndarray, lo_grid: np.ndarray):
    """Per-row argmax scan of max(|hi_grid - x|, |lo_grid - x|).

    ``rows`` holds sorted samples, ``hi_grid[i] = (i+1)/n`` is the ecdf
    value at the i-th order statistic and ``lo_grid[i] = i/n`` its left
    limit.  Ties resolve to the first (leftmost) maximiser.  Returns
    (argmax index, achieved max, tie count) per row.
    """
    rows = np.asarray(rows, dtype=np.float64)
    a = np.abs(hi_grid[None, :] - rows)
    b = np.abs(lo_grid[None, :] - rows)
    c = np.maximum(a, b)
    idx = np.argmax(c, axis=1)
    dmax = c[np.arange(c.shape[0]), idx]
    ties = (c == dmax[:, None]).sum(axis=1, dtype=np.int64)
    return idx.astype(np.int64), dmax, ties


def j1_alignment_dp(g_vals, f_vals, g_cuts, f_cuts, lo: float, hi: float) -> float:
    """Bottleneck alignment cost between two step restrictions to [lo, hi].

    g stays on the fixed time axis, f's breakpoints may be repositioned.
    State (i, j): the first i g-breakpoints and j f-breakpoints are
    consumed and the active value pair is (g_vals[i], f_vals[j]).  Every
    transition first pays the value gap of the segment it closes; matching
    breakpoints pays their time offset, repositioning an f-breakpoint into
    a g-piece pays its distance to that piece.  Breakpoints sitting
    exactly at ``hi`` are pinned there (the time change fixes the window
    ends), hence the boundary guards.
    """
    g_vals = [float(x) for x in g_vals]
    f_vals = [float(x) for x in f_vals]
    g_cuts = [float(x) for x in g_cuts]
    f_cuts = [float(x) for x in f_cuts]
    q = len(g_cuts)
    p = len(f_cuts)
    inf = float("inf")
    dp = [[inf] * (p + 1) for _ in range(q + 1)]
    dp[0][0] = 0.0
    for i in range(q + 1):
        row = dp[i]
        for j in range(p + 1):
            cur = row[j]
            if cur == inf:
                continue
            pair = abs(g_vals[i] - f_vals[j])
            base = cur if cur >= pair else pair
            if i < q and base < dp[i + 1][j]:
                dp[i + 1][j] = base
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
                    if val < row[j + 1]:
                        row[j + 1] = val
            if i < q and j < p and (g_cuts[i] == hi) == (f_cuts[j] == hi):
                tcost = abs(f_cuts[j] - g_cuts[i])
                val = base if base >= tcost else tcost
                if val < dp[i + 1][j + 1]:
                    dp[i + 1][j + 1] = val
    final_pair = abs(g_vals[q] - f_vals[p])
    res = dp[q][p]
    return res if res >= final_pair else final_pair
