"""Independent brute-force oracles used by the tests.

These deliberately avoid the library's own algorithms: the sparse-grid
modulus is minimised by exhaustive dynamic programming over a concrete
lattice of cut positions (checking the strict width constraints on real
floats), and the change-point estimator is re-derived by scanning a fine
t-lattice.
"""

from __future__ import annotations

import numpy as np

from empirica.cadlag import CadlagStep


def w_hat_lattice_oracle(
    f: CadlagStep,
    m: int,
    delta: float,
    lattice_step: float = 1e-3,
    eta: float = 1e-6,
) -> float:
    """Exhaustive min over grids with cuts on a fine lattice.

    Candidate cut positions: the regular lattice over (-m, m) plus every
    jump time and its +/- eta perturbations.  A DP over candidates (in
    increasing order) minimises the max cell oscillation; width rules are
    checked on the actual float positions, first and last cells exempt.
    """
    lattice = np.arange(-m, m + lattice_step / 2, lattice_step)
    jumps = f.jump_times
    jumps = jumps[(jumps > -m) & (jumps < m)]
    cands = np.unique(
        np.concatenate((lattice, jumps, jumps - eta, jumps + eta))
    )
    cands = cands[(cands > -m) & (cands < m)]
    k = cands.size

    times = f.jump_times
    levels = f.levels()
    # spread of levels[i..j] inclusive, i <= j
    r = times.size
    spread = np.zeros((r + 1, r + 1))
    for i in range(r + 1):
        lo = hi = levels[i]
        for j in range(i + 1, r + 1):
            lo = min(lo, levels[j])
            hi = max(hi, levels[j])
            spread[i, j] = hi - lo

    # oscillation over [a, b): levels[searchsorted(times, a, right) ..
    #                                 searchsorted(times, b, left)]
    ia = np.searchsorted(times, cands, side="right")
    ib = np.searchsorted(times, cands, side="left")
    i_start = int(np.searchsorted(times, -m, side="right"))
    i_end = int(np.searchsorted(times, m, side="left"))

    first_cell = spread[i_start, ib]  # osc([-m, cands[j]))
    last_cell = spread[ia, i_end]  # osc([cands[i], m))
    no_cut = float(spread[i_start, i_end])

    dp = first_cell.copy()
    best = no_cut
    for j in range(k):
        if j > 0:
            feas = (cands[j] - cands[:j]) > delta
            if np.any(feas):
                vals = np.maximum(dp[:j][feas], spread[ia[:j][feas], ib[j]])
                dp[j] = min(dp[j], float(np.min(vals)))
        best = min(best, max(dp[j], float(last_cell[j])))
    return best


def changepoint_scan_oracle(sample, lattice_step: float = 1e-6):
    """argmax of |ecdf(t) - t| over a fine t-lattice in [0, 1]."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    ts = np.arange(0.0, 1.0 + lattice_step / 2, lattice_step)
    ecdf = np.searchsorted(x, ts, side="right") / n
    vals = np.abs(ecdf - ts)
    i = int(np.argmax(vals))
    return float(ts[i]), float(vals[i])


def random_step(rng, max_jumps: int = 5, span: float = 2.5) -> CadlagStep:
    """Random step function for metric-axiom style tests."""
    k = int(rng.integers(0, max_jumps + 1))
    times = np.sort(rng.uniform(-span, span, size=k))
    times = np.unique(times)
    sizes = rng.choice([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0], size=times.size)
    base = float(rng.choice([-1.0, 0.0, 1.0]))
    if times.size == 0:
        return CadlagStep.constant(base)
    return CadlagStep(times, sizes, base)
