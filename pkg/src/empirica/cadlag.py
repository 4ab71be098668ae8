"""Cadlag step functions and the Skorokhod-topology quantities built on them.

A :class:`CadlagStep` is a right-continuous step function on the real line
with finitely many jumps.  On top of it this module provides

* pointwise evaluation and left limits,
* the oscillation of the function over a half-open interval,
* the sparse-grid modulus ``w_hat(f, m, delta)``,
* a local Skorokhod distance ``j1_local_distance(f, g, m)`` together with
  the weighted whole-line aggregate ``j1_distance``,
* classification of counting-process paths (unit jumps / integer jumps).

The local distance is

    d_m(f, g) = inf over time changes of max(time distortion,
                sup_{t in [-m, m]} |f(lambda(t)) - g(t)|),

where the time changes are increasing piecewise-linear bijections that map
[-m, m] onto itself and are the identity outside.  Restricting to that
class makes d_m an honest pseudometric (symmetric, triangle inequality)
while remaining exactly computable for step functions by a bottleneck
alignment of the two jump sequences.  The trade-off is at the window edge:
a jump of f sitting exactly at +/-m cannot be pushed out of the window.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "CadlagStep",
    "Grid",
    "TimeChange",
    "CountingClass",
    "oscillation",
    "modulus_w_hat",
    "j1_local_distance",
    "j1_distance",
    "classify_counting",
    "sup_distance",
]


class CadlagStep:
    """Right-continuous step function with finitely many jumps.

    value(t) = base_value + sum of jump_sizes at jump_times <= t
    """

    __slots__ = ("jump_times", "jump_sizes", "base_value", "_levels")

    def __init__(self, jump_times, jump_sizes, base_value=0.0):
        times = np.atleast_1d(np.asarray(jump_times, dtype=float))
        sizes = np.atleast_1d(np.asarray(jump_sizes, dtype=float))
        if times.ndim != 1 or times.shape != sizes.shape:
            raise ValueError("jump_times and jump_sizes must be 1-d and equal length")
        if times.size and np.any(np.diff(times) <= 0):
            raise ValueError("jump_times must be strictly increasing")
        if np.any(sizes == 0.0):
            raise ValueError("jump sizes must be nonzero")
        self.jump_times = times
        self.jump_sizes = sizes
        self.base_value = float(base_value)
        levels = np.empty(times.size + 1)
        levels[0] = self.base_value
        np.cumsum(sizes, out=levels[1:])
        levels[1:] += self.base_value
        self._levels = levels

    @classmethod
    def constant(cls, value=0.0):
        return cls(np.empty(0), np.empty(0), value)

    @classmethod
    def indicator(cls, a, height=1.0):
        """height * 1_{[a, inf)}."""
        return cls([a], [height], 0.0)

    @classmethod
    def from_jumps(cls, jump_times, jump_sizes, base_value=0.0):
        """Build a step function, merging jumps at tied times."""
        times = np.asarray(jump_times, dtype=float)
        sizes = np.asarray(jump_sizes, dtype=float)
        if times.size == 0:
            return cls.constant(base_value)
        order = np.argsort(times, kind="stable")
        times = times[order]
        sizes = sizes[order]
        uniq, inverse = np.unique(times, return_inverse=True)
        merged = np.zeros(uniq.size)
        np.add.at(merged, inverse, sizes)
        keep = merged != 0.0
        return cls(uniq[keep], merged[keep], base_value)

    @property
    def n_jumps(self) -> int:
        return int(self.jump_times.size)

    def levels(self) -> np.ndarray:
        """Value sequence [base, after jump 1, ..., after jump k]."""
        return self._levels

    def __call__(self, t):
        idx = np.searchsorted(self.jump_times, t, side="right")
        return self._levels[idx]

    def left_limit(self, t):
        idx = np.searchsorted(self.jump_times, t, side="left")
        return self._levels[idx]

    def shifted(self, dt: float) -> "CadlagStep":
        return CadlagStep(self.jump_times + dt, self.jump_sizes, self.base_value)

    def __repr__(self):
        return (
            f"CadlagStep(base={self.base_value!r}, jumps={self.n_jumps}, "
            f"times={self.jump_times!r})"
        )


def oscillation(f: CadlagStep, a: float, b: float) -> float:
    """sup - inf of f over the half-open interval [a, b).

    Exact via jump enumeration: the values taken on [a, b) are f(a) plus
    the post-jump levels of every jump strictly inside (a, b).
    """
    if not a < b:
        raise ValueError("need a < b")
    i0 = int(np.searchsorted(f.jump_times, a, side="right"))
    i1 = int(np.searchsorted(f.jump_times, b, side="left"))
    vals = f._levels[i0 : i1 + 1]
    return float(vals.max() - vals.min())


def sup_distance(f: CadlagStep, g: CadlagStep, m: float) -> float:
    """sup_{t in [-m, m]} |f(t) - g(t)|, exact via jump enumeration."""
    pts = np.concatenate(
        (
            [-m],
            f.jump_times[(f.jump_times > -m) & (f.jump_times <= m)],
            g.jump_times[(g.jump_times > -m) & (g.jump_times <= m)],
        )
    )
    return float(np.max(np.abs(f(pts) - g(pts))))


@dataclass(frozen=True)
class Grid:
    """A delta-sparse grid -m = s_0 < ... < s_k = m.

    Interior cells (all but the first and the last) must be wider than
    ``delta``; the two boundary cells are exempt.
    """

    points: np.ndarray
    m: int
    delta: float

    def __init__(self, points, m: int, delta: float):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least the two endpoints")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        if pts[0] != -m or pts[-1] != m:
            raise ValueError("grid must start at -m and end at m")
        if delta <= 0:
            raise ValueError("delta must be positive")
        widths = np.diff(pts)
        if widths.size > 2 and np.any(widths[1:-1] <= delta):
            raise ValueError("interior grid cells must be wider than delta")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "delta", float(delta))

    def max_cell_oscillation(self, f: CadlagStep) -> float:
        pts = self.points
        return max(oscillation(f, pts[i], pts[i + 1]) for i in range(pts.size - 1))


class TimeChange:
    """Increasing piecewise-linear bijection of the line, identity outside
    the anchor range.

    Anchors are (u, v) pairs, strictly increasing in both coordinates; the
    map interpolates linearly through them.  For continuity with the
    identity tails, diagonal anchors are prepended/appended when the outer
    anchors are off the diagonal.
    """

    def __init__(self, anchors):
        pts = np.asarray(anchors, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("anchors must be (k, 2)")
        if np.any(np.diff(pts[:, 0]) <= 0) or np.any(np.diff(pts[:, 1]) <= 0):
            raise ValueError("anchors must be strictly increasing in both coordinates")
        rows = [pts]
        if pts[0, 0] != pts[0, 1]:
            lo = min(pts[0, 0], pts[0, 1]) - 1.0
            rows.insert(0, np.array([[lo, lo]]))
        if pts[-1, 0] != pts[-1, 1]:
            hi = max(pts[-1, 0], pts[-1, 1]) + 1.0
            rows.append(np.array([[hi, hi]]))
        pts = np.vstack(rows)
        self.u = pts[:, 0]
        self.v = pts[:, 1]

    def __call__(self, t):
        return self._interp(self.u, self.v, t)

    def inverse(self, s):
        return self._interp(self.v, self.u, s)

    @staticmethod
    def _interp(xs, ys, t):
        t = np.asarray(t, dtype=float)
        out = np.interp(t, xs, ys)
        below = t < xs[0]
        above = t > xs[-1]
        if np.any(below) or np.any(above):
            shift_lo = t - xs[0] + ys[0]
            shift_hi = t - xs[-1] + ys[-1]
            out = np.where(below, shift_lo, np.where(above, shift_hi, out))
        return out if out.ndim else float(out)

    def distortion(self) -> float:
        """sup_t |lambda(t) - t| (attained at an anchor)."""
        return float(np.max(np.abs(self.v - self.u)))

    def apply_to(self, f: CadlagStep) -> CadlagStep:
        """The step function f o lambda (jumps move to lambda^-1(a_j)).

        Rounding can collapse nearby preimages; coinciding jumps merge.
        """
        return CadlagStep.from_jumps(
            self.inverse(f.jump_times), f.jump_sizes, f.base_value
        )


class CountingClass(enum.Enum):
    UNIT_JUMPS = "UNIT_JUMPS"
    INTEGER_JUMPS = "INTEGER_JUMPS"
    NEITHER = "NEITHER"


def classify_counting(f: CadlagStep) -> CountingClass:
    """Classify a path as a unit-jump / integer-jump counting path.

    UNIT_JUMPS: integer base value and every jump equal to +1.
    INTEGER_JUMPS: integer base value and every jump a positive integer.
    """
    if f.base_value != round(f.base_value):
        return CountingClass.NEITHER
    sizes = f.jump_sizes
    if sizes.size == 0:
        return CountingClass.UNIT_JUMPS
    if np.any(sizes <= 0) or np.any(sizes != np.round(sizes)):
        return CountingClass.NEITHER
    if np.all(sizes == 1.0):
        return CountingClass.UNIT_JUMPS
    return CountingClass.INTEGER_JUMPS


# ---------------------------------------------------------------------------
# sparse-grid modulus
# ---------------------------------------------------------------------------


def _window_levels(f: CadlagStep, m: float):
    """Jumps of f inside (-m, m) and the level sequence on [-m, m).

    Returns (jump positions e_1..e_r, levels V_0..V_r) with V_0 = f(-m)
    and V_i the value right after e_i.
    """
    times = f.jump_times
    i0 = int(np.searchsorted(times, -m, side="right"))
    i1 = int(np.searchsorted(times, m, side="left"))
    return times[i0:i1], f._levels[i0 : i1 + 1]


def modulus_w_hat(f: CadlagStep, m: int, delta: float) -> float:
    """Exact infimum over delta-sparse grids of the max cell oscillation.

    Only the jump positions inside (-m, m) matter.  Candidate answers are
    the value spreads of consecutive jump ranges; for each candidate a
    feasibility sweep decides whether some delta-sparse grid keeps every
    cell's oscillation below it.  Cuts sit either exactly at a jump or
    inside a gap; gap cuts are pushed as far left as the strict width
    constraints allow, with infinitesimal slack tracked symbolically so the
    strict inequalities of the grid definition are honoured in the limit.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not delta < 2 * m:
        raise ValueError("need delta < 2m")
    jumps, levels = _window_levels(f, m)
    r = jumps.size
    if r == 0:
        return 0.0

    # spread[i][j] = max - min of levels[i..j] inclusive
    spread = np.zeros((r + 1, r + 1))
    for i in range(r + 1):
        lo = hi = levels[i]
        for j in range(i + 1, r + 1):
            lo = min(lo, levels[j])
            hi = max(hi, levels[j])
            spread[i, j] = hi - lo

    candidates = np.unique(spread[np.triu_indices(r + 1)])

    def feasible(v: float) -> bool:
        return _w_hat_feasible(jumps, spread, float(m), delta, v)

    # binary search the sorted candidate values for the smallest feasible
    lo_i, hi_i = 0, candidates.size - 1
    if feasible(candidates[lo_i]):
        return float(candidates[lo_i])
    # spread over the whole window is always feasible (single-cell grid)
    while hi_i - lo_i > 1:
        mid = (lo_i + hi_i) // 2
        if feasible(candidates[mid]):
            hi_i = mid
        else:
            lo_i = mid
    return float(candidates[hi_i])


def _w_hat_feasible(jumps, spread, m, delta, v):
    """Is there a delta-sparse grid with all cell oscillations <= v?

    Cut sites, in spatial order: gap 0 = (-m, e_1), jump 1, gap 1, ...,
    jump r, gap r = (e_r, m); site id s even -> gap s//2, odd -> jump
    (s+1)//2.  For each site the sweep keeps the leftmost feasible position
    of a cut there, encoded as (real, eps) where eps counts infinitesimal
    offsets above the real part; strict width inequalities then reduce to
    lexicographic comparisons, which is exactly the infimum semantics of
    the grid family.
    """
    r = jumps.size
    INF = (np.inf, 0)
    n_sites = 2 * r + 1

    def start_index(s):
        # value index of the piece a cut at site s opens
        return (s + 1) // 2 if s % 2 else s // 2

    def end_index(s):
        # last value index covered by a cell closed by a cut at site s
        return (s + 1) // 2 - 1 if s % 2 else s // 2

    def enter(s, lb):
        """Leftmost position at site s strictly above the exclusive lower
        bound lb = (real, eps); None when the site cannot host the cut."""
        if s % 2:  # fixed position: the jump time itself
            e = jumps[(s + 1) // 2 - 1]
            return (e, 0) if e > lb[0] else None
        gap = s // 2
        gap_lo = -m if gap == 0 else jumps[gap - 1]
        gap_hi = m if gap == r else jumps[gap]
        cand = max((gap_lo, 1), (lb[0], lb[1] + 1))
        return cand if cand[0] < gap_hi else None

    if spread[0, r] <= v:  # the no-cut grid {-m, m}
        return True

    best = [INF] * n_sites

    # first cut: cell [-m, s_1) is width-exempt
    for s in range(n_sites):
        if spread[0, end_index(s)] > v:
            continue
        pos = enter(s, (-m, 0))
        if pos is not None and pos < best[s]:
            best[s] = pos

    # later cuts close interior cells: width strictly > delta
    for s in range(n_sites):
        if best[s] == INF:
            continue
        i_from = start_index(s)
        lb = (best[s][0] + delta, best[s][1])
        for s2 in range(s + 1, n_sites):
            if spread[i_from, end_index(s2)] > v:
                continue
            pos = enter(s2, lb)
            if pos is not None and pos < best[s2]:
                best[s2] = pos

    # accept: final cell [s_{k-1}, m) is width-exempt
    return any(
        best[s] != INF and spread[start_index(s), r] <= v for s in range(n_sites)
    )


# ---------------------------------------------------------------------------
# local Skorokhod distance
# ---------------------------------------------------------------------------


def _window_pieces(f: CadlagStep, m: float):
    """Breakpoints of f in (-m, m] and piece values on [-m, m].

    Returns (cuts, values): value[i] holds on [cut_i, cut_{i+1}) with the
    conventions cut_0 = -m, cut_{p+1} = just past m.
    """
    times = f.jump_times
    i0 = int(np.searchsorted(times, -m, side="right"))
    i1 = int(np.searchsorted(times, m, side="right"))
    return times[i0:i1], f._levels[i0 : i1 + 1]


def j1_local_distance(f: CadlagStep, g: CadlagStep, m: int) -> float:
    """Local Skorokhod distance on [-m, m] (see module docstring).

    Computed exactly by a bottleneck alignment of the two jump sequences:
    matching jumps costs their time offset, leaving a jump unmatched costs
    the value gap of the pair of piece values it creates, and every
    configuration's cost is the max of its parts.  Dynamic programming over
    the alignment grid yields the infimum.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    f_cuts, f_vals = _window_pieces(f, m)
    g_cuts, g_vals = _window_pieces(g, m)
    return float(
        kernels.j1_alignment_dp(
            np.ascontiguousarray(g_vals),
            np.ascontiguousarray(f_vals),
            np.ascontiguousarray(g_cuts),
            np.ascontiguousarray(f_cuts),
            -float(m),
            float(m),
        )
    )


def j1_distance(f: CadlagStep, g: CadlagStep, m_max: int) -> float:
    """Truncated whole-line aggregate sum_{m=1}^{m_max} 2^-m min(1, d_m)."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    total = 0.0
    for m in range(1, m_max + 1):
        total += 0.5**m * min(1.0, j1_local_distance(f, g, m))
    return total
