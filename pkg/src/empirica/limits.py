"""Samplers for the limit pair: bridge fidis and two-sided Poisson paths.

The Gaussian limit is sampled exactly at finitely many time points from
its covariance F(s)(1 - F(t)) (s <= t); no path discretisation is
involved.  The two-sided Poisson process glues two independent Poisson
processes at 0, rate ``rho1`` to the left and ``rho2`` to the right; the
reflected left side is kept right-continuous (value at a jump is the
upper one), which leaves all finite-dimensional laws unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .cadlag import CadlagStep
from .dists import C1Derivatives, Cdf
from .errors import FactorizationError

__all__ = [
    "BrownianBridgeFidi",
    "TwoSidedPoissonPath",
    "N0MarginalLaw",
    "bridge_covariance",
    "sample_bridge_fidi",
    "sample_n0_path",
    "n0_fidi_law",
]


def bridge_covariance(F: Cdf, times) -> np.ndarray:
    """Sigma[i, j] = F(t_i)(1 - F(t_j)) for t_i <= t_j, symmetric PSD."""
    u = np.asarray(F(np.asarray(times, dtype=float)), dtype=float)
    return np.minimum.outer(u, u) * (1.0 - np.maximum.outer(u, u))


@dataclass
class BrownianBridgeFidi:
    """Finite-dimensional law of the time-transformed bridge at ``times``."""

    times: np.ndarray
    F: Cdf
    cov: np.ndarray = field(init=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be increasing")
        self.cov = bridge_covariance(self.F, self.times)


def _sqrt_factor(cov: np.ndarray, psd_tol: float = 1e-8):
    """Square-root factor of a PSD matrix; eigenvalue clipping on failure.

    Returns (L, repaired) with cov ~= L L^T.  Eigenvalues below
    -psd_tol * max_eig raise FactorizationError instead of being clipped.
    """
    try:
        return np.linalg.cholesky(cov), False
    except np.linalg.LinAlgError:
        pass
    w, q = np.linalg.eigh(cov)
    scale = max(float(w[-1]), 0.0)
    if float(w[0]) < -psd_tol * max(scale, 1e-300):
        raise FactorizationError(
            f"FACTORIZATION_FAILURE: min eigenvalue {w[0]:.3e} below tolerance"
        )
    w = np.clip(w, 0.0, None)
    return q * np.sqrt(w), True


def sample_bridge_fidi(
    F: Cdf, times, rng, reps: int | None = None, return_info: bool = False
):
    """Draw from N(0, Sigma) with Sigma the bridge covariance at ``times``.

    Coordinates with zero variance (F(t) in {0, 1}) are exactly 0.  When
    Sigma is numerically singular the factor falls back to eigenvalue
    clipping at 0; ``return_info`` exposes whether that repair ran.
    """
    times = np.asarray(times, dtype=float)
    cov = bridge_covariance(F, times)
    L, repaired = _sqrt_factor(cov)
    squeeze = reps is None
    m = 1 if squeeze else int(reps)
    z = rng.standard_normal((m, times.size))
    out = z @ L.T
    out[:, np.diag(cov) == 0.0] = 0.0
    if squeeze:
        out = out[0]
    return (out, repaired) if return_info else out


@dataclass
class TwoSidedPoissonPath:
    """A sampled two-sided Poisson path on [-horizon, horizon].

    ``left_arrivals`` are the distances of the left-side arrival times
    from 0 (positive reals); the path jumps +1 at each -a and at each
    right arrival.  The step representation is right-continuous.
    """

    rho1: float
    rho2: float
    horizon: float
    left_arrivals: np.ndarray
    right_arrivals: np.ndarray
    step: CadlagStep = field(init=False)

    def __post_init__(self):
        left = np.sort(np.asarray(self.left_arrivals, dtype=float))
        right = np.sort(np.asarray(self.right_arrivals, dtype=float))
        times = np.concatenate((-left[::-1], right))
        self.step = CadlagStep.from_jumps(
            times, np.ones(times.size), -float(left.size)
        )

    def __call__(self, t):
        return self.step(t)

    def right_path(self) -> CadlagStep:
        """Restriction to t >= 0 (a counting process started at 0)."""
        return CadlagStep.from_jumps(
            self.right_arrivals, np.ones(self.right_arrivals.size), 0.0
        )


def _arrival_times(rate: float, horizon: float, rng) -> np.ndarray:
    """Cumulative exponential(rate) arrivals up to ``horizon``."""
    if rate == 0.0:
        return np.empty(0)
    block = max(8, int(2.0 * rate * horizon) + 8)
    gaps = rng.exponential(1.0 / rate, size=block)
    total = np.cumsum(gaps)
    while total[-1] <= horizon:
        gaps = rng.exponential(1.0 / rate, size=block)
        total = np.concatenate((total, total[-1] + np.cumsum(gaps)))
    return total[total <= horizon]


def sample_n0_path(d: C1Derivatives, horizon: float, rng) -> TwoSidedPoissonPath:
    """Sample the two-sided Poisson path on [-horizon, horizon].

    Right side first, then left, from the same stream; rate 0 yields a
    flat side.
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    right = _arrival_times(d.rho2, horizon, rng)
    left = _arrival_times(d.rho1, horizon, rng)
    return TwoSidedPoissonPath(d.rho1, d.rho2, float(horizon), left, right)


@dataclass(frozen=True)
class N0MarginalLaw:
    """Marginal law of the two-sided Poisson process at a fixed time.

    Poisson(rho2 t) on {0, 1, ...} for t >= 0; for t < 0 the law of
    -Poisson(rho1 |t|) on {0, -1, ...}.
    """

    rate: float
    sign: int

    def pmf(self, k):
        k = np.asarray(k)
        vals = stats.poisson.pmf(self.sign * k, self.rate)
        out = np.where(self.sign * k >= 0, vals, 0.0)
        return out if out.ndim else float(out)

    def support(self, upto: int) -> np.ndarray:
        return self.sign * np.arange(upto + 1)


def n0_fidi_law(d: C1Derivatives, t: float) -> N0MarginalLaw:
    if t >= 0:
        return N0MarginalLaw(d.rho2 * t, +1)
    return N0MarginalLaw(d.rho1 * (-t), -1)
