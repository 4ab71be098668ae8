"""The empirical cdf and the two processes built from a sample.

For a sample X_1..X_n with empirical cdf ecdf_n:

* alpha process: sqrt(n) * (ecdf_n(t) - F(t)),
* rescaled edf around tau:
      beta_n(t) = #{k : X_k in (tau, tau + t/n]}        for t >= 0,
      beta_n(t) = -#{k : X_k in (tau + t/n, tau)}       for t < 0.

Counting is exact integer arithmetic on the sorted sample; an atom at tau
belongs to neither branch of beta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cadlag import CadlagStep
from .dists import Cdf
from .errors import EmptySampleError

__all__ = [
    "EmpiricalCdf",
    "AlphaProcess",
    "BetaProcess",
    "Fidi",
    "make_alpha",
    "make_beta",
    "extract_fidi",
]


class EmpiricalCdf:
    """ecdf_n(t) = #{k : X_k <= t} / n, right-continuous."""

    def __init__(self, sample):
        x = np.asarray(sample, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise EmptySampleError("EMPTY_SAMPLE: need a nonempty 1-d sample")
        self.sorted = np.sort(x)
        self.n = int(x.size)

    def count_leq(self, t):
        return np.searchsorted(self.sorted, t, side="right")

    def count_lt(self, t):
        return np.searchsorted(self.sorted, t, side="left")

    def __call__(self, t):
        return self.count_leq(t) / self.n

    def left_limit(self, t):
        return self.count_lt(t) / self.n

    def as_step(self) -> CadlagStep:
        """The ecdf as a step function: jumps of size (multiplicity)/n."""
        return CadlagStep.from_jumps(
            self.sorted, np.full(self.n, 1.0 / self.n), 0.0
        )


class AlphaProcess:
    """alpha_n(t) = sqrt(n) (ecdf_n(t) - F(t)), pointwise evaluable.

    Kept as (step part, continuous drift) rather than materialised as a
    step function, since F need not be a step function.
    """

    def __init__(self, ecdf: EmpiricalCdf, F: Cdf):
        self.ecdf = ecdf
        self.F = F
        self.n = ecdf.n
        self._sqrt_n = float(np.sqrt(self.n))

    def __call__(self, t):
        return self._sqrt_n * (self.ecdf(t) - np.asarray(self.F(t)))

    def at(self, times) -> np.ndarray:
        return np.asarray(self(np.asarray(times, dtype=float)), dtype=float)


class BetaProcess:
    """The rescaled edf around tau (F-independent construction).

    Evaluation follows the defining display exactly, with the window
    endpoint tau + t/n computed in double precision; paths are exposed as
    step functions with jumps at n (X_k - tau).
    """

    def __init__(self, sample, tau: float, n: int):
        x = np.asarray(sample, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise EmptySampleError("EMPTY_SAMPLE: need a nonempty 1-d sample")
        if n != x.size:
            raise ValueError("n must equal the sample size")
        self.sorted = np.sort(x)
        self.tau = float(tau)
        self.n = int(n)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        u = self.tau + t / self.n
        cnt_u = np.searchsorted(self.sorted, u, side="right")
        cnt_tau_leq = np.searchsorted(self.sorted, self.tau, side="right")
        cnt_tau_lt = np.searchsorted(self.sorted, self.tau, side="left")
        pos = cnt_u - cnt_tau_leq
        # open interval (tau + t/n, tau): atoms at either endpoint excluded
        neg = cnt_u - cnt_tau_lt
        neg = np.where(u == self.tau, 0, neg)
        out = np.where(t >= 0, pos, neg).astype(float)
        return out if out.ndim else float(out)

    def at(self, times) -> np.ndarray:
        return np.asarray(self(np.asarray(times, dtype=float)), dtype=float)

    def as_step(self) -> CadlagStep:
        """Whole-line path with jumps at n (X_k - tau); ties merge."""
        x = self.sorted[self.sorted != self.tau]
        times = self.n * (x - self.tau)
        left = int(np.sum(times < 0))
        return CadlagStep.from_jumps(times, np.ones(times.size), -float(left))

    def nonneg_restriction(self) -> CadlagStep:
        """The t >= 0 part of the path (a counting process from 0)."""
        x = self.sorted[self.sorted > self.tau]
        times = self.n * (x - self.tau)
        return CadlagStep.from_jumps(times, np.ones(times.size), 0.0)


def make_alpha(sample, F: Cdf) -> AlphaProcess:
    return AlphaProcess(EmpiricalCdf(sample), F)


def make_beta(sample, tau: float, n: int) -> BetaProcess:
    return BetaProcess(sample, tau, n)


@dataclass(frozen=True)
class Fidi:
    """A finite-dimensional sample: time points plus one row per replication."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != self.times.size:
            raise ValueError("values must be (replications, len(times))")


def extract_fidi(processes, times) -> Fidi:
    """Evaluate each process at the given (increasing) times; one row each."""
    times = np.asarray(times, dtype=float)
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValueError("times must be increasing")
    rows = np.empty((len(processes), times.size))
    for i, proc in enumerate(processes):
        rows[i] = np.asarray(proc(times), dtype=float)
    return Fidi(times, rows)
