"""Exact and empirical characteristic functions of the process pair.

For one time point t the joint characteristic function of the pair
(alpha process value, rescaled-edf value) is known in closed form for
finite n (two cases, split on how the counting window relates to t) and
in the limit.  A brute-force oracle rebuilds the finite-n value from the
single-observation joint law by decomposing the uniform domain of the
inversion sampler into exact pieces; it also covers the t < 0 branch the
closed form does not state.

Complex n-th powers use exp(n log b) (branch-free for integer n) and are
cross-checked against exponentiation by squaring; a disagreement beyond
1e-10 raises :class:`NumericHealthError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dists import C1Derivatives, Cdf
from .errors import CaseUndefinedError, EmptyRunError, NumericHealthError

__all__ = [
    "CharFn",
    "psi_limit",
    "psi_n_exact",
    "psi_n_bruteforce",
    "empirical_cf",
    "factorization_gap",
]

_POW_TOL = 1e-10


@dataclass
class CharFn:
    """An evaluable map (x, y) -> complex with provenance metadata."""

    kind: str
    params: dict
    fn: Callable = field(repr=False)
    se: float | None = None

    def __call__(self, x, y):
        return self.fn(x, y)

    def grid(self, xs, ys) -> np.ndarray:
        """Evaluate on the cartesian grid; shape (len(xs), len(ys))."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        return self(xs[:, None], ys[None, :])


def _pow_by_squaring(b: np.ndarray, n: int) -> np.ndarray:
    result = np.ones_like(b)
    base = b.copy()
    k = n
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def _stable_int_pow(b, n: int):
    """b**n via exp(n log b), cross-checked against squaring."""
    b = np.asarray(b, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(n * np.log(b))
    out = np.where(b == 0, 0.0 + 0.0j, out)
    check = _pow_by_squaring(b, n)
    err = np.max(np.abs(out - check) / np.maximum(1.0, np.abs(out)))
    if err > _POW_TOL:
        raise NumericHealthError(
            f"complex power routes disagree by {err:.3e} (n={n})"
        )
    return out


def psi_limit(F: Cdf, d: C1Derivatives, t: float) -> CharFn:
    """Limit characteristic function at time t.

    t >= 0:  exp(-0.5 F(t)(1-F(t)) x^2 + rho2 t (e^{iy} - 1));
    t <  0:  the rho1 variant with e^{-iy}, from the reflected left side
             (validated against the brute-force oracle in the tests).

    Computed as (gaussian factor) * (poisson factor), so the marginal
    factorization psi(x, 0) psi(0, y) = psi(x, y) holds exactly.
    """
    v = float(np.asarray(F(t)))
    v = v * (1.0 - v)
    if t >= 0:
        rate, sgn = d.rho2 * t, 1.0
    else:
        rate, sgn = d.rho1 * (-t), -1.0

    def fn(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gauss = np.exp(-0.5 * v * x * x)
        poisson = np.exp(rate * (np.exp(1j * sgn * y) - 1.0))
        return gauss * poisson

    return CharFn(
        "exact_limit",
        {"F": F.name, "t": t, "rho1": d.rho1, "rho2": d.rho2, "tau": d.tau},
        fn,
    )


def psi_n_exact(F: Cdf, tau: float, t: float, n: int) -> CharFn:
    """Closed-form finite-n characteristic function (t >= 0 only).

    Case t > tau additionally needs tau + t/n < t; otherwise the case
    split does not cover (tau, t, n) and CASE_UNDEFINED is raised.
    """
    if t < 0:
        raise CaseUndefinedError("closed form covers t >= 0 only")
    if n < 1:
        raise ValueError("n must be >= 1")
    q = float(np.asarray(F(t)))
    u = tau + t / n
    p = float(np.asarray(F(u))) - float(np.asarray(F(tau)))
    if t <= tau:
        window_shift = False
    elif u < t:
        window_shift = True
    else:
        raise CaseUndefinedError(
            f"CASE_UNDEFINED: tau < t but tau + t/n = {u!r} >= t = {t!r} (n={n})"
        )
    sqrt_n = float(np.sqrt(n))

    def fn(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ex = np.exp(1j * x / sqrt_n)
        term = p * (np.exp(1j * y) - 1.0)
        if window_shift:
            term = term * ex
        bracket = np.asarray(1.0 + q * (ex - 1.0) + term, dtype=complex)
        bracket = np.broadcast_to(bracket, np.broadcast(x, y).shape).copy()
        prefactor = np.exp(-1j * x * sqrt_n * q)
        return prefactor * _stable_int_pow(bracket, n)

    return CharFn(
        "exact_n",
        {"F": F.name, "t": t, "tau": tau, "n": n},
        fn,
    )


def _uniform_pieces(breaks):
    """Nonempty pieces (lo, hi] of (0, 1] cut at the given breakpoints."""
    pts = np.unique(np.clip(np.asarray(breaks, dtype=float), 0.0, 1.0))
    pts = np.concatenate(([0.0], pts, [1.0]))
    pts = np.unique(pts)
    return [(pts[i], pts[i + 1]) for i in range(pts.size - 1) if pts[i + 1] > pts[i]]


def psi_n_bruteforce(F: Cdf, tau: float, t: float, n: int, refine: int = 1) -> CharFn:
    """Independent finite-n oracle for any sign of t.

    Works in the uniform domain of the inversion sampler X = quantile(U):
    the two indicators (X <= t and X in the counting window) are constant
    on pieces of (0, 1] cut at {F(t), F(tau), F(tau-), F(tau + t/n)}, so
    the single-observation expectation is an exact finite sum; the joint
    cf is that sum (with the deterministic centring factor) to the n-th
    power, accumulated by plain repeated multiplication.  ``refine``
    subdivides every piece (a no-op mathematically; a cheap self-check).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if refine < 1:
        raise ValueError("refine must be >= 1")
    ft = float(np.asarray(F(t)))
    u_edge = tau + t / n
    if t >= 0:
        win_lo = float(np.asarray(F(tau)))
        win_hi = float(np.asarray(F(u_edge)))
        ysign = 1.0
    else:
        win_lo = float(np.asarray(F(u_edge)))
        win_hi = float(np.asarray(F.left_limit(tau)))
        ysign = -1.0
    pieces = []
    for lo, hi in _uniform_pieces([ft, win_lo, win_hi]):
        step = (hi - lo) / refine
        for k in range(refine):
            a = lo + k * step
            b = hi if k == refine - 1 else lo + (k + 1) * step
            ind1 = 1.0 if b <= ft else 0.0
            ind2 = 1.0 if (a >= win_lo and b <= win_hi) else 0.0
            pieces.append((b - a, ind1, ind2))
    sqrt_n = float(np.sqrt(n))

    def fn(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        phi = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for w, ind1, ind2 in pieces:
            phi += w * np.exp(1j * ((x / sqrt_n) * ind1 + ysign * y * ind2))
        phi *= np.exp(-1j * (x / sqrt_n) * ft)
        out = np.ones_like(phi)
        for _ in range(n):
            out = out * phi
        return out

    return CharFn(
        "exact_n_oracle",
        {"F": F.name, "t": t, "tau": tau, "n": n, "refine": refine},
        fn,
    )


class _EmpiricalCf:
    def __init__(self, a: np.ndarray, b: np.ndarray):
        self.a = a
        self.b = b

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)[..., None]
        y = np.asarray(y, dtype=float)[..., None]
        return np.mean(np.exp(1j * (x * self.a + y * self.b)), axis=-1)


def empirical_cf(a, b) -> CharFn:
    """Sample-average characteristic function of replicated pairs (a, b).

    The reduction is a fixed-order mean over the replication axis, so the
    result does not depend on how replications were scheduled.  The
    reported standard error is the conservative 1/sqrt(M) envelope per
    component.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("a and b must be equal-length vectors")
    if a.size < 2:
        raise EmptyRunError("EMPTY_RUN: need at least 2 replications")
    return CharFn(
        "empirical",
        {"m": int(a.size)},
        _EmpiricalCf(a, b),
        se=1.0 / float(np.sqrt(a.size)),
    )


def factorization_gap(cf: CharFn, xs, ys) -> float:
    """sup over the grid of |cf(x, y) - cf(x, 0) cf(0, y)|."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    joint = cf.grid(xs, ys)
    margx = cf(xs, np.zeros_like(xs))
    margy = cf(np.zeros_like(ys), ys)
    return float(np.max(np.abs(joint - margx[:, None] * margy[None, :])))
