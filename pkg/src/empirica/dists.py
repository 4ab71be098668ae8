"""Distribution functions with quantiles, left limits and one-sided
derivatives.

Every distribution exposes pointwise evaluation ``F(t)``, the left limit
``F(t-)``, and the left-continuous generalized inverse

    quantile(u) = inf{t : F(t) >= u},

which makes inversion sampling exact for atoms and flat stretches:
``quantile(u) <= t`` iff ``u <= F(t)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import NonConvergedError

__all__ = [
    "Cdf",
    "C1Derivatives",
    "Uniform01",
    "StandardNormal",
    "PolygonalF",
    "AtomMix",
    "one_sided_derivatives",
    "quantile_transform",
    "sample",
]


@dataclass(frozen=True)
class C1Derivatives:
    """One-sided derivatives of F at tau.

    ``rho1`` is the left derivative taken against the left limit F(tau-),
    so a jump of F at tau is permitted; ``rho2`` is the usual right
    derivative.
    """

    rho1: float
    rho2: float
    tau: float

    def __post_init__(self):
        if self.rho1 < 0 or self.rho2 < 0:
            raise ValueError("one-sided derivatives of a cdf are nonnegative")


class Cdf:
    """Behaviour contract for distribution functions."""

    name = "cdf"

    def __call__(self, t):
        raise NotImplementedError

    def left_limit(self, t):
        raise NotImplementedError

    def quantile(self, u):
        raise NotImplementedError

    def closed_form_derivatives(self, tau: float) -> C1Derivatives | None:
        """Exact one-sided derivatives at tau, when known."""
        return None

    def params(self) -> dict:
        return {}


class Uniform01(Cdf):
    """Uniform distribution on (0, 1)."""

    name = "uniform01"

    def __call__(self, t):
        return np.clip(t, 0.0, 1.0)

    def left_limit(self, t):
        return np.clip(t, 0.0, 1.0)

    def quantile(self, u):
        return np.asarray(u, dtype=float) if np.ndim(u) else float(u)

    def closed_form_derivatives(self, tau):
        rho1 = 1.0 if 0.0 < tau <= 1.0 else 0.0
        rho2 = 1.0 if 0.0 <= tau < 1.0 else 0.0
        return C1Derivatives(rho1, rho2, tau)


class StandardNormal(Cdf):
    """Standard normal cdf via scipy's ndtr/ndtri (double precision)."""

    name = "normal"

    def __call__(self, t):
        return special.ndtr(t)

    def left_limit(self, t):
        return special.ndtr(t)

    def quantile(self, u):
        return special.ndtri(u)

    def closed_form_derivatives(self, tau):
        d = float(np.exp(-0.5 * tau * tau) / np.sqrt(2.0 * np.pi))
        return C1Derivatives(d, d, tau)


class PolygonalF(Cdf):
    """Polygonal cdf through (0,0), (tau, gamma), (1,1) on [0, 1].

    The single kink at tau is the only discontinuity of the density;
    F(tau) = gamma holds exactly.
    """

    name = "polygonal"

    def __init__(self, tau: float, gamma: float):
        if not (0.0 < tau < 1.0 and 0.0 < gamma < 1.0):
            raise ValueError("tau and gamma must lie in (0, 1)")
        self.tau = float(tau)
        self.gamma = float(gamma)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        left = self.gamma * (t / self.tau)
        right = self.gamma + (1.0 - self.gamma) * ((t - self.tau) / (1.0 - self.tau))
        out = np.where(t <= self.tau, left, right)
        out = np.clip(out, 0.0, 1.0)
        return out if out.ndim else float(out)

    def left_limit(self, t):
        return self(t)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        low = u * (self.tau / self.gamma)
        high = self.tau + (u - self.gamma) * ((1.0 - self.tau) / (1.0 - self.gamma))
        out = np.where(u <= self.gamma, low, high)
        return out if out.ndim else float(out)

    def closed_form_derivatives(self, tau):
        slope_lo = self.gamma / self.tau
        slope_hi = (1.0 - self.gamma) / (1.0 - self.tau)

        def slope_at(x, side):
            # side -1: slope on (x - eps, x); side +1: slope on (x, x + eps)
            if x < 0.0 or (x == 0.0 and side < 0):
                return 0.0
            if x > 1.0 or (x == 1.0 and side > 0):
                return 0.0
            if x < self.tau or (x == self.tau and side < 0):
                return slope_lo
            return slope_hi

        return C1Derivatives(slope_at(tau, -1), slope_at(tau, +1), tau)

    def params(self):
        return {"tau": self.tau, "gamma": self.gamma}


class AtomMix(Cdf):
    """A continuous cdf mixed with a single atom.

    F(t) = (1 - weight) * base(t) + weight * 1{t >= atom}.
    """

    name = "atom_mix"

    def __init__(self, base: Cdf, atom: float, weight: float):
        if not 0.0 < weight < 1.0:
            raise ValueError("atom weight must lie in (0, 1)")
        self.base = base
        self.atom = float(atom)
        self.weight = float(weight)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = (1.0 - self.weight) * np.asarray(self.base(t)) + self.weight * (
            t >= self.atom
        )
        return out if out.ndim else float(out)

    def left_limit(self, t):
        t = np.asarray(t, dtype=float)
        out = (1.0 - self.weight) * np.asarray(self.base.left_limit(t)) + (
            self.weight * (t > self.atom)
        )
        return out if out.ndim else float(out)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        w = self.weight
        f_minus = (1.0 - w) * float(np.asarray(self.base(self.atom)))
        f_plus = f_minus + w
        below = self.base.quantile(np.clip(u / (1.0 - w), 0.0, 1.0))
        above = self.base.quantile(np.clip((u - w) / (1.0 - w), 0.0, 1.0))
        out = np.where(u <= f_minus, below, np.where(u <= f_plus, self.atom, above))
        return out if out.ndim else float(out)

    def closed_form_derivatives(self, tau):
        inner = self.base.closed_form_derivatives(tau)
        if inner is None:
            return None
        # the atom contributes a jump, not slope; C.1 uses F(tau-) on the left
        w = 1.0 - self.weight
        return C1Derivatives(w * inner.rho1, w * inner.rho2, tau)

    def params(self):
        return {
            "base": self.base.name,
            **{f"base_{k}": v for k, v in self.base.params().items()},
            "atom": self.atom,
            "weight": self.weight,
        }


def one_sided_derivatives(
    F: Cdf,
    tau: float,
    mode: str = "closed_form",
    rel_tol: float = 1e-6,
) -> C1Derivatives:
    """One-sided derivatives of F at tau.

    ``closed_form`` returns exact values where the implementation knows
    them.  ``numeric`` evaluates difference quotients along h_k = 2^-k
    with a Richardson extrapolation step and requires the last three
    extrapolants to agree to ``rel_tol`` (relative); otherwise it raises
    :class:`NonConvergedError`.  Numeric mode is best effort: the caller
    is responsible for F actually having one-sided derivatives at tau.
    """
    if mode == "closed_form":
        d = F.closed_form_derivatives(tau)
        if d is None:
            raise ValueError(f"{F.name} has no closed-form derivatives")
        return d
    if mode != "numeric":
        raise ValueError("mode must be 'closed_form' or 'numeric'")

    f_tau = float(np.asarray(F(tau)))
    f_tau_minus = float(np.asarray(F.left_limit(tau)))

    def quotients(sign, anchor):
        for k in range(1, 46):
            h = sign * 2.0**-k
            if tau + h == tau:
                return
            yield (float(np.asarray(F(tau + h))) - anchor) / h

    def limit(sign, anchor):
        rich = []
        prev_q = None
        for q in quotients(sign, anchor):
            if prev_q is not None:
                rich.append(2.0 * q - prev_q)
                if len(rich) >= 3:
                    a, b, c = rich[-3:]
                    scale = max(1.0, abs(c))
                    if abs(c - b) <= rel_tol * scale and abs(b - a) <= rel_tol * scale:
                        return max(c, 0.0)
            prev_q = q
        raise NonConvergedError(
            f"difference quotients at tau={tau} did not stabilise (sign={sign:+d})"
        )

    rho2 = limit(+1, f_tau)
    rho1 = limit(-1, f_tau_minus)
    return C1Derivatives(rho1, rho2, tau)


class QuantileTransformed:
    """The path t -> x(F(t)) for a path x on [0, 1]."""

    def __init__(self, x, F: Cdf):
        self.x = x
        self.F = F

    def __call__(self, t):
        return self.x(self.F(t))


def quantile_transform(x, F: Cdf) -> QuantileTransformed:
    """Compose a path on [0, 1] with F, yielding a path on the line."""
    return QuantileTransformed(x, F)


def sample(F: Cdf, n: int, rng) -> np.ndarray:
    """n i.i.d. draws from F by inversion: X_k = quantile(U_k)."""
    u = rng.random(n)
    return np.asarray(F.quantile(u), dtype=float)
