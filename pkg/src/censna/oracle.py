"""Population quantities for a known (F, G) pair.

Everything here is computed from the true model: the sub-distribution
``F_*(t) = int_0^t S_Y dF``, the cumulative hazard ``H = -log S_T``, the
observed-time distribution ``L = 1 - S_T S_Y``, and the influence function
``eta(x, t, delta) = int_0^{min(x, t)} dF_*/Lbar^2 - I(x <= t, delta = 1)/Lbar(x)``
whose sample mean drives the strong representations of the Kaplan-Meier and
cumulative-hazard estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import CensoredSample, EvaluationGrid
from .estimators import kaplan_meier
from .generators import ParametricMarginal
from .quadrature import fixed_gauss

LBAR_FLOOR = 1e-12


@dataclass(frozen=True)
class ParametricModel:
    """Survival distribution ``F`` (of T) and censoring distribution ``G`` (of Y)."""

    T: ParametricMarginal
    Y: ParametricMarginal

    # -- marginals ---------------------------------------------------------
    def F(self, t):
        return self.T.cdf(t)

    def S_T(self, t):
        return self.T.sf(t)

    def f(self, t):
        return self.T.pdf(t)

    def G(self, t):
        return self.Y.cdf(t)

    def S_Y(self, t):
        return self.Y.sf(t)

    def g(self, t):
        return self.Y.pdf(t)

    def L(self, t):
        return 1.0 - self.Lbar(t)

    def Lbar(self, t):
        return self.T.sf(t) * self.Y.sf(t)

    def h(self, t):
        return self.T.hazard(t)

    def H(self, t):
        return self.T.cumhaz(t)

    def sub_density(self, t):
        """Density of ``F_*``: ``S_Y(t) f(t)``."""
        return self.Y.sf(t) * self.T.pdf(t)

    def phi(self, s):
        """Density of ``int dF_* / Lbar^2``: ``f / (S_T^2 S_Y)``."""
        s_t = self.T.sf(s)
        return self.T.pdf(s) / (s_t * s_t * self.Y.sf(s))

    @property
    def tau_L(self) -> float:
        return min(self.T.upper, self.Y.upper)

    @property
    def breakpoints(self) -> tuple:
        """Points where a model density may be discontinuous or kinked."""
        pts = set()
        for m in (self.T, self.Y):
            if m.family == "uniform":
                pts.update(m.params)
        return tuple(sorted(p for p in pts if p > 0))

    @property
    def _both_exponential(self) -> bool:
        return self.T.family == "exponential" and self.Y.family == "exponential"

    def integrate(self, func, a, b, order=32, panels=4):
        """``int_a^b func`` split at the model breakpoints (vectorised in a, b)."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        edges = (-math.inf,) + self.breakpoints + (math.inf,)
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            aa, bb = np.clip(a, lo, hi), np.clip(b, lo, hi)
            if np.all(bb <= aa):
                continue
            total = total + np.where(bb > aa, fixed_gauss(func, aa, np.maximum(bb, aa),
                                                          order=order, panels=panels), 0.0)
        return total

    def Phi(self, u):
        """``int_0^u dF_*(s) / Lbar(s)^2``."""
        u = np.asarray(u, dtype=float)
        if self._both_exponential:
            lt, ly = self.T.params[0], self.Y.params[0]
            return lt * np.expm1((lt + ly) * np.maximum(u, 0.0)) / (lt + ly)
        return self.integrate(self.phi, 0.0, np.maximum(u, 0.0))

    def to_dict(self) -> dict:
        return {"T": self.T.to_dict(), "Y": self.Y.to_dict()}

    @classmethod
    def from_dict(cls, doc: dict) -> "ParametricModel":
        return cls(ParametricMarginal.from_dict(doc["T"]),
                   ParametricMarginal.from_dict(doc["Y"]))


def exponential_model(rate_t=1.0, rate_y=0.5) -> ParametricModel:
    return ParametricModel(ParametricMarginal.exponential(rate_t),
                           ParametricMarginal.exponential(rate_y))


def sub_dist(model: ParametricModel, t):
    """``F_*(t) = P(X <= t, delta = 1) = int_0^t S_Y dF``."""
    t = np.asarray(t, dtype=float)
    if model._both_exponential:
        lt, ly = model.T.params[0], model.Y.params[0]
        out = lt / (lt + ly) * -np.expm1(-(lt + ly) * np.maximum(t, 0.0))
    else:
        out = model.integrate(model.sub_density, 0.0, np.maximum(t, 0.0), panels=8)
    return float(out) if out.ndim == 0 else out


def cum_hazard(model: ParametricModel, t):
    """``H(t) = int_0^t dF_* / S_X = -log(1 - F(t))``."""
    t = np.asarray(t, dtype=float)
    if np.any(model.S_T(t) <= 0):
        raise ValueError("cumulative hazard is infinite where F(t) = 1")
    out = model.H(t)
    return float(out) if out.ndim == 0 else out


def tau_for_quantile(model: ParametricModel, q: float) -> float:
    """The point ``tau`` with ``L(tau) = q``."""
    if not 0 < q < 1:
        raise ValueError("tau quantile must lie in (0, 1)")
    if model._both_exponential:
        return -math.log1p(-q) / (model.T.params[0] + model.Y.params[0])
    target = -math.log1p(-q)

    def excess(t):
        return float(model.T.cumhaz(t) + model.Y.cumhaz(t)) - target

    hi = model.tau_L
    if math.isinf(hi):
        hi = 1.0
        while excess(hi) < 0:
            hi *= 2.0
    else:
        hi = hi * (1 - 1e-15)
    return brentq(excess, 0.0, hi, xtol=1e-14, rtol=1e-14)


def check_tau(model: ParametricModel, tau: float, guard: float = 1e-6) -> None:
    """Reject ``tau`` where ``1 - L(tau)`` is too small for the theory to apply."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    if tau >= model.tau_L or float(model.Lbar(tau)) <= guard:
        raise ValueError(
            f"tau={tau:.6g} gives L(tau) >= 1 - {guard:g}; "
            "the 1/(1 - L) denominators blow up"
        )


def eta(x, t, delta, model: ParametricModel):
    """Influence function ``eta(x, t, delta)`` (broadcasts over its inputs)."""
    x, t, delta = np.broadcast_arrays(np.asarray(x, dtype=float),
                                      np.asarray(t, dtype=float), np.asarray(delta))
    u = np.minimum(x, t)
    if np.any(model.Lbar(u) <= LBAR_FLOOR):
        raise ValueError("1 - L vanishes inside the integration range (beyond tau_L)")
    jump = (x <= t) & (delta == 1)
    with np.errstate(divide="ignore"):
        out = model.Phi(u) - np.where(jump, 1.0 / model.Lbar(np.where(jump, x, 0.0)), 0.0)
    return float(out) if out.ndim == 0 else out


class EtaMean:
    """Fast ``(1/n) sum_i eta(X_i, t, delta_i)`` for many ``t`` at once.

    Splits the sum into ``(1/n) sum_i Phi(min(X_i, t))`` and the jump part
    ``(1/n) sum_{X_i <= t, delta_i = 1} 1/Lbar(X_i)`` and evaluates both from
    prefix sums over the sorted sample. Only observations up to ``t_max``
    enter, so ``Phi`` is never evaluated beyond the range of interest.
    """

    def __init__(self, s: CensoredSample, model: ParametricModel, t_max: float):
        self.n = s.n
        self.model = model
        xs, ds = s.x_sorted, s.delta_sorted
        m = int(np.searchsorted(xs, t_max, side="right"))
        self.xs = xs[:m]
        lbar = model.Lbar(self.xs)
        if m and lbar[-1] <= LBAR_FLOOR:
            raise ValueError("1 - L vanishes before t_max")
        self.cum_phi = np.concatenate(([0.0], np.cumsum(model.Phi(self.xs))))
        jumps = np.where(ds[:m] == 1, 1.0 / lbar, 0.0)
        self.cum_jump = np.concatenate(([0.0], np.cumsum(jumps)))

    def integral_part(self, t):
        """``(1/n) sum_i Phi(min(X_i, t))``, i.e. ``int_0^t Lbar_n dF_*/Lbar^2``."""
        t = np.asarray(t, dtype=float)
        k = np.searchsorted(self.xs, t, side="right")
        return (self.cum_phi[k] + (self.n - k) * self.model.Phi(t)) / self.n

    def jump_part(self, t, side="right"):
        """``int_0^t dF_{*n} / Lbar``; ``side='left'`` excludes atoms at ``t``."""
        k = np.searchsorted(self.xs, t, side=side)
        return self.cum_jump[k] / self.n

    def __call__(self, t, side="right"):
        return self.integral_part(t) - self.jump_part(t, side)


def remainder_r(s: CensoredSample, model: ParametricModel, which: int,
                grid: EvaluationGrid, fit=None, side="right"):
    """The remainders ``r1n`` and ``r2n`` on the grid.

    ``which=1``: ``F_hat(t) - F(t) + S_T(t) * mean_eta(t)``;
    ``which=2``: ``H_hat(t) - H(t) + mean_eta(t)``. ``side='left'`` evaluates
    the left limits of the step parts.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    t = grid.points
    em = EtaMean(s, model, t[-1])
    mean_eta = em(t, side=side)
    fit = kaplan_meier(s) if fit is None else fit
    if which == 1:
        est = 1.0 - fit.survival.limit(t, side)
        return est - model.F(t) + model.S_T(t) * mean_eta
    est = fit.cumhaz.limit(t, side)
    return est - model.H(t) + mean_eta


def eta_mean_sides(s: CensoredSample, model: ParametricModel, t):
    """Both sides of ``-(1/n) sum eta = int dF_{*n}/Lbar - int (Lbar_n/Lbar^2) dF_*``.

    The left side evaluates :func:`eta` observation by observation; the
    right side integrates ``Lbar_n * dF_*/Lbar^2`` segment by segment between
    order statistics with Gauss-Legendre quadrature of the density, never
    touching the antiderivative used by :func:`eta`.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    lhs = -np.mean(eta(s.x[None, :], t[:, None], s.delta[None, :], model), axis=1)

    xs, ds = s.x_sorted, s.delta_sorted
    n = s.n
    lbar = model.Lbar(xs)
    with np.errstate(divide="ignore"):
        atoms = np.where(ds == 1, 1.0 / np.where(ds == 1, lbar, 1.0), 0.0)
    jump_cum = np.concatenate(([0.0], np.cumsum(atoms))) / n

    lefts = np.concatenate(([0.0], xs[:-1]))
    t_max = t.max()
    seg_hi = np.minimum(xs, t_max)
    seg_lo = np.minimum(lefts, t_max)
    seg = model.integrate(model.phi, seg_lo, seg_hi, order=24, panels=2)
    weights = (n - np.arange(n)) / n
    seg_cum = np.concatenate(([0.0], np.cumsum(weights * seg)))

    k = np.searchsorted(xs, t, side="left")   # number of X_(i) < t
    last_lo = np.where(k > 0, xs[np.maximum(k - 1, 0)], 0.0)
    partial = model.integrate(model.phi, last_lo, t, order=24, panels=2)
    integral = seg_cum[k] + (n - k) / n * partial
    kr = np.searchsorted(xs, t, side="right")
    rhs = jump_cum[kr] - integral
    return lhs, rhs
