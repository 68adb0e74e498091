"""Empirical estimators for right-censored data.

``L_n`` (empirical distribution of observed times), the at-risk count
``Y_n``, the uncensored sub-distribution ``F_{*n} = N_n / n``, and the
Kaplan-Meier / Nelson-Aalen pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LEFT, RIGHT, CensoredSample, StepFunction


@dataclass(frozen=True, eq=False)
class KmFit:
    """Kaplan-Meier survival curve and the matching cumulative hazard.

    For :func:`kaplan_meier`, ``jump_times`` and ``at_risk_at_jumps`` list
    every uncensored order statistic with its risk-set size ``n - k + 1`` and
    ``hazard_increments`` holds ``1 / (n - k + 1)`` for each. The grouped
    :func:`km_via_product_integral` reports one entry per distinct event
    time instead, with increment ``dN_n / Y_n``. In both cases
    ``survival = cumprod(1 - hazard_increments)`` at the jump times.
    """

    survival: StepFunction
    cumhaz: StepFunction
    jump_times: np.ndarray
    at_risk_at_jumps: np.ndarray
    hazard_increments: np.ndarray

    @property
    def cdf(self) -> StepFunction:
        """``F_hat = 1 - survival`` as a nondecreasing step function."""
        s = self.survival
        return StepFunction(s.knots, -s.jumps, base=1.0 - s.base, side=s.side)

    def table(self):
        """Rows ``(time, survival, cumhaz)`` at each distinct jump time."""
        t = self.survival.knots
        return t, self.survival(t), self.cumhaz(t)


def empirical_L(s: CensoredSample) -> StepFunction:
    """Left-continuous ``L_n(t) = (1/n) #{X_k < t}``."""
    return StepFunction(s.x, np.full(s.n, 1.0 / s.n), base=0.0, side=LEFT)


def at_risk(s: CensoredSample, t):
    """``Y_n(t) = #{k : X_k >= t}``."""
    out = s.n - np.searchsorted(s.x_sorted, t, side="left")
    return int(out) if np.ndim(out) == 0 else out


def sub_dist_empirical(s: CensoredSample) -> StepFunction:
    """Right-continuous ``F_{*n}(t) = (1/n) #{X_k <= t, delta_k = 1}``."""
    xs = s.x[s.delta == 1]
    return StepFunction(xs, np.full(xs.size, 1.0 / s.n), base=0.0, side=RIGHT)


def kaplan_meier(s: CensoredSample) -> KmFit:
    """Order-statistic form of the product-limit estimator.

    ``1 - F_hat(x) = prod_{X_(k) <= x} (1 - delta_(k) / (n - k + 1))`` and
    ``H_hat(x) = sum_{X_(k) <= x} delta_(k) / (n - k + 1)``. Ties follow the
    sample's sorted order (uncensored before censored).
    """
    n = s.n
    xs, ds = s.x_sorted, s.delta_sorted
    at_risk_k = n - np.arange(n)
    inc = ds / at_risk_k
    surv = np.cumprod(1.0 - inc)
    events = ds == 1
    t_ev = xs[events]
    surv_ev = surv[events]
    drops = np.diff(np.concatenate(([1.0], surv_ev)))
    survival = StepFunction(t_ev, drops, base=1.0, side=RIGHT)
    cumhaz = StepFunction(t_ev, inc[events], base=0.0, side=RIGHT)
    return KmFit(survival, cumhaz, t_ev, at_risk_k[events], inc[events])


def km_via_product_integral(s: CensoredSample) -> KmFit:
    """Grouped product-integral ``prod_{s <= x} (1 - dN_n(s) / Y_n(s))``.

    Independent of :func:`kaplan_meier`: works on distinct times with event
    and risk-set counts rather than on the order statistics.
    """
    xs, ds = s.x_sorted, s.delta_sorted
    times, first = np.unique(xs, return_index=True)
    d_n = np.add.reduceat(ds.astype(float), first)
    y_n = s.n - first
    keep = d_n > 0
    times, d_n, y_n = times[keep], d_n[keep], y_n[keep]
    # the jumping observation is itself at risk
    assert np.all(y_n > 0)
    frac = d_n / y_n
    surv = np.cumprod(1.0 - frac)
    drops = np.diff(np.concatenate(([1.0], surv)))
    survival = StepFunction(times, drops, base=1.0, side=RIGHT)
    cumhaz = StepFunction(times, frac, base=0.0, side=RIGHT)
    return KmFit(survival, cumhaz, times, y_n, frac)


def empirical_cdf(values) -> StepFunction:
    """Ordinary right-continuous empirical distribution function."""
    v = np.asarray(values, dtype=float)
    return StepFunction(v, np.full(v.size, 1.0 / v.size), base=0.0, side=RIGHT)
