"""Kernel smoothing of step functions and of the true model.

``f_n``, ``h_n`` and ``f*_n`` are kernel smooths of the jumps of ``F_hat``,
``H_hat`` and ``F_{*n}``; their population counterparts integrate the kernel
against the true ``dF``, ``dF_*`` or ``dH``.
"""

from __future__ import annotations

from math import comb

import numpy as np
from numpy.polynomial import polynomial as P

from .core import CensoredSample, EvaluationGrid, StepFunction
from .estimators import kaplan_meier, sub_dist_empirical
from .kernels import Kernel
from .oracle import ParametricModel, check_tau
from .quadrature import DEFAULT_BUDGET, DEFAULT_TOL, adaptive_simpson, fixed_gauss

TARGETS = ("density-F", "density-Fstar", "hazard-H")


def smooth_stieltjes(step: StepFunction, kernel: Kernel, b: float, t):
    """``b^-1 sum_j k((t - x_j) / b) * jump_j`` over the knots of ``step``.

    Exact for any step function. Works piece by piece on the kernel: for a
    polynomial piece the window sum expands into prefix sums of
    ``jump * z**p`` (``z`` the rescaled knot). Evaluation points are handled in
    sorted chunks a few bandwidths wide, with ``z`` centred on each chunk, so
    the powers stay small and the expansion loses no accuracy; the total cost
    is ``O((knots + points) log knots)``.
    """
    if not b > 0:
        raise ValueError("bandwidth must be positive")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    x, d = step.knots, step.jumps
    out = np.zeros(t_arr.shape)
    if x.size and t_arr.size:
        flat = t_arr.ravel()
        order = np.argsort(flat, kind="stable")
        ts = flat[order]
        res = np.empty_like(ts)
        width = _CHUNK_WIDTH * b
        i = 0
        while i < ts.size:
            j = int(np.searchsorted(ts, ts[i] + width, side="right"))
            res[i:j] = _smooth_chunk(x, d, kernel, b, ts[i:j])
            i = j
        out.ravel()[order] = res
    return float(out.ravel()[0]) if np.ndim(t) == 0 else out


_CHUNK_WIDTH = 4.0


def _smooth_chunk(x, d, kernel, b, t):
    center = 0.5 * (t[0] + t[-1])
    lo_i = int(np.searchsorted(x, t[0] - b * kernel.s, side="left"))
    hi_i = int(np.searchsorted(x, t[-1] - b * kernel.r, side="right"))
    z = (x[lo_i:hi_i] - center) / b
    dd = d[lo_i:hi_i]
    w = (t - center) / b
    out = np.zeros_like(w)
    if z.size == 0:
        return out
    deg = max(c.size for _, _, c in kernel.pieces) - 1
    powers = np.ones_like(z)
    moments = []
    for p in range(deg + 1):
        moments.append(np.concatenate(([0.0], np.cumsum(dd * powers))))
        powers = powers * z
    last = len(kernel.pieces) - 1
    for i, (lo, hi, coeffs) in enumerate(kernel.pieces):
        # u = w - z; first piece u in (r, hi], inner (lo, hi], last (lo, s)
        stop = np.searchsorted(z, w - lo, side="left")
        side = "right" if i == last else "left"
        start = np.searchsorted(z, w - hi, side=side)
        start = np.minimum(start, stop)
        for m, a_m in enumerate(coeffs):
            if a_m == 0.0:
                continue
            term = np.zeros_like(w)
            for p in range(m + 1):
                mp = moments[p][stop] - moments[p][start]
                term += comb(m, p) * (-1.0) ** p * w ** (m - p) * mp
            out += a_m * term
    return out / b


def _target_density(model: ParametricModel, target: str):
    if target == "density-F":
        return model.f
    if target == "density-Fstar":
        return model.sub_density
    if target == "hazard-H":
        return model.h
    raise ValueError(f"unknown smoothing target {target!r}; expected one of {TARGETS}")


def _windows(model, kernel, b, t, lo_u, hi_u):
    # x-range of kernel piece (lo_u, hi_u) at point t, clipped to [0, tau_L]
    a = np.clip(t - b * hi_u, 0.0, model.tau_L)
    c = np.clip(t - b * lo_u, 0.0, model.tau_L)
    return a, c


def smooth_true(model: ParametricModel, target: str, kernel: Kernel, b: float, t: float,
                tol: float = DEFAULT_TOL, max_nodes: int = DEFAULT_BUDGET) -> float:
    """``b^-1 int k((t - x)/b) dens(x) dx`` by adaptive Simpson.

    ``dens`` is ``f`` for ``density-F``, ``S_Y f`` for ``density-Fstar``
    (which also equals ``E f*_n``) and ``h`` for ``hazard-H``. The kernel
    window is split at kernel and model breakpoints so every panel sees a
    smooth integrand.
    """
    if not b > 0:
        raise ValueError("bandwidth must be positive")
    dens = _target_density(model, target)
    t = float(t)
    cuts = {float(v) for v in np.clip(t - b * kernel.breaks, 0.0, model.tau_L)}
    cuts.update(p for p in model.breakpoints if t - b * kernel.s < p < t - b * kernel.r)
    cuts = sorted(cuts)

    def integrand(x):
        return float(kernel((t - x) / b)) * float(dens(x))

    total = 0.0
    budget = max_nodes
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        # nudge off the cut points so one-sided kernel values are used
        eps = 1e-13 * max(1.0, abs(hi))
        total += adaptive_simpson(integrand, lo + eps, hi - eps,
                                  tol=tol / max(len(cuts) - 1, 1), max_nodes=budget)
    return total / b


def smooth_true_many(model: ParametricModel, target: str, kernel: Kernel, b: float, t,
                     order: int = 24):
    """Vectorised :func:`smooth_true` using Gauss-Legendre on each kernel piece."""
    dens = _target_density(model, target)
    t = np.asarray(t, dtype=float)
    tt = t[..., None]
    out = np.zeros_like(t)
    for lo_u, hi_u, coeffs in kernel.pieces:
        a, c = _windows(model, kernel, b, t, lo_u, hi_u)

        def integrand(x, coeffs=coeffs):
            return P.polyval((tt - x) / b, coeffs) * dens(x)

        if model.breakpoints:
            out += model.integrate(integrand, a, c, order=order, panels=1)
        else:
            out += np.where(c > a, fixed_gauss(integrand, a, c, order=order), 0.0)
    return out / b


def kernel_curves(s: CensoredSample, kernel: Kernel, b: float, t):
    """``(f_n, h_n, f*_n)`` at the points ``t``."""
    fit = kaplan_meier(s)
    return (smooth_stieltjes(fit.cdf, kernel, b, t),
            smooth_stieltjes(fit.cumhaz, kernel, b, t),
            smooth_stieltjes(sub_dist_empirical(s), kernel, b, t))


def centered_curve(s: CensoredSample, model: ParametricModel, which: str, kernel: Kernel,
                   b: float, points, centering: str = "density-F", fit=None):
    """Pointwise centred statistic whose sup is :func:`theorem_centered_statistic`."""
    if which not in ("density", "hazard"):
        raise ValueError("which must be 'density' or 'hazard'")
    if centering not in ("density-F", "density-Fstar"):
        raise ValueError("centering must be 'density-F' or 'density-Fstar'")
    fit = kaplan_meier(s) if fit is None else fit
    pts = np.asarray(points, dtype=float)
    fstar_n = smooth_stieltjes(sub_dist_empirical(s), kernel, b, pts)
    e_fstar = smooth_true_many(model, "density-Fstar", kernel, b, pts)
    if which == "density":
        est = smooth_stieltjes(fit.cdf, kernel, b, pts)
        bar = smooth_true_many(model, centering, kernel, b, pts)
        denom = model.S_Y(pts)
    else:
        est = smooth_stieltjes(fit.cumhaz, kernel, b, pts)
        bar = smooth_true_many(model, "hazard-H", kernel, b, pts)
        denom = model.Lbar(pts)
    return est - bar - (fstar_n - e_fstar) / denom


def theorem_centered_statistic(s: CensoredSample, model: ParametricModel, which: str,
                               kernel: Kernel, b: float, grid: EvaluationGrid,
                               centering: str = "density-F") -> float:
    """Sup over the grid of the centred density or hazard smoother.

    density: ``|f_n - fbar_n - (f*_n - E f*_n) / (1 - G)|``;
    hazard: ``|h_n - hbar_n - (f*_n - E f*_n) / (1 - L)|``.
    ``centering`` picks ``fbar_n``: the kernel smooth of ``dF`` (default) or
    of ``dF_*``.
    """
    check_tau(model, grid.tau)
    return float(np.max(np.abs(centered_curve(s, model, which, kernel, b, grid.points,
                                              centering))))
