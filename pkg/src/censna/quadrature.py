"""Numerical integration used by the smoothers and the population oracle."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

DEFAULT_TOL = 1e-8
DEFAULT_BUDGET = 100_000


class QuadratureError(RuntimeError):
    """Adaptive integration ran out of function evaluations."""

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error estimate={error:.3g})")
        self.estimate = estimate
        self.error = error


def adaptive_simpson(func, a, b, tol=DEFAULT_TOL, max_nodes=DEFAULT_BUDGET):
    """Integrate a scalar function over ``[a, b]`` to absolute tolerance ``tol``.

    Uses the classic Simpson bisection with Richardson correction and a
    tolerance split between halves. Raises :class:`QuadratureError` once
    more than ``max_nodes`` evaluations would be needed.
    """
    a, b = float(a), float(b)
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    fa, fm, fb = func(a), func(0.5 * (a + b)), func(b)
    nodes = 3
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    while stack:
        lo, hi, flo, fmid, fhi, s_whole, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = func(lm), func(rm)
        nodes += 2
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - s_whole
        if abs(delta) <= 15.0 * eps or depth >= 50 or hi - lo <= 4 * np.spacing(mid):
            total += left + right + delta / 15.0
            continue
        if nodes >= max_nodes:
            raise QuadratureError("adaptive Simpson exceeded its node budget",
                                  sign * (total + left + right), abs(delta) / 15.0)
        stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
        stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    return sign * total


@lru_cache(maxsize=None)
def gauss_legendre(order: int):
    """Nodes and weights on ``[-1, 1]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def fixed_gauss(func, a, b, order=32, panels=1):
    """Vectorised composite Gauss-Legendre over many intervals at once.

    ``a`` and ``b`` broadcast against each other; ``func`` receives an array
    of shape ``a.shape + (panels * order,)``. Suited to smooth integrands
    whose breakpoints are already interval ends.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    x, w = gauss_legendre(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 / panels
    centers = 0.5 * (edges[:-1] + edges[1:])
    frac = (centers[:, None] + half * x[None, :]).ravel()
    weights = np.tile(w, panels) * half
    span = (b - a)[..., None]
    pts = a[..., None] + span * frac
    return (func(pts) * weights).sum(axis=-1) * (b - a)
