"""Terms of the decomposition ``f_n - fbar_n = -I1 + I2 - I3``.

With ``D = F_hat - F = S_T (A1 - A2) + r1n``,

* ``A1(t) = int_0^t (1/Lbar) d[F_{*n} - F_*]``,
* ``A2(t) = int_0^t (Lbar_n - Lbar)/Lbar^2 dF_*``,

each term is ``b^-1 int psi(t) d_t k((x - t)/b)`` with ``psi`` equal to
``S_T A1``, ``S_T A2`` and ``r1n`` respectively. The Stieltjes integrals are
taken numerically: substituting ``u = (x - t)/b`` turns them into
``-b^-1 int_r^s psi(x - b u) dk(u)``, integrated with two-point
Gauss-Legendre on a fixed partition of ``(r, s)`` refined at every jump of
``psi``, plus the atoms of ``dk`` where ``k`` itself jumps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CensoredSample
from .estimators import kaplan_meier, sub_dist_empirical
from .kernels import Kernel
from .oracle import EtaMean, ParametricModel
from .quadrature import gauss_legendre
from .smoothing import smooth_stieltjes, smooth_true_many

DEFAULT_PANELS = 4096


class ProofTerms:
    """Integrands of the three terms for one sample."""

    def __init__(self, s: CensoredSample, model: ParametricModel, kernel: Kernel,
                 b: float, x_max: float, fit=None):
        self.s, self.model, self.kernel, self.b = s, model, kernel, float(b)
        self.fit = kaplan_meier(s) if fit is None else fit
        t_max = x_max - b * kernel.r
        self.eta_mean = EtaMean(s, model, t_max)
        self.jump_times = s.x[(s.delta == 1) & (s.x <= t_max)]

    def _prep(self, t):
        t = np.asarray(t, dtype=float)
        return t, np.maximum(t, 0.0), t >= 0

    def psi1(self, t):
        t, tc, pos = self._prep(t)
        a1 = self.eta_mean.jump_part(tc) - self.model.H(tc)
        return np.where(pos, self.model.S_T(tc) * a1, 0.0)

    def psi2(self, t):
        t, tc, pos = self._prep(t)
        a2 = self.eta_mean.integral_part(tc) - self.model.H(tc)
        return np.where(pos, self.model.S_T(tc) * a2, 0.0)

    def psi3(self, t):
        t, tc, pos = self._prep(t)
        d = (1.0 - self.fit.survival(tc)) - self.model.F(tc)
        mean_eta = self.eta_mean(tc)
        return np.where(pos, d + self.model.S_T(tc) * mean_eta, 0.0)

    def term(self, which: int, x, panels: int = DEFAULT_PANELS, chunk: int = 64):
        """``I_which`` at the points ``x``."""
        psi = {1: self.psi1, 2: self.psi2, 3: self.psi3}[which]
        jumps = None if which == 2 else self.jump_times
        return stieltjes_dk(psi, self.kernel, self.b, x, panels=panels,
                            jump_points=jumps, chunk=chunk)


def stieltjes_dk(psi, kernel: Kernel, b: float, x, panels: int = DEFAULT_PANELS,
                 jump_points=None, chunk: int = 64):
    """``b^-1 int psi(t) d_t k((x - t)/b)`` for each ``x``.

    ``jump_points`` lists the discontinuities of ``psi``; they are added to
    the partition so each panel sees a smooth integrand.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    gx, gw = gauss_legendre(2)
    base = np.union1d(np.linspace(kernel.r, kernel.s, panels + 1), kernel.breaks)
    atoms = kernel.atoms()
    out = np.empty_like(x)

    def panel_nodes(edges):
        lo, hi = edges[:-1], edges[1:]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        u = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
        w = (half[:, None] * gw[None, :]).ravel()
        return u, w * kernel.derivative(u)

    if jump_points is None or len(jump_points) == 0:
        u, wk = panel_nodes(base)
        for i in range(0, x.size, chunk):
            xs = x[i:i + chunk, None]
            acc = psi(xs - b * u[None, :]) @ wk
            for loc, jump in atoms:
                acc += psi(xs[:, 0] - b * loc) * jump
            out[i:i + chunk] = acc
    else:
        jp = np.sort(np.asarray(jump_points, dtype=float))
        for i, xi in enumerate(x):
            lo = np.searchsorted(jp, xi - b * kernel.s, side="right")
            hi = np.searchsorted(jp, xi - b * kernel.r, side="left")
            extra = (xi - jp[lo:hi]) / b
            u, wk = panel_nodes(np.union1d(base, extra))
            acc = float(psi(xi - b * u) @ wk)
            for loc, jump in atoms:
                acc += float(psi(np.array(xi - b * loc))) * jump
            out[i] = acc
    return -out / b


@dataclass(frozen=True)
class DiagnosticRecord:
    """Sups over the evaluation points of the three proof terms."""

    i1_residual: float
    i2: float
    i3: float


def proof_term_diagnostics(s: CensoredSample, model: ParametricModel, kernel: Kernel,
                           b: float, grid, panels: int = DEFAULT_PANELS,
                           terms=(1, 2, 3)) -> DiagnosticRecord:
    """``sup|I1 + (f*_n - E f*_n)/(1 - G)|``, ``sup|I2|`` and ``sup|I3|``.

    Only the terms listed in ``terms`` are computed; the others are NaN.
    """
    pts = getattr(grid, "points", grid)
    pts = np.asarray(pts, dtype=float)
    pt = ProofTerms(s, model, kernel, b, pts.max())
    vals = {}
    if 1 in terms:
        i1 = pt.term(1, pts, panels)
        fstar = smooth_stieltjes(sub_dist_empirical(s), kernel, b, pts)
        e_fstar = smooth_true_many(model, "density-Fstar", kernel, b, pts)
        vals[1] = float(np.max(np.abs(i1 + (fstar - e_fstar) / model.S_Y(pts))))
    if 2 in terms:
        vals[2] = float(np.max(np.abs(pt.term(2, pts, panels))))
    if 3 in terms:
        vals[3] = float(np.max(np.abs(pt.term(3, pts, panels))))
    nan = float("nan")
    return DiagnosticRecord(vals.get(1, nan), vals.get(2, nan), vals.get(3, nan))


def decomposition_check(s: CensoredSample, model: ParametricModel, kernel: Kernel, b: float,
                        points, panels: int = DEFAULT_PANELS):
    """Return ``(f_n - fbar_n, -I1 + I2 - I3)`` at ``points``.

    The left side comes from the exact jump sum and Gauss-Legendre smoothing
    of the true density; the right side from the Stieltjes integrals.
    """
    pts = np.asarray(points, dtype=float)
    pt = ProofTerms(s, model, kernel, b, pts.max())
    lhs = (smooth_stieltjes(pt.fit.cdf, kernel, b, pts)
           - smooth_true_many(model, "density-F", kernel, b, pts))
    rhs = -pt.term(1, pts, panels) + pt.term(2, pts, panels) - pt.term(3, pts, panels)
    return lhs, rhs
