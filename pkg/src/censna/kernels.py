"""Compactly supported kernels and bandwidth schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

PRESETS = ("epanechnikov", "triangular", "uniform", "biweight")


@dataclass(frozen=True, eq=False)
class Kernel:
    """Piecewise-polynomial probability density on the open interval ``(r, s)``.

    ``pieces`` is a tuple of ``(lo, hi, coeffs)`` covering ``(r, s)`` in order,
    with ``coeffs`` in ascending powers of ``u``. The representation makes
    smoothing a step function an exact finite sum and gives ``dk`` in closed
    form (a density part plus atoms at jumps of ``k``).
    """

    name: str
    pieces: tuple

    def __post_init__(self):
        pieces = tuple((float(lo), float(hi), np.asarray(c, dtype=float))
                       for lo, hi, c in self.pieces)
        if not pieces:
            raise ValueError("kernel needs at least one piece")
        for (_, hi, _), (lo, _, _) in zip(pieces[:-1], pieces[1:]):
            if hi != lo:
                raise ValueError("kernel pieces must be contiguous")
        if any(lo >= hi for lo, hi, _ in pieces):
            raise ValueError("kernel pieces must have positive length")
        object.__setattr__(self, "pieces", pieces)
        if not self.r < 0 < self.s:
            raise ValueError("kernel support (r, s) must satisfy r < 0 < s")

    @property
    def r(self) -> float:
        return self.pieces[0][0]

    @property
    def s(self) -> float:
        return self.pieces[-1][1]

    @property
    def breaks(self) -> np.ndarray:
        return np.array([lo for lo, _, _ in self.pieces] + [self.s])

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        inner = self.breaks[1:-1]
        idx = np.searchsorted(inner, u, side="right")
        for i, (_, _, c) in enumerate(self.pieces):
            sel = (idx == i) & (u > self.r) & (u < self.s)
            if np.any(sel):
                out[sel] = P.polyval(u[sel], c)
        return float(out) if out.ndim == 0 else out

    def derivative(self, u):
        """``k'(u)`` inside the pieces (atoms excluded)."""
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        inner = self.breaks[1:-1]
        idx = np.searchsorted(inner, u, side="right")
        for i, (_, _, c) in enumerate(self.pieces):
            sel = (idx == i) & (u > self.r) & (u < self.s)
            if np.any(sel):
                out[sel] = P.polyval(u[sel], P.polyder(c))
        return out

    def atoms(self):
        """Jumps of ``k`` as ``u`` increases: ``[(location, k(u+) - k(u-)), ...]``."""
        out = []
        left_val = 0.0
        for lo, hi, c in self.pieces:
            jump = float(P.polyval(lo, c)) - left_val
            if jump != 0.0:
                out.append((lo, jump))
            left_val = float(P.polyval(hi, c))
        if left_val != 0.0:
            out.append((self.s, -left_val))
        return out

    def integral(self) -> float:
        return float(sum(P.polyval(hi, P.polyint(c)) - P.polyval(lo, P.polyint(c))
                         for lo, hi, c in self.pieces))

    @property
    def variation(self) -> float:
        """Total variation of ``k`` on the real line."""
        total = sum(abs(j) for _, j in self.atoms())
        for lo, hi, c in self.pieces:
            d = P.polyder(c)
            roots = [float(z.real) for z in (P.polyroots(d) if d.size > 1 else [])
                     if abs(z.imag) < 1e-12 and lo < z.real < hi]
            pts = [lo, *sorted(roots), hi]
            vals = P.polyval(np.array(pts), c)
            total += float(np.abs(np.diff(vals)).sum())
        return total


def kernel_preset(name: str) -> Kernel:
    """Standard kernels on ``(-1, 1)``."""
    if name == "epanechnikov":
        pieces = ((-1, 1, (0.75, 0.0, -0.75)),)
    elif name == "triangular":
        pieces = ((-1, 0, (1.0, 1.0)), (0, 1, (1.0, -1.0)))
    elif name == "uniform":
        pieces = ((-1, 1, (0.5,)),)
    elif name == "biweight":
        c = 15.0 / 16.0
        pieces = ((-1, 1, (c, 0.0, -2 * c, 0.0, c)),)
    else:
        raise ValueError(f"unknown kernel {name!r}; expected one of {PRESETS}")
    return Kernel(name, pieces)


@dataclass(frozen=True)
class BandwidthSchedule:
    """``b_n = c * n ** -beta`` with ``0 < beta < 1/2``.

    The exponent range gives ``b_n -> 0`` while ``1/b_n`` stays
    ``o((n / log n) ** 0.5)``.
    """

    c: float = 1.0
    beta: float = 0.2

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError("bandwidth constant c must be positive")
        if not 0 < self.beta < 0.5:
            raise ValueError(f"bandwidth exponent beta={self.beta} must lie in (0, 1/2)")


def bandwidth(schedule: BandwidthSchedule, n: int) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    return schedule.c * float(n) ** -schedule.beta
