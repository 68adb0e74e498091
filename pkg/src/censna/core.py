"""Censored samples, step functions and evaluation grids."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

RIGHT = "right"
LEFT = "left"


@dataclass(frozen=True, eq=False)
class CensoredSample:
    """Right-censored observations ``(x_i, delta_i)``.

    ``delta_i == 1`` marks an uncensored (observed failure) time. The sorted
    view orders observations by time and, at equal times, places uncensored
    entries before censored ones, so the product form of the Kaplan-Meier
    estimator keeps a censored tie in the risk set.
    """

    x: np.ndarray
    delta: np.ndarray
    sorted_index: np.ndarray = field(repr=False)

    def __init__(self, x, delta):
        x = np.array(x, dtype=float).ravel()
        delta = np.array(delta).ravel()
        if x.size == 0:
            raise ValueError("a censored sample needs at least one observation")
        if x.size != delta.size:
            raise ValueError(
                f"length mismatch: {x.size} times but {delta.size} status values"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("observed times must be finite")
        if np.any(x < 0):
            raise ValueError("observed times must be nonnegative")
        if not np.all((delta == 0) | (delta == 1)):
            raise ValueError("status values must be 0 or 1")
        delta = delta.astype(np.int8)
        # primary key time, secondary key 1 - delta (uncensored first)
        order = np.lexsort((1 - delta, x))
        for name, arr in (("x", x), ("delta", delta), ("sorted_index", order)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def x_sorted(self) -> np.ndarray:
        return self.x[self.sorted_index]

    @property
    def delta_sorted(self) -> np.ndarray:
        return self.delta[self.sorted_index]

    @property
    def censoring_fraction(self) -> float:
        return 1.0 - float(self.delta.mean())

    def __len__(self):
        return self.n

    def __repr__(self):
        return (f"CensoredSample(n={self.n}, "
                f"censored={int(self.n - self.delta.sum())})")


def make_censored_sample(t, y) -> CensoredSample:
    """Build ``X = min(T, Y)`` and ``delta = I(T <= Y)`` from paired times."""
    t = np.asarray(t, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if t.size != y.size:
        raise ValueError(
            f"length mismatch: {t.size} survival times but {y.size} censoring times"
        )
    if t.size == 0:
        raise ValueError("a censored sample needs at least one observation")
    if np.any(t < 0) or np.any(y < 0):
        raise ValueError("survival and censoring times must be nonnegative")
    return CensoredSample(np.minimum(t, y), (t <= y).astype(np.int8))


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Piecewise-constant function ``base + sum of jumps at knots``.

    Right-continuous functions count a jump at ``t`` when ``knot <= t``;
    left-continuous ones only when ``knot < t``. Duplicate knots are merged
    by summing their jumps.
    """

    knots: np.ndarray
    jumps: np.ndarray
    base: float = 0.0
    side: str = RIGHT

    def __init__(self, knots, jumps, base=0.0, side=RIGHT):
        if side not in (RIGHT, LEFT):
            raise ValueError(f"side must be 'right' or 'left', got {side!r}")
        knots = np.asarray(knots, dtype=float).ravel()
        jumps = np.asarray(jumps, dtype=float).ravel()
        if knots.size != jumps.size:
            raise ValueError("knots and jumps must have the same length")
        if knots.size and np.any(np.diff(knots) < 0):
            order = np.argsort(knots, kind="stable")
            knots, jumps = knots[order], jumps[order]
        if knots.size and np.any(np.diff(knots) == 0):
            knots, inverse = np.unique(knots, return_inverse=True)
            jumps = np.bincount(inverse, weights=jumps, minlength=knots.size)
        cum = np.concatenate(([0.0], np.cumsum(jumps)))
        for name, arr in (("knots", knots), ("jumps", jumps), ("_cum", cum)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "base", float(base))
        object.__setattr__(self, "side", side)

    def __call__(self, t):
        return step_eval(self, t)

    def limit(self, t, from_side: str):
        """One-sided limit at ``t`` (``from_side='left'`` gives ``f(t-)``)."""
        mode = "left" if from_side == LEFT else "right"
        idx = np.searchsorted(self.knots, t, side=mode)
        return self.base + self._cum[idx]

    @property
    def total_jump(self) -> float:
        return float(self._cum[-1])

    def __repr__(self):
        return (f"StepFunction({self.knots.size} knots, base={self.base}, "
                f"side={self.side!r})")


def step_eval(f: StepFunction, t):
    """Evaluate ``f`` at ``t`` honouring its continuity side."""
    idx = np.searchsorted(f.knots, t, side="right" if f.side == RIGHT else "left")
    out = f.base + f._cum[idx]
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class EvaluationGrid:
    """Sorted points in ``(0, tau]`` on which sup-norm statistics are taken."""

    tau: float
    points: np.ndarray
    includes_sample_points: bool = False

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        pts = np.asarray(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise ValueError("grid must contain at least one point")
        if np.any(np.diff(pts) < 0) or pts[0] <= 0 or pts[-1] > self.tau:
            raise ValueError("grid points must be sorted and lie in (0, tau]")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size


def make_grid(tau: float, size: int = 2048, sample: CensoredSample | None = None,
              uncensored_only: bool = False) -> EvaluationGrid:
    """Equispaced points on ``(0, tau]``, optionally merged with sample times."""
    if size < 1:
        raise ValueError("grid size must be at least 1")
    pts = tau * np.arange(1, size + 1) / size
    if sample is not None:
        xs = sample.x if not uncensored_only else sample.x[sample.delta == 1]
        xs = xs[(xs > 0) & (xs <= tau)]
        pts = np.union1d(pts, xs)
    return EvaluationGrid(float(tau), pts, sample is not None)


# -- I/O ------------------------------------------------------------------

def read_sample_csv(path) -> CensoredSample:
    """Read a ``time,status`` CSV file.

    Malformed rows raise ``ValueError`` naming the 1-based line number.
    """
    times, status = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["time", "status"]:
            raise ValueError(f"{path}: line 1: expected header 'time,status'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
            try:
                t = float(row[0])
                d = int(row[1])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: cannot parse {row!r}") from None
            if d not in (0, 1):
                raise ValueError(f"{path}: line {lineno}: status must be 0 or 1, got {d}")
            if not np.isfinite(t) or t < 0:
                raise ValueError(f"{path}: line {lineno}: time must be finite and >= 0")
            times.append(t)
            status.append(d)
    if not times:
        raise ValueError(f"{path}: no observations")
    return CensoredSample(times, status)


def write_sample_csv(sample: CensoredSample, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "status"])
        for t, d in zip(sample.x, sample.delta):
            w.writerow([repr(float(t)), int(d)])


def read_sample_json(path) -> CensoredSample:
    doc = json.loads(Path(path).read_text())
    try:
        return CensoredSample(doc["x"], doc["delta"])
    except KeyError as exc:
        raise ValueError(f"{path}: missing field {exc.args[0]!r}") from None


def write_sample_json(sample: CensoredSample, path) -> None:
    doc = {"x": [float(v) for v in sample.x], "delta": [int(d) for d in sample.delta]}
    Path(path).write_text(json.dumps(doc) + "\n")
