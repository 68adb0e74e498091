"""Negatively associated uniform sequences and censored datasets built from them.

Two constructions are provided besides the independent case:

* ``gaussian-block``: independent blocks of ``m`` equicorrelated standard
  normals with correlation ``rho <= 0``, pushed through the normal CDF.
  Gaussian vectors with nonpositive correlations are negatively associated
  and increasing coordinatewise maps keep that property.
* ``permutation``: a random ordering of the midpoints ``(i - 0.5) / n``, i.e.
  sampling without replacement from a finite population.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import ndtr

from .core import CensoredSample, make_censored_sample

SCHEME_KINDS = ("gaussian-block", "permutation", "iid")
FAMILIES = ("exponential", "weibull", "uniform")


@dataclass(frozen=True)
class NaScheme:
    kind: str = "gaussian-block"
    block_size: int = 4
    rho: float = -1.0 / 6.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}; expected one of {SCHEME_KINDS}")
        if self.kind == "gaussian-block":
            if int(self.block_size) != self.block_size or self.block_size < 2:
                raise ValueError("gaussian-block needs an integer block_size >= 2")
            lower = -1.0 / (self.block_size - 1)
            if not lower <= self.rho <= 0:
                raise ValueError(
                    f"rho={self.rho} outside the feasible range [{lower:.6g}, 0] "
                    f"for block_size={self.block_size}"
                )
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def with_seed(self, seed: int) -> "NaScheme":
        return replace(self, seed=int(seed))


@dataclass(frozen=True)
class ParametricMarginal:
    """Continuous lifetime distribution with closed-form cdf and quantile.

    ``exponential`` takes ``rate``; ``weibull`` takes ``shape`` and ``scale``
    with ``F(x) = 1 - exp(-(x/scale)**shape)``; ``uniform`` takes ``low`` and
    ``high``.
    """

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        expected = {"exponential": 1, "weibull": 2, "uniform": 2}[self.family]
        if len(params) != expected:
            raise ValueError(f"{self.family} takes {expected} parameter(s), got {len(params)}")
        if self.family == "uniform":
            lo, hi = params
            if not 0 <= lo < hi < math.inf:
                raise ValueError("uniform(low, high) needs 0 <= low < high < inf")
        elif not all(0 < p < math.inf for p in params):
            raise ValueError(f"{self.family} parameters must be positive and finite")

    @classmethod
    def exponential(cls, rate):
        return cls("exponential", (rate,))

    @classmethod
    def weibull(cls, shape, scale=1.0):
        return cls("weibull", (shape, scale))

    @classmethod
    def uniform(cls, low, high):
        return cls("uniform", (low, high))

    @property
    def upper(self) -> float:
        """Right endpoint of the support."""
        return self.params[1] if self.family == "uniform" else math.inf

    def cdf(self, x):
        return 1.0 - self.sf(x)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "exponential":
            out = np.exp(-self.params[0] * np.maximum(x, 0.0))
        elif self.family == "weibull":
            k, lam = self.params
            out = np.exp(-np.power(np.maximum(x, 0.0) / lam, k))
        else:
            lo, hi = self.params
            out = np.clip((hi - x) / (hi - lo), 0.0, 1.0)
        return out

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "exponential":
            lam = self.params[0]
            return np.where(x >= 0, lam * np.exp(-lam * np.maximum(x, 0.0)), 0.0)
        if self.family == "weibull":
            k, lam = self.params
            z = np.maximum(x, 0.0) / lam
            with np.errstate(divide="ignore", invalid="ignore"):
                dens = (k / lam) * np.power(z, k - 1) * np.exp(-np.power(z, k))
            return np.where(x >= 0, dens, 0.0)
        lo, hi = self.params
        return np.where((x >= lo) & (x <= hi), 1.0 / (hi - lo), 0.0)

    def cumhaz(self, x):
        """``-log(1 - F(x))``; infinite at and beyond a finite right endpoint."""
        x = np.asarray(x, dtype=float)
        if self.family == "exponential":
            return self.params[0] * np.maximum(x, 0.0)
        if self.family == "weibull":
            k, lam = self.params
            return np.power(np.maximum(x, 0.0) / lam, k)
        with np.errstate(divide="ignore"):
            return -np.log(self.sf(x))

    def hazard(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "exponential":
            return np.where(x >= 0, self.params[0], 0.0)
        if self.family == "weibull":
            k, lam = self.params
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(x >= 0, (k / lam) * np.power(np.maximum(x, 0.0) / lam, k - 1), 0.0)
        lo, hi = self.params
        with np.errstate(divide="ignore"):
            return np.where((x >= lo) & (x < hi), 1.0 / (hi - np.minimum(x, hi)), 0.0)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if self.family == "exponential":
            return -np.log1p(-u) / self.params[0]
        if self.family == "weibull":
            k, lam = self.params
            return lam * np.power(-np.log1p(-u), 1.0 / k)
        lo, hi = self.params
        return lo + (hi - lo) * u

    def to_dict(self) -> dict:
        names = {"exponential": ("rate",), "weibull": ("shape", "scale"),
                 "uniform": ("low", "high")}[self.family]
        return {"family": self.family, **dict(zip(names, self.params))}

    @classmethod
    def from_dict(cls, doc: dict) -> "ParametricMarginal":
        family = doc.get("family")
        try:
            if family == "exponential":
                return cls.exponential(doc["rate"])
            if family == "weibull":
                return cls.weibull(doc["shape"], doc.get("scale", 1.0))
            if family == "uniform":
                return cls.uniform(doc["low"], doc["high"])
        except KeyError as exc:
            raise ValueError(f"{family} marginal is missing parameter {exc.args[0]!r}") from None
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def derive_seeds(master_seed: int, *key: int) -> tuple[int, int]:
    """Split a master seed into independent seeds for the T and Y streams.

    The mixing is numpy's ``SeedSequence`` hash: ``SeedSequence(master_seed,
    spawn_key=key)`` yields two 64-bit words, one per stream. ``key`` lets a
    harness address (sample size, replication) cells without sharing state.
    """
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    a, b = ss.generate_state(2, dtype=np.uint64)
    return int(a), int(b)


def _equicorrelation_root(m: int, rho: float) -> np.ndarray:
    # symmetric square root; handles the singular boundary rho = -1/(m-1)
    cov = np.full((m, m), rho)
    np.fill_diagonal(cov, 1.0)
    w, v = np.linalg.eigh(cov)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def gen_na_uniforms(scheme: NaScheme, n: int) -> np.ndarray:
    """Draw ``n`` negatively associated Uniform(0, 1) variates."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    rng = np.random.default_rng(scheme.seed)
    if scheme.kind == "iid":
        u = rng.random(n)
        # rng.random draws from [0, 1); keep the open interval
        u[u == 0.0] = np.nextafter(0.0, 1.0)
        return u
    if scheme.kind == "permutation":
        return rng.permutation((np.arange(1, n + 1) - 0.5) / n)
    m = scheme.block_size
    blocks = -(-n // m)
    z = rng.standard_normal((blocks, m)) @ _equicorrelation_root(m, scheme.rho)
    u = ndtr(z.ravel()[:n])
    return np.clip(u, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))


def transform_marginal(u, marginal: ParametricMarginal) -> np.ndarray:
    """Map uniforms through the quantile function of ``marginal``."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)) or np.any(np.isnan(u)):
        raise ValueError("uniforms must lie strictly inside (0, 1)")
    return marginal.quantile(u)


def gen_censored_dataset(t_scheme: NaScheme, t_marginal: ParametricMarginal,
                         y_scheme: NaScheme, y_marginal: ParametricMarginal,
                         n: int) -> CensoredSample:
    """Censored sample whose survival and censoring sequences are each NA.

    The two sequences are independent of each other as long as the schemes
    carry different seeds (see :func:`derive_seeds`).
    """
    t = transform_marginal(gen_na_uniforms(t_scheme, n), t_marginal)
    y = transform_marginal(gen_na_uniforms(y_scheme, n), y_marginal)
    return make_censored_sample(t, y)


@dataclass(frozen=True)
class NaDiagnostic:
    estimate: float
    stderr: float
    units: int
    violation: bool

    @property
    def z(self) -> float:
        return self.estimate / self.stderr if self.stderr > 0 else 0.0


def _exceed_prob(scheme: NaScheme, a: float, n: int) -> float:
    if scheme.kind == "permutation":
        return float(np.mean((np.arange(1, n + 1) - 0.5) / n > a))
    return 1.0 - a


def check_negative_association(u, scheme: NaScheme, thresholds=(0.5, 0.5)) -> NaDiagnostic:
    """Monte Carlo estimate of ``cov(I(U_i > a), I(U_j > b))`` for disjoint pairs.

    Pairs are ``(i, i+1)`` with ``i`` stepping by the block size for
    ``gaussian-block`` (so both members share a block) and by 2 otherwise.
    A 2-D ``u`` is read as independent replications (rows); the standard
    error then comes from the spread of per-row pair averages, which is the
    right unit for the permutation scheme where pairs in a row are dependent.
    """
    a, b = (float(v) for v in thresholds)
    u = np.asarray(u, dtype=float)
    stride = scheme.block_size if scheme.kind == "gaussian-block" else 2
    rows = u[None, :] if u.ndim == 1 else u
    n = rows.shape[1]
    i = np.arange(0, n - 1, stride)
    pa, pb = _exceed_prob(scheme, a, n), _exceed_prob(scheme, b, n)
    prod = (rows[:, i] > a).astype(float) * (rows[:, i + 1] > b)
    if u.ndim == 1:
        units = prod.ravel()
    else:
        units = prod.mean(axis=1)
    if units.size < 30:
        raise ValueError(f"need at least 30 independent units for a standard error, got {units.size}")
    est = float(units.mean() - pa * pb)
    se = float(units.std(ddof=1) / math.sqrt(units.size))
    return NaDiagnostic(est, se, int(units.size), est > 3 * se)
