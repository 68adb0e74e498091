"""Monte Carlo rate experiments.

An experiment draws ``R`` censored NA datasets for each sample size in
``n_grid``, computes one or more sup-norm statistics per dataset, and
summarises how the statistics shrink relative to the claimed rate
``rho(n) = (log n / n) ** 0.5`` (or ``rho(n) / b_n`` for the kernel
smoothers). "Almost surely O(rho)" is checked through two finite-sample
surrogates: the log-log slope of the median statistic against ``rho``, and
the growth of the 0.9-quantile ratio ``statistic / rho`` over ``n_grid``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import linregress

from .core import make_grid
from .diagnostics import DEFAULT_PANELS, proof_term_diagnostics
from .estimators import empirical_L, kaplan_meier, sub_dist_empirical
from .generators import NaScheme, derive_seeds, gen_censored_dataset
from .kernels import BandwidthSchedule, bandwidth, kernel_preset
from .oracle import (EtaMean, ParametricModel, check_tau, exponential_model, sub_dist,
                     tau_for_quantile)
from .smoothing import centered_curve

LEMMA_STATS = ("lemma1-F", "lemma1-H", "lemma3-Fstar", "lemma3-L", "lemma2-r1", "lemma2-r2")
KERNEL_STATS = ("theorem1", "theorem2", "diag-I1", "diag-I2", "diag-I3")
STATISTICS = LEMMA_STATS + KERNEL_STATS
# statistics whose claimed rate carries the extra 1/b_n factor
KERNEL_RATE = ("theorem1", "theorem2", "diag-I3")
# expected number at risk at tau, n * (1 - L(tau)), required at the smallest n
MIN_EXPECTED_AT_RISK = 5.0


class ConfigError(ValueError):
    """Experiment configuration is invalid or infeasible."""


@dataclass(frozen=True)
class ExperimentConfig:
    model: ParametricModel = field(default_factory=exponential_model)
    t_scheme: NaScheme = field(default_factory=NaScheme)
    y_scheme: NaScheme = field(default_factory=NaScheme)
    n_grid: tuple = (1000, 4000, 16000, 64000)
    replications: int = 100
    statistics: tuple = ("lemma1-F",)
    kernel: str = "epanechnikov"
    schedule: BandwidthSchedule = field(default_factory=BandwidthSchedule)
    tau_quantile: float = 0.9
    seed: int = 0
    centering: str = "density-F"
    grid_size: int = 2048
    panels: int = DEFAULT_PANELS
    name: str = "experiment"
    slope_bands: dict = field(default_factory=dict)
    ratio_bounds: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "statistics", tuple(self.statistics))
        if not self.n_grid or any(n < 1 for n in self.n_grid):
            raise ConfigError("n_grid must list positive sample sizes")
        if any(b <= a for a, b in zip(self.n_grid[:-1], self.n_grid[1:])):
            raise ConfigError("n_grid must be strictly increasing")
        if self.replications < 1:
            raise ConfigError("replications must be at least 1")
        if not self.statistics:
            raise ConfigError("select at least one statistic")
        unknown = [s for s in self.statistics if s not in STATISTICS]
        if unknown:
            raise ConfigError(f"unknown statistics {unknown}; expected from {STATISTICS}")
        for name in (*self.slope_bands, *self.ratio_bounds):
            if name not in self.statistics:
                raise ConfigError(f"check refers to statistic {name!r} that is not computed")
        if self.centering not in ("density-F", "density-Fstar"):
            raise ConfigError("centering must be 'density-F' or 'density-Fstar'")
        if self.grid_size < 1 or self.panels < 1:
            raise ConfigError("grid_size and panels must be positive")
        try:
            kernel_preset(self.kernel)
            check_tau(self.model, self.tau)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        at_risk = self.n_grid[0] * float(self.model.Lbar(self.tau))
        if at_risk < MIN_EXPECTED_AT_RISK:
            raise ConfigError(
                f"tau quantile {self.tau_quantile:g} leaves about {at_risk:.3g} observations "
                f"at risk at tau for n={self.n_grid[0]}; the 1/Y_n(tau) denominators need "
                f"at least {MIN_EXPECTED_AT_RISK:g}"
            )

    @property
    def tau(self) -> float:
        try:
            return tau_for_quantile(self.model, self.tau_quantile)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def require_rate_fit(self):
        """Stricter validation for verification runs."""
        if len(self.n_grid) < 2:
            raise ConfigError("rate fitting needs at least two sample sizes")
        if self.replications < 10:
            raise ConfigError("rate verification needs at least 10 replications")

    def to_dict(self) -> dict:
        def scheme(s):
            d = {"kind": s.kind}
            if s.kind == "gaussian-block":
                d.update(block_size=s.block_size, rho=s.rho)
            return d
        return {
            "name": self.name,
            "model": self.model.to_dict(),
            "schemes": {"T": scheme(self.t_scheme), "Y": scheme(self.y_scheme)},
            "n_grid": list(self.n_grid),
            "replications": self.replications,
            "statistics": list(self.statistics),
            "kernel": self.kernel,
            "bandwidth": {"c": self.schedule.c, "beta": self.schedule.beta},
            "tau_quantile": self.tau_quantile,
            "seed": self.seed,
            "centering": self.centering,
            "grid_size": self.grid_size,
            "panels": self.panels,
            "checks": {"slope": {k: list(v) for k, v in self.slope_bands.items()},
                       "ratio": dict(self.ratio_bounds)},
        }


def _scheme_from_dict(doc) -> NaScheme:
    doc = dict(doc or {})
    kind = doc.pop("kind", "gaussian-block")
    allowed = {"block_size", "rho"}
    extra = set(doc) - allowed
    if extra:
        raise ConfigError(f"unknown scheme fields {sorted(extra)}")
    return NaScheme(kind, **doc)


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build an :class:`ExperimentConfig` from its JSON form."""
    known = {"name", "model", "schemes", "n_grid", "replications", "statistics", "kernel",
             "bandwidth", "tau_quantile", "seed", "centering", "grid_size", "panels", "checks"}
    extra = set(doc) - known
    if extra:
        raise ConfigError(f"unknown config fields {sorted(extra)}")
    try:
        kw = {}
        if "model" in doc:
            kw["model"] = ParametricModel.from_dict(doc["model"])
        schemes = doc.get("schemes", {})
        if "T" in schemes:
            kw["t_scheme"] = _scheme_from_dict(schemes["T"])
        if "Y" in schemes:
            kw["y_scheme"] = _scheme_from_dict(schemes["Y"])
        if "bandwidth" in doc:
            kw["schedule"] = BandwidthSchedule(**doc["bandwidth"])
        for key in ("n_grid", "statistics"):
            if key in doc:
                kw[key] = tuple(doc[key])
        for key in ("replications", "seed", "grid_size", "panels"):
            if key in doc:
                if int(doc[key]) != doc[key]:
                    raise ConfigError(f"{key} must be an integer")
                kw[key] = int(doc[key])
        for key in ("kernel", "centering", "name"):
            if key in doc:
                kw[key] = str(doc[key])
        if "tau_quantile" in doc:
            kw["tau_quantile"] = float(doc["tau_quantile"])
        checks = doc.get("checks", {})
        kw["slope_bands"] = {k: (float(v[0]), float(v[1]) if v[1] is not None else math.inf)
                             for k, v in checks.get("slope", {}).items()}
        kw["ratio_bounds"] = {k: float(v) for k, v in checks.get("ratio", {}).items()}
        return ExperimentConfig(**kw)
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid experiment config: {exc}") from None


# -- per-replication work -----------------------------------------------------

def claimed_rate(statistic: str, n, b=None):
    n = np.asarray(n, dtype=float)
    root = np.sqrt(np.log(n) / n)
    if statistic in KERNEL_RATE:
        return root / b
    return root


def _sup_two_sided(step, truth, pts):
    right = np.abs(step.limit(pts, "right") - truth)
    left = np.abs(step.limit(pts, "left") - truth)
    return float(max(right.max(), left.max()))


def replication_statistics(cfg: ExperimentConfig, n: int, rep: int) -> dict:
    """Draw the ``(n, rep)`` dataset and compute every selected statistic."""
    seed_t, seed_y = derive_seeds(cfg.seed, n, rep)
    s = gen_censored_dataset(cfg.t_scheme.with_seed(seed_t), cfg.model.T,
                             cfg.y_scheme.with_seed(seed_y), cfg.model.Y, n)
    model, tau = cfg.model, cfg.tau
    stats = set(cfg.statistics)
    out = {}
    pts = make_grid(tau, cfg.grid_size, s).points
    fit = kaplan_meier(s)
    if "lemma1-F" in stats:
        out["lemma1-F"] = _sup_two_sided(fit.cdf, model.F(pts), pts)
    if "lemma1-H" in stats:
        out["lemma1-H"] = _sup_two_sided(fit.cumhaz, model.H(pts), pts)
    if "lemma3-Fstar" in stats:
        out["lemma3-Fstar"] = _sup_two_sided(sub_dist_empirical(s), sub_dist(model, pts), pts)
    if "lemma3-L" in stats:
        out["lemma3-L"] = _sup_two_sided(empirical_L(s), model.L(pts), pts)
    if stats & {"lemma2-r1", "lemma2-r2"}:
        em = EtaMean(s, model, tau)
        for side in ("right", "left"):
            mean_eta = em(pts, side=side)
            if "lemma2-r1" in stats:
                r1 = (1.0 - fit.survival.limit(pts, side)) - model.F(pts) + model.S_T(pts) * mean_eta
                out["lemma2-r1"] = max(out.get("lemma2-r1", 0.0), float(np.abs(r1).max()))
            if "lemma2-r2" in stats:
                r2 = fit.cumhaz.limit(pts, side) - model.H(pts) + mean_eta
                out["lemma2-r2"] = max(out.get("lemma2-r2", 0.0), float(np.abs(r2).max()))
    if stats & set(KERNEL_STATS):
        kernel = kernel_preset(cfg.kernel)
        b = bandwidth(cfg.schedule, n)
        kpts = make_grid(tau, cfg.grid_size, s, uncensored_only=True).points
        if "theorem1" in stats:
            out["theorem1"] = float(np.abs(centered_curve(
                s, model, "density", kernel, b, kpts, cfg.centering, fit)).max())
        if "theorem2" in stats:
            out["theorem2"] = float(np.abs(centered_curve(
                s, model, "hazard", kernel, b, kpts, cfg.centering, fit)).max())
        terms = tuple(i for i in (1, 2, 3) if f"diag-I{i}" in stats)
        if terms:
            dpts = make_grid(tau, cfg.grid_size).points
            rec = proof_term_diagnostics(s, model, kernel, b, dpts, cfg.panels, terms)
            for i, v in zip((1, 2, 3), (rec.i1_residual, rec.i2, rec.i3)):
                if i in terms:
                    out[f"diag-I{i}"] = v
    return out


def _run_cell(args):
    cfg, i, n, rep = args
    return i, rep, replication_statistics(cfg, n, rep)


# -- reports ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RateReport:
    """Per-replication sup statistics and their rate summaries."""

    config: ExperimentConfig
    values: dict  # statistic -> array (len(n_grid), replications)

    @property
    def n_grid(self) -> np.ndarray:
        return np.asarray(self.config.n_grid)

    @property
    def statistics(self) -> tuple:
        return self.config.statistics

    def bandwidths(self) -> np.ndarray:
        return np.array([bandwidth(self.config.schedule, n) for n in self.config.n_grid])

    def rate(self, statistic: str) -> np.ndarray:
        return claimed_rate(statistic, self.n_grid, self.bandwidths())

    def median(self, statistic: str) -> np.ndarray:
        return np.median(self.values[statistic], axis=1)

    def mean(self, statistic: str) -> np.ndarray:
        return self.values[statistic].mean(axis=1)

    def quantile(self, statistic: str, q: float = 0.9) -> np.ndarray:
        return np.quantile(self.values[statistic], q, axis=1)

    def ratios(self, statistic: str, q: float = 0.9) -> np.ndarray:
        """0.9-quantile statistic divided by the claimed rate, per n."""
        return self.quantile(statistic, q) / self.rate(statistic)

    def slope(self, statistic: str):
        return fit_rate_slope(self, statistic)

    def checks(self) -> list:
        """Outcome of every configured slope band and ratio bound."""
        results = []
        for stat, (lo, hi) in self.config.slope_bands.items():
            slope, se = fit_rate_slope(self, stat)
            results.append(CheckResult(stat, "slope", slope, (lo, hi), lo <= slope <= hi))
        for stat, factor in self.config.ratio_bounds.items():
            r = self.ratios(stat)
            growth = float(r.max() / r[0])
            results.append(CheckResult(stat, "ratio", growth, (0.0, factor), growth <= factor))
        return results

    def summary(self) -> dict:
        out = {"name": self.config.name, "config": self.config.to_dict(),
               "tau": self.config.tau, "statistics": {}}
        for stat in self.statistics:
            slope, se = fit_rate_slope(self, stat) if len(self.n_grid) > 1 else (None, None)
            out["statistics"][stat] = {
                "n": [int(n) for n in self.n_grid],
                "rate": [float(v) for v in self.rate(stat)],
                "median": [float(v) for v in self.median(stat)],
                "mean": [float(v) for v in self.mean(stat)],
                "q90": [float(v) for v in self.quantile(stat)],
                "ratio_q90": [float(v) for v in self.ratios(stat)],
                "slope": slope,
                "slope_stderr": se,
            }
        out["checks"] = [c.to_dict() for c in self.checks()]
        out["passed"] = all(c.passed for c in self.checks())
        return out

    def long_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["statistic", "n", "replication", "value"])
        for stat in self.statistics:
            for i, n in enumerate(self.config.n_grid):
                for rep, v in enumerate(self.values[stat][i]):
                    w.writerow([stat, n, rep, repr(float(v))])
        return buf.getvalue()

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_long_csv(cls, config: ExperimentConfig, text: str) -> "RateReport":
        values = {s: np.full((len(config.n_grid), config.replications), np.nan)
                  for s in config.statistics}
        index = {n: i for i, n in enumerate(config.n_grid)}
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != ["statistic", "n", "replication", "value"]:
            raise ValueError("expected header statistic,n,replication,value")
        for lineno, row in enumerate(reader, start=2):
            try:
                stat, n, rep, v = row[0], int(row[1]), int(row[2]), float(row[3])
                values[stat][index[n], rep] = v
            except (ValueError, KeyError, IndexError):
                raise ValueError(f"line {lineno}: row {row!r} does not match the config") from None
        if any(np.isnan(a).any() for a in values.values()):
            raise ValueError("report CSV does not cover every (statistic, n, replication)")
        return cls(config, values)


@dataclass(frozen=True)
class CheckResult:
    statistic: str
    kind: str
    value: float
    bounds: tuple
    passed: bool

    def to_dict(self) -> dict:
        lo, hi = self.bounds
        return {"statistic": self.statistic, "kind": self.kind, "value": self.value,
                "lower": lo, "upper": hi if math.isfinite(hi) else None,
                "passed": bool(self.passed)}

    def line(self) -> str:
        lo, hi = self.bounds
        if self.kind == "slope":
            cond = f"slope {self.value:.3f} in [{lo:g}, {hi:g}]"
        else:
            cond = f"max ratio / first ratio {self.value:.3f} <= {hi:g}"
        return f"{'PASS' if self.passed else 'FAIL'} {self.statistic}: {cond}"


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> RateReport:
    """Run every (n, replication) cell and collect a :class:`RateReport`.

    Seeds derive from ``(cfg.seed, n, replication)``, so the report does not
    depend on ``jobs`` or on completion order.
    """
    cells = [(cfg, i, n, rep) for i, n in enumerate(cfg.n_grid)
             for rep in range(cfg.replications)]
    values = {s: np.empty((len(cfg.n_grid), cfg.replications)) for s in cfg.statistics}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell, cells, chunksize=max(1, len(cells) // (8 * jobs))))
    else:
        results = map(_run_cell, cells)
    for i, rep, stats in results:
        for name, v in stats.items():
            values[name][i, rep] = v
    return RateReport(cfg, values)


def fit_rate_slope(report: RateReport, statistic: str):
    """OLS slope (and its standard error) of ``log median`` on ``log rho(n)``."""
    x = np.log(report.rate(statistic))
    y = np.log(report.median(statistic))
    if x.size < 2:
        raise ValueError("need at least two sample sizes to fit a slope")
    if np.ptp(x) == 0:
        raise ValueError("degenerate regression: the claimed rate is constant over n_grid")
    res = linregress(x, y)
    stderr = float(res.stderr) if x.size > 2 else 0.0
    return float(res.slope), stderr


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Copy of ``cfg`` with non-None overrides applied (re-validated)."""
    kw = {k: v for k, v in overrides.items() if v is not None}
    try:
        return replace(cfg, **kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
