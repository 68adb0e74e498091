"""Command-line entry point.

Subcommands: ``simulate``, ``estimate``, ``smooth``, ``verify``, ``report``.
Exit codes: 0 success, 1 a verification check failed, 2 configuration or
usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .core import read_sample_csv, read_sample_json, write_sample_csv, write_sample_json
from .estimators import kaplan_meier
from .generators import NaScheme, ParametricMarginal, derive_seeds, gen_censored_dataset
from .harness import ConfigError, RateReport, config_from_dict, run_experiment, with_overrides
from .kernels import BandwidthSchedule, bandwidth, kernel_preset
from .plotting import loglog_svg
from .smoothing import kernel_curves

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def bundled_acceptance_config() -> dict:
    return json.loads(resources.files("censna").joinpath("data/acceptance.json").read_text())


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _marginal(text):
    """``family:p1[,p2]``, e.g. ``exponential:1`` or ``weibull:2,1``."""
    try:
        family, _, params = text.partition(":")
        values = tuple(float(p) for p in params.split(",")) if params else ()
        return ParametricMarginal(family, values)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_sample(path):
    path = Path(path)
    return read_sample_json(path) if path.suffix == ".json" else read_sample_csv(path)


def _load_experiments(args):
    if args.config is None:
        doc = bundled_acceptance_config()
    else:
        doc = json.loads(Path(args.config).read_text())
    entries = doc["experiments"] if "experiments" in doc else [doc]
    overrides = {
        "seed": args.seed, "kernel": args.kernel, "tau_quantile": args.tau_quantile,
        "replications": args.replications,
        "n_grid": tuple(args.n_grid) if args.n_grid else None,
    }
    cfgs = []
    for entry in entries:
        cfg = config_from_dict(entry)
        if args.beta is not None or args.c is not None:
            try:
                sched = BandwidthSchedule(args.c if args.c is not None else cfg.schedule.c,
                                          args.beta if args.beta is not None else cfg.schedule.beta)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            cfg = with_overrides(cfg, schedule=sched)
        cfgs.append(with_overrides(cfg, **overrides))
    return cfgs


def _write_outputs(report: RateReport, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    name = report.config.name
    (out_dir / f"{name}_long.csv").write_text(report.long_csv())
    (out_dir / f"{name}_summary.json").write_text(report.summary_json())
    for stat in report.statistics:
        if len(report.n_grid) > 1:
            (out_dir / f"{name}_{stat}.svg").write_text(loglog_svg(report, stat))


def _print_report(report: RateReport, out):
    print(f"[{report.config.name}] tau={report.config.tau:.6g}", file=out)
    for stat in report.statistics:
        med = ", ".join(f"{v:.4g}" for v in report.median(stat))
        ratio = ", ".join(f"{v:.4g}" for v in report.ratios(stat))
        line = f"  {stat}: median [{med}]  q90/rate [{ratio}]"
        if len(report.n_grid) > 1:
            slope, se = report.slope(stat)
            line += f"  slope {slope:.3f} (se {se:.3f})"
        print(line, file=out)
    for check in report.checks():
        print("  " + check.line(), file=out)


# -- subcommands ------------------------------------------------------------------

def cmd_simulate(args):
    if args.config:
        cfg = config_from_dict(json.loads(Path(args.config).read_text()))
        t_scheme, y_scheme, t_marg, y_marg = cfg.t_scheme, cfg.y_scheme, cfg.model.T, cfg.model.Y
    else:
        scheme = NaScheme(args.scheme, args.block_size, args.rho)
        t_scheme = y_scheme = scheme
        t_marg, y_marg = args.t_dist, args.y_dist
    seed_t, seed_y = derive_seeds(args.seed)
    s = gen_censored_dataset(t_scheme.with_seed(seed_t), t_marg,
                             y_scheme.with_seed(seed_y), y_marg, args.n)
    if str(args.out).endswith(".json"):
        write_sample_json(s, args.out)
    else:
        write_sample_csv(s, args.out)
    print(f"wrote {s.n} observations to {args.out}; censoring fraction {s.censoring_fraction:.4f}")
    return EXIT_OK


def cmd_estimate(args):
    s = _read_sample(args.input)
    fit = kaplan_meier(s)
    times = np.unique(s.x)
    surv, cumhaz = fit.survival(times), fit.cumhaz(times)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "survival", "cumhaz"])
        for row in zip(times, np.atleast_1d(surv), np.atleast_1d(cumhaz)):
            w.writerow([repr(float(v)) for v in row])
    print(f"wrote {times.size} rows to {args.out}")
    return EXIT_OK


def cmd_smooth(args):
    s = _read_sample(args.input)
    kernel = kernel_preset(args.kernel)
    b = bandwidth(BandwidthSchedule(args.c, args.beta), s.n)
    if not 0 < args.tau_quantile < 1:
        raise ConfigError("tau quantile must lie in (0, 1)")
    tau = float(np.quantile(s.x, args.tau_quantile))
    if tau <= 0:
        raise ConfigError("the requested quantile of the observed times is not positive")
    t = tau * np.arange(1, args.grid_size + 1) / args.grid_size
    f_n, h_n, _ = kernel_curves(s, kernel, b, t)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "f_n", "h_n"])
        for row in zip(t, f_n, h_n):
            w.writerow([repr(float(v)) for v in row])
    print(f"wrote {t.size} rows to {args.out} (bandwidth {b:.6g}, tau {tau:.6g})")
    return EXIT_OK


def cmd_verify(args):
    cfgs = _load_experiments(args)
    for cfg in cfgs:
        cfg.require_rate_fit()
    out_dir = Path(args.out_dir)
    passed = True
    for cfg in cfgs:
        report = run_experiment(cfg, jobs=args.jobs)
        _write_outputs(report, out_dir)
        _print_report(report, sys.stdout)
        passed &= all(c.passed for c in report.checks())
    print("verification " + ("passed" if passed else "FAILED"))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_report(args):
    cfgs = _load_experiments(args)
    by_name = {c.name: c for c in cfgs}
    text = Path(args.csv).read_text()
    name = args.name or Path(args.csv).name.removesuffix("_long.csv")
    if name not in by_name:
        raise ConfigError(f"no experiment named {name!r} in the config")
    report = RateReport.from_long_csv(by_name[name], text)
    _print_report(report, sys.stdout)
    if args.out_dir:
        _write_outputs(report, Path(args.out_dir))
    return EXIT_OK if all(c.passed for c in report.checks()) else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(
        prog="censna",
        description="Simulate censored NA data, fit Kaplan-Meier and kernel estimates, "
                    "and check convergence rates by Monte Carlo.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="draw a censored NA dataset")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--t-dist", type=_marginal, default=ParametricMarginal.exponential(1.0),
                    help="survival-time marginal, family:params (default exponential:1)")
    sp.add_argument("--y-dist", type=_marginal, default=ParametricMarginal.exponential(0.5),
                    help="censoring-time marginal (default exponential:0.5)")
    sp.add_argument("--scheme", default="gaussian-block",
                    choices=("gaussian-block", "permutation", "iid"))
    sp.add_argument("--block-size", type=int, default=4)
    sp.add_argument("--rho", type=float, default=-1.0 / 6.0)
    sp.add_argument("--config", help="experiment JSON supplying model and schemes")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate)

    ep = sub.add_parser("estimate", help="Kaplan-Meier and cumulative hazard curves")
    ep.add_argument("--input", required=True)
    ep.add_argument("--out", required=True)
    ep.set_defaults(func=cmd_estimate)

    mp = sub.add_parser("smooth", help="kernel density and hazard curves")
    mp.add_argument("--input", required=True)
    mp.add_argument("--out", required=True)
    mp.add_argument("--kernel", default="epanechnikov")
    mp.add_argument("--c", type=float, default=1.0)
    mp.add_argument("--beta", type=float, default=0.2)
    mp.add_argument("--grid-size", type=_positive_int, default=2048)
    mp.add_argument("--tau-quantile", type=float, default=0.9)
    mp.set_defaults(func=cmd_smooth)

    for name, func, helptext in (("verify", cmd_verify, "run rate experiments and checks"),
                                 ("report", cmd_report, "summarise an existing long CSV")):
        vp = sub.add_parser(name, help=helptext)
        vp.add_argument("--config", help="experiment JSON (default: bundled acceptance.json)")
        vp.add_argument("--seed", type=int)
        vp.add_argument("--n-grid", type=_positive_int, nargs="+")
        vp.add_argument("--replications", type=_positive_int)
        vp.add_argument("--kernel")
        vp.add_argument("--beta", type=float)
        vp.add_argument("--c", type=float)
        vp.add_argument("--tau-quantile", type=float)
        if name == "verify":
            vp.add_argument("--jobs", type=_positive_int, default=1)
            vp.add_argument("--out-dir", default="verify-out")
        else:
            vp.add_argument("--csv", required=True)
            vp.add_argument("--name", help="experiment name (default: from the CSV file name)")
            vp.add_argument("--out-dir")
        vp.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"censna {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
