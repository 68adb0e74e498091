"""
Checking a convergence rate by simulation
=========================================

The harness draws ``R`` datasets for each sample size, records sup-norm
errors, and regresses the log median error on the log of the claimed rate
``(log n / n) ** 0.5``. A slope near one supports the rate. The growth of
the 0.9-quantile of ``error / rate`` across sample sizes is a second check.
"""

import tempfile
from pathlib import Path

from censna import ExperimentConfig, run_experiment
from censna.plotting import loglog_svg

cfg = ExperimentConfig(
    n_grid=(500, 2000, 8000),
    replications=20,
    statistics=("lemma1-F", "lemma1-H", "lemma2-r1"),
    seed=2024,
    grid_size=512,
    slope_bands={"lemma1-F": (0.7, 1.3), "lemma1-H": (0.7, 1.3)},
    ratio_bounds={"lemma2-r1": 3.0},
    name="demo",
)
report = run_experiment(cfg)

for stat in cfg.statistics:
    slope, se = report.slope(stat)
    print(f"{stat:10s} medians {report.median(stat).round(5)}  slope {slope:.2f} (se {se:.2f})")
for check in report.checks():
    print(check.line())

# The remainder shrinks faster than the rate, so its slope is near two.
out = Path(tempfile.gettempdir()) / "demo_lemma1-F.svg"
out.write_text(loglog_svg(report, "lemma1-F"))
print("wrote", out)
