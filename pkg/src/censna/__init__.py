"""Nonparametric estimators for right-censored negatively associated data."""

from .core import (CensoredSample, EvaluationGrid, StepFunction, make_censored_sample,
                   make_grid, read_sample_csv, step_eval, write_sample_csv)
from .estimators import (KmFit, at_risk, empirical_L, kaplan_meier, km_via_product_integral,
                         sub_dist_empirical)
from .generators import (NaScheme, ParametricMarginal, check_negative_association,
                         derive_seeds, gen_censored_dataset, gen_na_uniforms,
                         transform_marginal)
from .kernels import BandwidthSchedule, Kernel, bandwidth, kernel_preset
from .oracle import (ParametricModel, cum_hazard, eta, exponential_model, remainder_r,
                     sub_dist, tau_for_quantile)
from .smoothing import (smooth_stieltjes, smooth_true, smooth_true_many,
                        theorem_centered_statistic)
from .diagnostics import proof_term_diagnostics
from .harness import ExperimentConfig, RateReport, fit_rate_slope, run_experiment

__version__ = "0.1.0"
