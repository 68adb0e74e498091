"""
Kernel density and hazard estimates
===================================

Smoothing the jumps of the Kaplan-Meier estimator with a kernel gives a
density estimate ``f_n``; smoothing the jumps of the cumulative hazard gives
a hazard estimate ``h_n``. Both are exact finite sums over the jumps.
"""

import numpy as np

from censna import (BandwidthSchedule, NaScheme, bandwidth, exponential_model,
                    gen_censored_dataset, kernel_preset, tau_for_quantile)
from censna.smoothing import kernel_curves, smooth_true_many

model = exponential_model(1.0, 0.5)
tau = tau_for_quantile(model, 0.9)
kernel = kernel_preset("epanechnikov")

for n in (1000, 16000, 64000):
    s = gen_censored_dataset(NaScheme(seed=2 * n), model.T, NaScheme(seed=2 * n + 1),
                             model.Y, n)
    b = bandwidth(BandwidthSchedule(c=1.0, beta=0.2), n)
    t = np.linspace(b, tau, 200)   # stay clear of the boundary at 0
    f_n, h_n, _ = kernel_curves(s, kernel, b, t)
    f_bar = smooth_true_many(model, "density-F", kernel, b, t)
    print(f"n = {n:6d}  b = {b:.3f}  "
          f"sup|f_n - f| = {np.abs(f_n - model.f(t)).max():.4f}  "
          f"sup|f_n - f_bar| = {np.abs(f_n - f_bar).max():.4f}  "
          f"sup|h_n - 1| = {np.abs(h_n - 1.0).max():.4f}")

# f_bar is the kernel smooth of the true density; f_n - f_bar is the random
# part of the error and f_bar - f the bias, which shrinks like b**2.
for b in (0.4, 0.2, 0.1):
    bias = smooth_true_many(model, "density-F", kernel, b, np.array([1.0]))[0] - model.f(1.0)
    print(f"b = {b:.1f}: bias at t = 1 is {bias:.2e}")
