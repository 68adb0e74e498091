"""
The influence function and the remainders
=========================================

``F_hat - F`` is, up to a small remainder, minus ``S_T`` times the sample
mean of the influence function ``eta``. This script evaluates ``eta`` in
closed form for the double-exponential model, checks that it has mean zero,
and shows that the remainders ``r1`` and ``r2`` are much smaller than the
estimation error itself.
"""

import math

import numpy as np

from censna import (NaScheme, exponential_model, gen_censored_dataset, kaplan_meier,
                    make_grid, tau_for_quantile)
from censna.oracle import eta, remainder_r, eta_mean_sides

model = exponential_model(1.0, 0.5)

# With 1 - L(s) = exp(-1.5 s) the integral part is (exp(1.5 u) - 1) / 1.5.
print("eta(1, 2, 0) =", eta(1.0, 2.0, 0, model), " closed form", (math.exp(1.5) - 1) / 1.5)
print("eta(1, 2, 1) =", eta(1.0, 2.0, 1, model))

# Mean zero under the model.
rng = np.random.default_rng(0)
t = rng.exponential(1.0, 100_000)
y = rng.exponential(2.0, 100_000)
v = eta(np.minimum(t, y), 0.5, (t <= y).astype(int), model)
print(f"mean eta(X, 0.5, delta) = {v.mean():.4f} +/- {v.std() / math.sqrt(v.size):.4f}")

# The remainders on [0, tau], tau the 0.9 quantile of X.
tau = tau_for_quantile(model, 0.9)
for n in (1000, 16000):
    s = gen_censored_dataset(NaScheme(seed=n), model.T, NaScheme(seed=n + 1), model.Y, n)
    grid = make_grid(tau, sample=s)
    fit = kaplan_meier(s)
    err = np.abs(fit.cdf(grid.points) - model.F(grid.points)).max()
    r1 = np.abs(remainder_r(s, model, 1, grid, fit=fit)).max()
    r2 = np.abs(remainder_r(s, model, 2, grid, fit=fit)).max()
    print(f"n = {n:6d}: sup|F_hat - F| = {err:.4f}   sup|r1| = {r1:.2e}   sup|r2| = {r2:.2e}")

# The mean of eta also equals a pair of integrals against the data and the
# model; both sides are computed independently here.
lhs, rhs = eta_mean_sides(s, model, grid.points[::64])
print("largest gap between the two expressions:", np.abs(lhs - rhs).max())
