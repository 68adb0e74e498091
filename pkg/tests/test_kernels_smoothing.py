import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from censna.core import CensoredSample, StepFunction
from censna.estimators import empirical_cdf, kaplan_meier
from censna.kernels import BandwidthSchedule, Kernel, PRESETS, bandwidth, kernel_preset
from censna.oracle import ParametricModel
from censna.generators import ParametricMarginal
from censna.quadrature import QuadratureError, adaptive_simpson
from censna.smoothing import (centered_curve, kernel_curves, smooth_stieltjes, smooth_true,
                              smooth_true_many)

from conftest import random_sample_arrays


@pytest.mark.parametrize("name", PRESETS)
def test_presets_are_densities(name):
    k = kernel_preset(name)
    assert k.integral() == pytest.approx(1.0, abs=1e-14)
    val, _ = integrate.quad(k, -1, 1, points=[0.0])
    assert val == pytest.approx(1.0, abs=1e-10)
    u = np.linspace(-1.5, 1.5, 301)
    assert np.all(k(u) >= 0)
    assert np.all(k(u[np.abs(u) >= 1]) == 0)


def test_preset_variation_and_atoms():
    assert kernel_preset("epanechnikov").variation == pytest.approx(1.5)
    assert kernel_preset("triangular").variation == pytest.approx(2.0)
    assert kernel_preset("biweight").variation == pytest.approx(1.875)
    uni = kernel_preset("uniform")
    assert uni.variation == pytest.approx(1.0)
    assert uni.atoms() == [(-1.0, 0.5), (1.0, -0.5)]
    assert kernel_preset("epanechnikov").atoms() == []


def test_kernel_derivative_matches_finite_difference():
    k = kernel_preset("biweight")
    u = np.linspace(-0.95, 0.95, 39)
    fd = (k(u + 1e-6) - k(u - 1e-6)) / 2e-6
    np.testing.assert_allclose(k.derivative(u), fd, atol=1e-8)


def test_kernel_validation():
    with pytest.raises(ValueError):
        kernel_preset("gaussian")
    with pytest.raises(ValueError):
        Kernel("bad", ((0, 1, (1.0,)),))
    with pytest.raises(ValueError):
        Kernel("gap", ((-1, 0, (1.0,)), (0.5, 1, (1.0,))))


def test_bandwidth_examples():
    assert bandwidth(BandwidthSchedule(1.0, 0.2), 1000) == pytest.approx(1000 ** -0.2)
    assert bandwidth(BandwidthSchedule(1.0, 0.2), 1000) == pytest.approx(0.251189, abs=1e-6)
    assert bandwidth(BandwidthSchedule(2.0, 0.25), 16) == pytest.approx(1.0)
    for beta in (0.0, 0.5, 0.6, -0.1):
        with pytest.raises(ValueError):
            BandwidthSchedule(1.0, beta)
    with pytest.raises(ValueError):
        BandwidthSchedule(0.0, 0.2)
    with pytest.raises(ValueError):
        bandwidth(BandwidthSchedule(), 0)


def brute_smooth(knots, jumps, k, b, t):
    out = []
    for ti in t:
        acc = 0.0
        for xj, dj in zip(knots, jumps):
            acc += float(k((ti - xj) / b)) * dj
        out.append(acc / b)
    return np.array(out)


@pytest.mark.parametrize("name", PRESETS)
def test_smooth_stieltjes_matches_double_loop(name, rng):
    k = kernel_preset(name)
    x, d = random_sample_arrays(rng, 200, tie_prob=0.1)
    fit = kaplan_meier(CensoredSample(x, d))
    t = np.concatenate([rng.uniform(0, 3, 150), x[:50]])
    for step, b in ((fit.cdf, 0.3), (fit.cumhaz, 0.05)):
        np.testing.assert_allclose(smooth_stieltjes(step, k, b, t),
                                   brute_smooth(step.knots, step.jumps, k, b, t),
                                   atol=1e-12, rtol=0)


def test_classical_kde_when_uncensored(rng):
    x = rng.normal(size=300)
    k = kernel_preset("epanechnikov")
    t = np.linspace(-3, 3, 41)
    b = 0.4
    kde = np.array([np.mean(0.75 * np.clip(1 - ((ti - x) / b) ** 2, 0, None)) / b for ti in t])
    np.testing.assert_allclose(smooth_stieltjes(empirical_cdf(x), k, b, t), kde, atol=1e-12)
    f_n, _, fstar = kernel_curves(CensoredSample(x - x.min() + 0.1, np.ones(300)), k, b,
                                  t - x.min() + 0.1)
    np.testing.assert_allclose(f_n, kde, atol=1e-12)
    np.testing.assert_allclose(fstar, kde, atol=1e-12)


def test_uniform_kernel_single_atom_examples():
    step = StepFunction([0.0], [1.0])
    k = kernel_preset("uniform")
    assert smooth_stieltjes(step, k, 0.5, 0.0) == pytest.approx(1.0)
    assert smooth_stieltjes(step, k, 0.5, 0.5) == 0.0
    assert smooth_stieltjes(step, kernel_preset("epanechnikov"), 1.0, 0.5) == pytest.approx(0.5625)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=30),
       st.lists(st.floats(0, 2), min_size=30, max_size=30),
       st.floats(0.05, 2.0), st.sampled_from(PRESETS))
@settings(max_examples=60, deadline=None)
def test_mass_preservation_and_nonnegativity(knots, weights, b, name):
    w = np.asarray(weights[:len(knots)])
    step = StepFunction(knots, w)
    k = kernel_preset(name)
    grid = np.linspace(min(knots) - 3 * b, max(knots) + 3 * b, 6001)
    vals = smooth_stieltjes(step, k, b, grid)
    assert np.all(vals >= -1e-12)
    mass = np.sum(vals) * (grid[1] - grid[0])
    assert mass == pytest.approx(w.sum(), abs=5e-3 * max(1.0, w.sum()))


@given(st.lists(st.floats(0, 10), min_size=1, max_size=20), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=60, deadline=None)
def test_linearity(knots, alpha, beta):
    n = len(knots)
    a = StepFunction(knots, np.linspace(0.1, 1, n))
    c = StepFunction(knots, np.linspace(1, 0.2, n))
    combo = StepFunction(knots, alpha * np.linspace(0.1, 1, n) + beta * np.linspace(1, 0.2, n))
    k = kernel_preset("triangular")
    t = np.linspace(-1, 11, 50)
    np.testing.assert_allclose(
        smooth_stieltjes(combo, k, 0.7, t),
        alpha * smooth_stieltjes(a, k, 0.7, t) + beta * smooth_stieltjes(c, k, 0.7, t),
        atol=1e-10)


def epanechnikov_exp_closed_form(rate, t, b):
    """b^-1 int k((t-x)/b) rate' e^{-c x} dx for an interior t (t > b)."""
    a = rate * b
    m = 4 * (a * math.cosh(a) - math.sinh(a)) / a ** 3
    return math.exp(-rate * t) * 0.75 * m


def test_density_fstar_closed_form(exp_model):
    k = kernel_preset("epanechnikov")
    b = 0.3
    for t in (0.5, 1.0, 1.7):
        expected = epanechnikov_exp_closed_form(1.5, t, b)
        assert smooth_true(exp_model, "density-Fstar", k, b, t) == pytest.approx(expected,
                                                                               abs=1e-9)
        assert smooth_true_many(exp_model, "density-Fstar", k, b, np.array([t]))[0] == \
            pytest.approx(expected, abs=1e-12)


def test_hazard_of_exponential_is_flat(exp_model):
    k = kernel_preset("biweight")
    t = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(smooth_true_many(exp_model, "hazard-H", k, 0.2, t), 1.0,
                               atol=1e-12)
    assert smooth_true(exp_model, "hazard-H", k, 0.2, 1.0) == pytest.approx(1.0, abs=1e-8)


def test_smooth_true_bias_is_second_order(exp_model):
    k = kernel_preset("epanechnikov")
    t = 1.0
    errs = [abs(smooth_true(exp_model, "density-F", k, b, t) - math.exp(-t))
            for b in (0.2, 0.1, 0.05)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.05)


@pytest.mark.parametrize("name", PRESETS)
def test_smooth_true_paths_agree(name):
    model = ParametricModel(ParametricMarginal.weibull(2.0, 1.0),
                            ParametricMarginal.uniform(0.0, 3.0))
    k = kernel_preset(name)
    t = np.array([0.05, 0.3, 1.0, 1.9])
    for target in ("density-F", "density-Fstar", "hazard-H"):
        many = smooth_true_many(model, target, k, 0.25, t)
        one = [smooth_true(model, target, k, 0.25, ti) for ti in t]
        np.testing.assert_allclose(many, one, atol=1e-8)


def test_smooth_true_against_scipy_quad(exp_model):
    k = kernel_preset("triangular")
    b, t = 0.4, 0.9
    ref, _ = integrate.quad(lambda x: k((t - x) / b) * math.exp(-x) / b, t - b, t + b,
                            points=[t], epsabs=1e-13)
    assert smooth_true(exp_model, "density-F", k, b, t) == pytest.approx(ref, abs=1e-9)


def test_smooth_true_near_origin_uses_truncated_window(exp_model):
    k = kernel_preset("uniform")
    # only x in [0, 0.2] carries mass: 0.5/0.5 * (1 - e^-0.2)
    assert smooth_true(exp_model, "density-F", k, 0.5, -0.3) == pytest.approx(
        1 - math.exp(-0.2), abs=1e-9)


def test_quadrature_budget_raises():
    with pytest.raises(QuadratureError) as err:
        adaptive_simpson(lambda x: math.sin(1.0 / x), 1e-4, 1.0, tol=1e-14, max_nodes=200)
    assert err.value.estimate is not None
    assert adaptive_simpson(math.exp, 0.0, 1.0) == pytest.approx(math.e - 1, abs=1e-10)
    with pytest.raises(ValueError):
        smooth_true(ParametricModel(ParametricMarginal.exponential(1.0),
                                    ParametricMarginal.exponential(1.0)),
                    "nonsense", kernel_preset("uniform"), 0.1, 1.0)


def test_centered_curve_density_and_centering_options(exp_model, rng):
    k = kernel_preset("epanechnikov")
    t = rng.exponential(1.0, 4000)
    y = rng.exponential(2.0, 4000)
    s = CensoredSample(np.minimum(t, y), (t <= y).astype(int))
    pts = np.linspace(0.3, 1.2, 10)
    a = centered_curve(s, exp_model, "density", k, 0.25, pts)
    lit = centered_curve(s, exp_model, "density", k, 0.25, pts, centering="density-Fstar")
    assert np.max(np.abs(a)) < 0.05
    # the literal centring keeps a deterministic offset f_bar(F) - f_bar(F*)
    offset = smooth_true_many(exp_model, "density-Fstar", k, 0.25, pts) - \
        smooth_true_many(exp_model, "density-F", k, 0.25, pts)
    np.testing.assert_allclose(a - lit, offset, atol=1e-12)
    with pytest.raises(ValueError):
        centered_curve(s, exp_model, "mass", k, 0.25, pts)
