import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from censna.core import CensoredSample
from censna.estimators import (at_risk, empirical_cdf, empirical_L, kaplan_meier,
                               km_via_product_integral, sub_dist_empirical)

from conftest import random_sample_arrays


def loop_km(x, d, t):
    """Textbook product over distinct event times, written with plain loops."""
    surv, haz = 1.0, 0.0
    for s in sorted(set(x)):
        if s > t:
            break
        deaths = sum(1 for xi, di in zip(x, d) if xi == s and di == 1)
        risk = sum(1 for xi in x if xi >= s)
        if deaths:
            surv *= 1.0 - deaths / risk
            haz += deaths / risk
    return surv, haz


def test_empirical_L_examples():
    L = empirical_L(CensoredSample([1, 2, 3], [1, 1, 1]))
    assert L(2) == pytest.approx(1 / 3)
    assert L(3.5) == 1.0
    L2 = empirical_L(CensoredSample([1, 1, 2], [1, 0, 1]))
    assert L2(1) == 0.0
    assert L2(1 + 1e-9) == pytest.approx(2 / 3)


def test_at_risk_examples():
    s = CensoredSample([1, 2, 3], [1, 0, 1])
    assert at_risk(s, 2) == 2
    assert at_risk(s, 0) == 3
    assert at_risk(s, 3.5) == 0
    # L_n and Y_n / n are complementary
    L = empirical_L(s)
    for t in [0.5, 1, 1.5, 2, 3, 4]:
        assert L(t) + at_risk(s, t) / s.n == pytest.approx(1.0)


def test_sub_dist_empirical_examples():
    f = sub_dist_empirical(CensoredSample([1, 2], [1, 0]))
    assert f(1.5) == 0.5 and f(3) == 0.5
    none = sub_dist_empirical(CensoredSample([1, 2], [0, 0]))
    assert none(10.0) == 0.0
    x = [0.3, 2.0, 1.1]
    full = sub_dist_empirical(CensoredSample(x, [1, 1, 1]))
    ecdf = empirical_cdf(x)
    t = np.linspace(0, 3, 31)
    np.testing.assert_array_equal(full(t), ecdf(t))


def test_kaplan_meier_hand_example():
    fit = kaplan_meier(CensoredSample([2, 3, 5, 7], [1, 0, 1, 1]))
    np.testing.assert_allclose(fit.cdf([2, 5, 7]), [0.25, 0.625, 1.0], atol=1e-15)
    np.testing.assert_allclose(fit.cumhaz([2, 5, 7]), [0.25, 0.75, 1.75], atol=1e-15)
    assert fit.survival(1.99) == 1.0
    assert fit.cumhaz(100.0) == pytest.approx(1.75)
    np.testing.assert_array_equal(fit.at_risk_at_jumps, [4, 2, 1])


def test_kaplan_meier_uncensored_is_ecdf():
    x = [3.0, 1.0, 4.0, 1.5, 9.0]
    fit = kaplan_meier(CensoredSample(x, [1] * 5))
    xs = np.sort(x)
    np.testing.assert_allclose(fit.cdf(xs), np.arange(1, 6) / 5, atol=1e-15)


def test_kaplan_meier_all_censored():
    fit = kaplan_meier(CensoredSample([1, 2, 3], [0, 0, 0]))
    assert fit.cdf(10.0) == 0.0 and fit.cumhaz(10.0) == 0.0


def test_km_mass_below_one_when_last_censored():
    fit = kaplan_meier(CensoredSample([1, 2, 3], [1, 1, 0]))
    assert fit.cdf(100.0) == pytest.approx(2 / 3)


def test_product_integral_tied_events():
    fit = km_via_product_integral(CensoredSample([1, 1, 2], [1, 1, 1]))
    assert fit.survival(1.0) == pytest.approx(1 / 3)
    fit2 = km_via_product_integral(CensoredSample([1, 1], [1, 0]))
    assert fit2.survival(1.0) == pytest.approx(0.5)
    # same under the order-statistic form thanks to the tie convention
    assert kaplan_meier(CensoredSample([1, 1], [0, 1])).survival(1.0) == pytest.approx(0.5)


def test_orders_agree_with_loop_oracle(rng):
    for _ in range(30):
        x, d = random_sample_arrays(rng, int(rng.integers(1, 40)), tie_prob=0.3)
        s = CensoredSample(x, d)
        a, b = kaplan_meier(s), km_via_product_integral(s)
        for t in np.concatenate([x, x + 1e-9, [0.0, 100.0]]):
            surv, haz = loop_km(list(x), list(d), t)
            assert a.survival(t) == pytest.approx(surv, abs=1e-12)
            assert b.survival(t) == pytest.approx(surv, abs=1e-12)
            assert b.cumhaz(t) == pytest.approx(haz, abs=1e-12)


def test_no_ties_full_agreement(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        x, d = random_sample_arrays(rng, n)
        s = CensoredSample(x, d)
        a, b = kaplan_meier(s), km_via_product_integral(s)
        t = np.concatenate([x, [0.0, x.max() + 1]])
        np.testing.assert_allclose(a.survival(t), b.survival(t), atol=1e-12, rtol=0)
        np.testing.assert_allclose(a.cumhaz(t), b.cumhaz(t), atol=1e-12, rtol=0)


def _samples(draw_ties=True):
    times = st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0]) if draw_ties else st.floats(0.01, 50)
    return st.lists(st.tuples(times, st.integers(0, 1)), min_size=1, max_size=40)


@given(_samples())
def test_product_sum_identity(obs):
    x, d = zip(*obs)
    for fit in (kaplan_meier(CensoredSample(x, d)), km_via_product_integral(CensoredSample(x, d))):
        if fit.jump_times.size == 0:
            continue
        prod = np.cumprod(1.0 - fit.hazard_increments)
        # value after the last increment at each distinct jump time
        last = np.r_[fit.jump_times[1:] != fit.jump_times[:-1], True]
        np.testing.assert_allclose(fit.survival(fit.jump_times[last]), prod[last], atol=1e-12)


@given(_samples())
def test_grouped_and_ungrouped_survival_agree_with_ties(obs):
    x, d = zip(*obs)
    s = CensoredSample(x, d)
    t = np.array(sorted(set(x)) + [0.0, 100.0])
    np.testing.assert_allclose(kaplan_meier(s).survival(t),
                               km_via_product_integral(s).survival(t), atol=1e-12)


@given(_samples(draw_ties=False))
def test_monotone_and_range(obs):
    x, d = zip(*obs)
    fit = kaplan_meier(CensoredSample(x, d))
    t = np.linspace(-1, 60, 400)
    F, H = fit.cdf(t), fit.cumhaz(t)
    assert np.all(np.diff(F) >= -1e-15) and np.all(np.diff(H) >= -1e-15)
    assert F.min() >= 0 and F.max() <= 1 + 1e-15
    assert H[-1] <= sum(1.0 / k for k in range(1, len(x) + 1)) + 1e-12


@given(_samples(draw_ties=False), st.randoms())
def test_permutation_invariance(obs, random):
    x, d = zip(*obs)
    perm = list(range(len(x)))
    random.shuffle(perm)
    a = kaplan_meier(CensoredSample(x, d))
    b = kaplan_meier(CensoredSample([x[i] for i in perm], [d[i] for i in perm]))
    np.testing.assert_array_equal(a.survival.knots, b.survival.knots)
    np.testing.assert_allclose(a.survival.jumps, b.survival.jumps, atol=1e-15)
    np.testing.assert_allclose(a.cumhaz.jumps, b.cumhaz.jumps, atol=1e-15)


@given(_samples(draw_ties=False))
def test_time_transform_equivariance(obs):
    x, d = zip(*obs)
    def phi(v):
        return np.sqrt(v) * 3 + 1

    x = np.asarray(x)
    t = np.concatenate([x, np.linspace(0, 55, 50)])
    # the property needs phi strictly increasing on these points, which rounding can break
    ts = np.unique(t)
    assume(np.all(np.diff(phi(ts)) > 0))
    s1 = kaplan_meier(CensoredSample(x, d))
    s2 = kaplan_meier(CensoredSample(phi(x), d))
    np.testing.assert_allclose(s2.cdf(phi(t)), s1.cdf(t), atol=1e-15)


def test_jump_mass_roundtrip(rng):
    x, d = random_sample_arrays(rng, 137)
    s = CensoredSample(x, d)
    assert sub_dist_empirical(s).total_jump == pytest.approx(d.sum() / 137, abs=1e-12)
    assert empirical_L(s).total_jump == pytest.approx(1.0, abs=1e-12)
