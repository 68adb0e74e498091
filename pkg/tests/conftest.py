import numpy as np
import pytest

from censna.oracle import exponential_model


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def exp_model():
    """F = Exp(1), G = Exp(0.5)."""
    return exponential_model(1.0, 0.5)


def random_sample_arrays(rng, n, tie_prob=0.0, censor_rate=0.5):
    """Times with optional injected ties (a point copies an earlier one)."""
    t = rng.exponential(1.0, n)
    y = rng.exponential(1.0 / censor_rate, n)
    x = np.minimum(t, y)
    d = (t <= y).astype(int)
    if tie_prob > 0 and n > 1:
        for i in range(1, n):
            if rng.random() < tie_prob:
                x[i] = x[rng.integers(0, i)]
    return x, d


ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        terminalreporter.write_line(lines[number])
