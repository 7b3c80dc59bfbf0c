import numpy as np
import pytest

from lvswitch.envmodel import Environment, EnvironmentPair


def random_pair(rng, lo=0.2, hi=5.0, favorable=False) -> EnvironmentPair:
    """Random valid pair; with ``favorable`` both environments favor x (a < c, b < d)."""
    envs = []
    for _ in range(2):
        a, b, alpha, beta = rng.uniform(lo, hi, 4)
        if favorable:
            c, d = a * rng.uniform(1.1, 3.0), b * rng.uniform(1.1, 3.0)
        else:
            c, d = rng.uniform(lo, hi, 2)
        envs.append(Environment(a, b, c, d, alpha, beta))
    return EnvironmentPair(*envs)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Lines recorded by test_acceptance.py, printed once at the end of the run.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
