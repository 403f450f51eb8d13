import numpy as np
import pytest

from agnostic import Gaussian, PointMass, sample_contaminated


def contaminated_gaussian(n, m, eta, loc, seed, mean=0.0, variances=None):
    fam = Gaussian.isotropic(n, mean) if variances is None else Gaussian.diagonal(variances, mean)
    return sample_contaminated(fam, PointMass(np.asarray(loc, float)), eta, m, seed)


@pytest.fixture
def rs():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
