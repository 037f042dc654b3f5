import numpy as np
import pytest

from reject_gate.discrete import DiscreteModel, DiscretePosterior
from reject_gate.gaussian import GaussianPrior, fit_posterior
from reject_gate.synthetic import Dataset, NoiseSpec


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def one_point_posterior():
    """Linear model, prior N(0, I), single observation (x=0, y=2); v(0) = 2.66."""
    data = Dataset([0.0], [2.0])
    return fit_posterior(data, GaussianPrior.diagonal([1.0, 1.0]), 1, NoiseSpec())


@pytest.fixture
def empty_posterior():
    return fit_posterior(Dataset([], []), GaussianPrior.diagonal([1.0, 1.0]), 1, NoiseSpec())


@pytest.fixture
def two_theta_bernoulli():
    """Two equally weighted parameters, one input, p(y=1) = 0.9 vs 0.1."""
    lik = np.array([[[0.1, 0.9]], [[0.9, 0.1]]])
    model = DiscreteModel(lik, [0.5, 0.5], [1.0])
    return model, DiscretePosterior([0.5, 0.5])


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(label, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
