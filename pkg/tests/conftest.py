import numpy as np
import pytest

from app.oracle import OracleConfig
from app.problem import BoundaryData, ekman_problem, new_problem
from app.stochastic import RandomCoefficients, TruncatedDistribution


@pytest.fixture
def ekman():
    return ekman_problem(1.0, 1.0)


@pytest.fixture
def zero_problem():
    return new_problem(np.zeros((2, 2)), np.eye(2), BoundaryData())


@pytest.fixture
def oracle_cfg():
    return OracleConfig()


@pytest.fixture
def example_coeffs():
    return RandomCoefficients(
        a_dist=TruncatedDistribution.normal(2.0, 0.1, 0.8, 1.2),
        nu_dist=TruncatedDistribution.gamma(4.0, 0.5, 1.5, rate=2.0),
    )


@pytest.fixture
def point_mass_coeffs():
    return RandomCoefficients(
        a_dist=TruncatedDistribution.normal(1.0, 0.1, 1.0, 1.0),
        nu_dist=TruncatedDistribution.gamma(4.0, 1.0, 1.0, rate=2.0),
    )
