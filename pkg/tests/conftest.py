import numpy as np
import pytest

import constinfo as ci


@pytest.fixture(scope="session")
def p2u():
    return ci.uniform_distribution(2)


@pytest.fixture(scope="session")
def bpsk(p2u):
    return ci.normalize_energy(ci.mpam(1), p2u)


@pytest.fixture(scope="session")
def p4u():
    return ci.uniform_distribution(4)


@pytest.fixture(scope="session")
def c4u(p4u):
    # unit-energy equally spaced 4 points, spacing 2*sqrt(0.05)
    return ci.normalize_energy(ci.mpam(2), p4u)


@pytest.fixture(scope="session")
def p8u():
    return ci.uniform_distribution(8)


@pytest.fixture(scope="session")
def c8u(p8u):
    return ci.normalize_energy(ci.mpam(3), p8u)


@pytest.fixture(scope="session")
def wide4():
    # the running non-uniform example: unequal gaps, MED pairs at the edges
    return ci.Constellation([-4.0, -2.0, 2.0, 4.0])


@pytest.fixture(scope="session")
def p_wide4():
    return ci.InputDistribution([0.1, 0.2, 0.3, 0.4])
