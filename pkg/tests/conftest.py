from fractions import Fraction

import pytest

from betashift import beta_from_expansion, family_10m1, golden_ratio


@pytest.fixture(scope="session")
def golden():
    return golden_ratio()


@pytest.fixture(scope="session")
def fam1():
    return family_10m1(1)


@pytest.fixture(scope="session")
def fam2():
    return family_10m1(2)


@pytest.fixture(scope="session")
def ones3():
    return beta_from_expansion("1110")


@pytest.fixture(scope="session")
def half():
    return Fraction(1, 2)
