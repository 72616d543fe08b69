import pytest

from convexlab import make_pair


@pytest.fixture(scope="session")
def smooth_pair():
    return make_pair("smooth")


@pytest.fixture(scope="session")
def polytope_pair():
    return make_pair("polytope")


@pytest.fixture(scope="session")
def rotated_pair():
    return make_pair("control-rotated")


@pytest.fixture(scope="session")
def shifted_pair():
    return make_pair("control-shifted")
