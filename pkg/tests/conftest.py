import numpy as np
import pytest

from redist.discretization import generate_square_mesh, DGSpace


@pytest.fixture(scope="session")
def mesh240():
    return generate_square_mesh(2.0, 0.4)


@pytest.fixture(scope="session")
def space240(mesh240):
    return DGSpace(mesh240, 3)


@pytest.fixture(scope="session")
def small_space():
    return DGSpace(generate_square_mesh(1.0, 0.5), 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the mesh-refinement studies marked slow")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: mesh-refinement study taking minutes")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
