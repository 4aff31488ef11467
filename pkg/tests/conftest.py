import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core import catalog  # noqa: E402
from src.core.config import config  # noqa: E402


@pytest.fixture(autouse=True)
def default_config():
    config.reset()
    config.output.progress = False
    yield
    config.reset()


@pytest.fixture(scope="session")
def s3():
    return catalog.resolve("symmetric(3)")


@pytest.fixture(scope="session")
def s4():
    return catalog.resolve("symmetric(4)")


@pytest.fixture(scope="session")
def a4():
    return catalog.resolve("alternating(4)")


@pytest.fixture(scope="session")
def a5():
    return catalog.resolve("alternating(5)")


@pytest.fixture(scope="session")
def q8():
    return catalog.resolve("quaternion8")


@pytest.fixture(scope="session")
def c6():
    return catalog.resolve("cyclic(6)")
