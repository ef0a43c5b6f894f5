"""
Shared fixtures: corpus paths, seeded random generators, fuzz budgets
"""

import random

import pytest

from utils.config import get_data_path, get_settings
from utils.data_loaders import load_instance, load_program


def pytest_addoption(parser):
    parser.addoption("--seed", action="store", type=int, default=None, help="seed for randomized tests")
    parser.addoption(
        "--fuzz-full",
        action="store_true",
        default=False,
        help="run randomized tests with full-size budgets",
    )


@pytest.fixture(scope="session")
def seed(request) -> int:
    value = request.config.getoption("--seed")
    return value if value is not None else get_settings().seed


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


@pytest.fixture(scope="session")
def fuzz_full(request) -> bool:
    return request.config.getoption("--fuzz-full")


@pytest.fixture(scope="session")
def budget(fuzz_full):
    """budget(quick, full) picks the iteration count for this run"""

    def pick(quick: int, full: int) -> int:
        return full if fuzz_full else quick

    return pick


@pytest.fixture(scope="session")
def program():
    def load(name: str):
        return load_program(get_data_path(f"programs/{name}.jl"))

    return load


@pytest.fixture(scope="session")
def instance():
    def load(name: str):
        return load_instance(get_data_path(f"instances/{name}.json"))

    return load
