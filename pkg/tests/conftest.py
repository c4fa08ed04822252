import random

import pytest

from skewplus.fields import Field


@pytest.fixture
def Q():
    return Field.rationals()


@pytest.fixture
def rng():
    return random.Random(20240)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: full acceptance criteria")
