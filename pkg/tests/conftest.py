import pathlib
import random

import pytest

from nqcalc.config import load_settings

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    return random.Random(load_settings().seed)


@pytest.fixture
def fixtures_dir():
    return FIXTURES
