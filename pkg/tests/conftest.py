import random

import pytest

from quasiwhittaker.uea import WhittakerType

PHIS = [WhittakerType(1, 0), WhittakerType(0, 1), WhittakerType(2, 3)]


@pytest.fixture
def rng():
    return random.Random(20240601)
