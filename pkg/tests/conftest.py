import random
from pathlib import Path

import pytest

from horidgca.laurent import GradedHori
from horidgca.tduality import build_gerbe_tower, universal_config

CORPUS = Path(__file__).parent / "corpus"


@pytest.fixture(scope="session")
def universal_tower():
    return build_gerbe_tower(universal_config())


@pytest.fixture(scope="session")
def universal_hori(universal_tower):
    return GradedHori(universal_tower)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def corpus():
    return CORPUS
