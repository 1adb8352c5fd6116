import factory.random
import pytest


@pytest.fixture(autouse=True)
def _seeded_factories():
    factory.random.reseed_random(20240611)
