import random

import pytest
from hypothesis import settings

from pretzelkit.cancellative import FreeMonoid, bundled_monoid

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def c2():
    return bundled_monoid("c2")


@pytest.fixture(scope="session")
def c3():
    return bundled_monoid("c3")


@pytest.fixture(scope="session")
def z3z3():
    return bundled_monoid("z3xz3")


@pytest.fixture
def free_x():
    return FreeMonoid(("x",))


@pytest.fixture
def rng():
    return random.Random(20261015)
