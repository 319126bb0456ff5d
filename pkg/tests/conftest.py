import pytest
from hypothesis import HealthCheck, settings

from capscope.documents import load_fixture

settings.register_profile(
    "default",
    settings(
        max_examples=60,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow],
    ),
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def street_walk_doc():
    return load_fixture("street_walk")


@pytest.fixture(scope="session")
def two_citizens_doc():
    return load_fixture("two_citizens")
