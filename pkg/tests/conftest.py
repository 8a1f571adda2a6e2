import pytest
from hypothesis import HealthCheck, settings

from prational.numerics import certify_roots, growth_constants
from prational.quadfield import make_field, minpoly_of

settings.register_profile(
    "ci",
    max_examples=50,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def field2():
    return make_field(2)


@pytest.fixture(scope="session")
def field5():
    return make_field(5)


@pytest.fixture(scope="session")
def eps2(field2):
    return field2.fundamental_unit


@pytest.fixture(scope="session")
def constants2(eps2):
    return growth_constants(certify_roots(minpoly_of(eps2)))
