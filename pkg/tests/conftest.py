import warnings

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "groovekit", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("groovekit")


@pytest.fixture
def quiet():
    """Silence the out-of-range m warning for tests that use m = 0 or similar."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield
