import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "kinj", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("kinj")


@pytest.fixture(autouse=True)
def rational_field():
    from kinj import exactlin as el

    with el.use_field("rational"):
        yield
