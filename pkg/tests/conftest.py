import numpy as np
import pytest
from hypothesis import settings

from meridian4.numkit import TolerancePolicy

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def policy():
    return TolerancePolicy()


def assert_close(actual, expected, atol):
    np.testing.assert_allclose(np.asarray(actual, float), np.asarray(expected, float), rtol=0, atol=atol)
