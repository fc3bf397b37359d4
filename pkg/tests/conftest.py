import os

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("desk", max_examples=40, deadline=None, derandomize=True)
settings.register_profile("stress", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "desk"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
