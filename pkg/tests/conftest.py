import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", 40)),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def grids(min_side=1, max_side=12, ndim=(1, 2)):
    """Random finite arrays with 1-3 axes."""
    return st.sampled_from(ndim).flatmap(
        lambda n: hnp.arrays(np.float64, hnp.array_shapes(min_dims=n, max_dims=n,
                                                          min_side=min_side, max_side=max_side),
                             elements=finite)
    )


def masks(min_side=2, max_side=16):
    return hnp.arrays(bool, hnp.array_shapes(min_dims=2, max_dims=2, min_side=min_side, max_side=max_side),
                      elements=st.booleans()).filter(lambda m: m.any())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
