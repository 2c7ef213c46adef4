import math

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from spraypath import FieldSpec

settings.register_profile("repo", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

TABLE_R = 5.0


@st.composite
def field_specs(draw, max_lanes=12):
    """Valid specs with turn_radius strictly below half the working width."""
    W = draw(st.floats(4.0, 40.0, allow_nan=False))
    R = draw(st.floats(0.5, 0.49 * W, allow_nan=False))
    H = draw(st.floats(max(4 * R, W) + 1.0, 300.0, allow_nan=False))
    N = draw(st.integers(2, max_lanes))
    entrance = draw(st.sampled_from(("SW", "SE", "NW", "NE")))
    return FieldSpec(W, H, N, R, entrance)


@pytest.fixture
def small_even():
    return FieldSpec(12.0, 100.0, 4, TABLE_R)


@pytest.fixture
def small_odd():
    return FieldSpec(12.0, 100.0, 5, TABLE_R)
