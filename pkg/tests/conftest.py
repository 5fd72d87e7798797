import os

import pytest
from hypothesis import HealthCheck, settings

from circlereeb.region import Side, SSRegion

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _no_tol_env(monkeypatch):
    monkeypatch.delenv("PR_TOL", raising=False)


@pytest.fixture
def disk():
    return SSRegion.unit_disk()


@pytest.fixture
def bite():
    """Unit disk with a small disk removed around the boundary point at 45 degrees."""
    return SSRegion.build([(0, 0, 1, Side.KEEP_INSIDE),
                           (0.7071067811865476, 0.7071067811865476, 0.2, Side.KEEP_OUTSIDE)])
