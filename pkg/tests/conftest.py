import numpy as np
import pytest

from hyperradial import PhysicalParams


@pytest.fixture
def params() -> PhysicalParams:
    return PhysicalParams()


@pytest.fixture(autouse=True)
def _seeded_rng():
    np.random.seed(20240811)
    yield
