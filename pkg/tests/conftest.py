import numpy as np
import pytest
from hypothesis import settings

from symrpr import GeometryParams

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ref():
    return GeometryParams(b=1.0, h=1.0, d=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_geometry(rng):
    return GeometryParams(
        b=float(rng.uniform(0.2, 3.0)),
        h=float(rng.uniform(0.2, 3.0)),
        d=float(rng.uniform(-2.0, 2.0)),
    )
