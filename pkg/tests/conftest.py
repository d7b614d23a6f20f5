import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("tbgeo", max_examples=40, deadline=None)
settings.load_profile("tbgeo")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def sphere():
    from tbgeo.manifold import sphere2_stereographic

    return sphere2_stereographic()


@pytest.fixture
def sphere_fd():
    from tbgeo.manifold import sphere2_stereographic

    return sphere2_stereographic(analytic=False)
