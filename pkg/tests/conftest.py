import numpy as np
import pytest

from sparse2inverse import Geometry, radon
from sparse2inverse.projector import Sinogram


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def geom64():
    return Geometry(64, 64, n_angles_full=16)


@pytest.fixture(scope="session")
def geom128():
    return Geometry(128, 128, n_angles_full=180)


def dense_operator(geom, angle_ids):
    """Materialize the projector as an explicit matrix, one basis image at
    a time. Test-side oracle; independent of any vectorized code path."""
    angle_ids = np.asarray(angle_ids)
    h, w = geom.image_shape
    cols = []
    for i in range(h * w):
        e = np.zeros(h * w)
        e[i] = 1.0
        cols.append(radon(e.reshape(h, w), geom, angle_ids).data.ravel())
    return np.stack(cols, axis=1)


def make_sinogram(data, angle_ids):
    return Sinogram(np.asarray(data, dtype=np.float64), np.asarray(angle_ids))
