import numpy as np
import pytest

from diracflow import dirac as dr, doublegroup as dg, sl2c
from diracflow.verify import DEFAULT_SEED


@pytest.fixture(scope="session")
def desc():
    return sl2c.descriptor()


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)


@pytest.fixture
def basis(desc):
    return [dg.AlgebraVector.basis_element(desc, k) for k in range(6)]


def make_point(rng, desc, eta_minus=None):
    g = dg.random_group(rng, desc)
    eta = dg.random_dual(rng, desc)
    if eta_minus is not None:
        coords = eta.coords.copy()
        coords[3:] = eta_minus
        eta = dg.DualVector(desc, coords)
    return dr.PhasePoint(g, eta)
