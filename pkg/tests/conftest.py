import pytest

from vjp.jetspace import JetSpaceDescriptor
from vjp import rng as rng_mod


@pytest.fixture(autouse=True)
def _seeded_rng():
    rng_mod.set_seed(20240817)
    yield


@pytest.fixture
def mech1():
    """One field over time, second order."""
    return JetSpaceDescriptor(["t"], ["u"], 2)


@pytest.fixture
def mech2():
    """Two fields over time, first order (sphere problems)."""
    return JetSpaceDescriptor(["t"], ["u", "v"], 1)


@pytest.fixture
def plane():
    """One field over two base coordinates."""
    return JetSpaceDescriptor(["x", "y"], ["u"], 2)


@pytest.fixture
def plane2():
    """Two fields over two base coordinates."""
    return JetSpaceDescriptor(["x", "y"], ["u", "v"], 2)
