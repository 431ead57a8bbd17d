import pytest

from src.detsys import detect_orbit
from src.model import ConstantSignal, OUInput, SinusoidSignal


@pytest.fixture(scope="session")
def orbit15():
    """c = 15 的稳定轨道，多个测试共用"""
    return detect_orbit(ConstantSignal(c=15.0))


@pytest.fixture
def sinusoid():
    return SinusoidSignal(a=1.0, period=10.0)


@pytest.fixture
def ou():
    return OUInput(tau=1.0, gamma=1.0)
