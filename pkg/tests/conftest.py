import pytest

from kerrgate.modes import CavityGeometry, population_spectrum


@pytest.fixture(scope="session")
def geom_s0_1():
    return CavityGeometry.from_wavelength(1)


@pytest.fixture(scope="session")
def geom_s0_10():
    return CavityGeometry.from_wavelength(10)


@pytest.fixture(scope="session")
def spec_s0_1(geom_s0_1):
    return population_spectrum(geom_s0_1)


@pytest.fixture(scope="session")
def spec_s0_10(geom_s0_10):
    return population_spectrum(geom_s0_10)
