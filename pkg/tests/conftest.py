"""Shared fixtures and published reference data for the test suite."""

import numpy as np
import pytest

from stripedbox import SpectralBasisConfig, StripePotentials, standard_geometry

# Published benchmark: lowest five eigenvalues (Ry) for the reference box
# (a=sqrt(3), b=sqrt(2), b1=0.4b, b3=0.6b, nx0=1) under seven all-real stripe
# sets, as tabulated to four significant figures.
REFERENCE_SETS = {
    "I": ((100, -100, 100, -100), (-72.61, -6.131, 18.88, 112.7, 134.9)),
    "II": ((100, -100, -100, 100), (-43.67, 83.23, 130.1, 145.2, 203.8)),
    "III": ((-100, 100, 100, -100), (-72.69, -72.22, -3.023, 0.230, 98.42)),
    "IV": ((100, -100, 100, 100), (12.56, 119.9, 132.9, 171.9, 211.8)),
    "V": ((-100, 100, -100, -100), (-80.60, -72.45, -32.74, -1.211, 46.75)),
    "VI": ((100, -100, -100, -100), (-85.05, -50.30, 6.566, 81.70, 132.2)),
    "VII": ((-100, 100, 100, 100), (-72.45, -1.436, 101.7, 121.6, 161.1)),
}

# Baseline (empty box) values as printed in the same table.
REFERENCE_BASELINE = (8.224, 23.03, 47.70, 82.25, 126.7)


@pytest.fixture(scope="session")
def geom():
    return standard_geometry()


@pytest.fixture(scope="session")
def basis50():
    return SpectralBasisConfig(nx0=1, nmax=50)


@pytest.fixture(scope="session")
def basis30():
    return SpectralBasisConfig(nx0=1, nmax=30)


def stripe_set(name: str) -> StripePotentials:
    return StripePotentials(*REFERENCE_SETS[name][0])


def expected_levels(name: str) -> np.ndarray:
    return np.array(REFERENCE_SETS[name][1], dtype=float)
