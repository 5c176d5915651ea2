"""
Pytest configuration and fixtures.
"""
import math
import os

import pytest

from thetakernel.services.kernel import kernel_service
from thetakernel.services.lattice import lattice_service
from thetakernel.services.pseudochar import pseudochar_service


@pytest.fixture(autouse=True)
def setup_test_environment(monkeypatch):
    """Run every test against the built-in numerical defaults."""
    for key in list(os.environ):
        if key.startswith("THETA_KERNEL_"):
            monkeypatch.delenv(key)


@pytest.fixture
def square_lattice():
    """Z + iZ (stored as (i, 1))."""
    return lattice_service.new_lattice(1.0, 1j)


@pytest.fixture
def generic_lattice():
    """Z + (0.3 + 1.1i)Z, cell area 1.1."""
    return lattice_service.new_lattice(1.0, complex(0.3, 1.1))


@pytest.fixture
def vn_space(square_lattice):
    """One-dimensional space on Z + iZ (ν = π, Weierstrass character)."""
    return kernel_service.space(square_lattice, math.pi)


@pytest.fixture
def square_space_2(square_lattice):
    return kernel_service.space(square_lattice, 2.0 * math.pi)


@pytest.fixture
def square_space_3(square_lattice):
    return kernel_service.space(square_lattice, 3.0 * math.pi)


@pytest.fixture
def generic_space(generic_lattice):
    return kernel_service.space(generic_lattice, math.pi / 1.1)


@pytest.fixture
def complex_space(square_lattice):
    """ν = 2π with a non-real character."""
    nu = 2.0 * math.pi
    chi = pseudochar_service.char_from_generators(square_lattice, nu, 1j, complex(math.cos(0.7), math.sin(0.7)))
    return kernel_service.space(square_lattice, nu, chi)
