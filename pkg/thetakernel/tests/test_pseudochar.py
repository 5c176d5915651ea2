"""
Tests for pseudo-characters.
"""
import math

import numpy as np
import pytest

from thetakernel.core.exceptions import ThetaKernelError
from thetakernel.services.lattice import lattice_service
from thetakernel.services.pseudochar import pseudochar_service


def test_weierstrass_values(square_lattice):
    """Test χ_W on generators and their sum for odd and even k."""
    odd = pseudochar_service.weierstrass_char(square_lattice, math.pi)
    even = pseudochar_service.weierstrass_char(square_lattice, 2.0 * math.pi)
    w1 = lattice_service.point(square_lattice, 1, 0)
    w12 = lattice_service.point(square_lattice, 1, 1)
    assert pseudochar_service.evaluate(odd, w1) == -1
    assert pseudochar_service.evaluate(odd, w12) == -1
    assert pseudochar_service.evaluate(even, w12) == 1
    assert odd.is_real


def test_half_lattice_rule(generic_lattice):
    """Test χ_W(γ) = 1 exactly when γ/2 ∈ Γ for k = 1."""
    chi = pseudochar_service.weierstrass_char(generic_lattice, math.pi / 1.1)
    r = np.arange(-4, 5)
    m, n = (a.ravel() for a in np.meshgrid(r, r, indexing="ij"))
    values = pseudochar_service.evaluate_array(chi, m, n)
    expected = np.where((m % 2 == 0) & (n % 2 == 0), 1.0, -1.0)
    assert np.array_equal(values.real, expected)


def test_cocycle_real(generic_lattice):
    """Test the cocycle identity for the Weierstrass character."""
    chi = pseudochar_service.weierstrass_char(generic_lattice, 2.0 * math.pi / 1.1)
    assert pseudochar_service.verify_cocycle(chi, 4) < 1e-10


def test_cocycle_complex(complex_space):
    """Test the cocycle identity for a non-real character."""
    assert not complex_space.chi.is_real
    assert pseudochar_service.verify_cocycle(complex_space.chi, 4) < 1e-10


def test_non_unimodular_generator(square_lattice):
    """Test generator values off the unit circle are rejected."""
    with pytest.raises(ThetaKernelError):
        pseudochar_service.char_from_generators(square_lattice, math.pi, 2.0, 1.0)


def test_inverse_is_conjugate(square_lattice, generic_lattice, complex_space):
    """Test χ(−γ) = conj(χ(γ)) on the first three shells."""
    characters = [
        complex_space.chi,
        pseudochar_service.weierstrass_char(generic_lattice, math.pi / 1.1),
        pseudochar_service.char_from_generators(square_lattice, 3.0 * math.pi, 1j, complex(math.cos(1.1), math.sin(1.1))),
    ]
    for chi in characters:
        for k in (1, 2, 3):
            for gamma in lattice_service.shell(chi.lattice, k):
                minus = lattice_service.point(chi.lattice, -gamma.m, -gamma.n)
                value = pseudochar_service.evaluate(chi, gamma)
                assert abs(pseudochar_service.evaluate(chi, minus) - value.conjugate()) < 1e-12
