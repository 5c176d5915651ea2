"""
Tests for theta constants and Weierstrass functions.
"""
import cmath
import math

import mpmath
import numpy as np
import pytest

from thetakernel.core.exceptions import (
    NoConvergence,
    NomeOutOfRange,
    NotOneDimensional,
    PoleAtLatticePoint,
    ZeroGamma,
)
from thetakernel.services.coeffs import coeff_service
from thetakernel.services.elliptic import elliptic_service
from thetakernel.services.kernel import kernel_service
from thetakernel.services.lattice import lattice_service


@pytest.fixture
def generic_data(generic_lattice):
    return elliptic_service.weierstrass_data(generic_lattice)


@pytest.mark.parametrize("q", [0.05, 0.3, 0.7])
def test_theta_constants(q):
    """Test ϑ2(0, q) and ϑ3(0, q) against mpmath."""
    assert elliptic_service.theta2(q).real == pytest.approx(float(mpmath.jtheta(2, 0, q)), rel=1e-14)
    assert elliptic_service.theta3(q).real == pytest.approx(float(mpmath.jtheta(3, 0, q)), rel=1e-14)


def test_nome_out_of_range():
    """Test |q| >= 1 is rejected."""
    with pytest.raises(NomeOutOfRange):
        elliptic_service.nome(1.0)


def test_theta_identity_split():
    """Test the parity split equals ϑ3² − ϑ2² − 2ϑ2ϑ3 and the Gaussian character sum."""
    for nu in (0.5, 1.0, math.pi):
        report = elliptic_service.theta_identity_report(nu)
        assert abs(report.split_combination - report.gaussian_char_sum) < 1e-12
        assert abs(report.theta_combination - report.gaussian_char_sum) < 1e-12
        assert report.printed_residual > 1e-3


def test_theta_identity_vanishes_at_unit_t():
    """Test the combination vanishes at ν = π, where the Gaussian sum does."""
    report = elliptic_service.theta_identity_report(math.pi)
    assert abs(report.theta_combination) < 1e-12
    assert coeff_service.gaussian_char_sum(1.0) == pytest.approx(0.0, abs=1e-14)


def test_legendre_relation(generic_data):
    """Test η(ω1)ω2 − η(ω2)ω1 = −2πi."""
    assert abs(elliptic_service.legendre(generic_data) + 2j * math.pi) < 1e-12


def test_sigma_near_origin(generic_data):
    """Test σ(z) = z + O(z⁵)."""
    z = complex(1e-3, 2e-3)
    assert abs(elliptic_service.sigma(generic_data, z) - z) < 1e-9 * abs(z)


def test_sigma_zeros_on_lattice(generic_data, generic_lattice):
    """Test σ vanishes at lattice points."""
    for gamma in lattice_service.shell(generic_lattice, 1):
        assert abs(elliptic_service.sigma(generic_data, gamma.value)) < 1e-12


def test_sigma_against_product(generic_data, generic_lattice):
    """Test the theta form against the truncated Weierstrass product."""
    z = complex(0.3, 0.2)
    theta_form = elliptic_service.sigma(generic_data, z)
    product = elliptic_service.sigma_product(generic_lattice, z)
    assert abs(theta_form - product) < 1e-4 * abs(theta_form)


def test_sigma_quasi_periodicity(generic_data, generic_lattice):
    """Test σ(z + γ) = χ_W(γ) e^{η(γ)(z + γ/2)} σ(z)."""
    z = complex(0.21, -0.13)
    s = elliptic_service.sigma(generic_data, z)
    for m, n, sign in [(1, 0, -1), (0, 1, -1), (1, 1, -1), (2, 0, 1)]:
        gamma = lattice_service.point(generic_lattice, m, n)
        eta = elliptic_service.quasi_period(generic_data, gamma)
        expected = sign * cmath.exp(eta * (z + 0.5 * gamma.value)) * s
        assert abs(elliptic_service.sigma(generic_data, z + gamma.value) - expected) < 1e-10 * abs(expected)


def test_zeta_is_log_derivative(generic_data):
    """Test ζ = σ'/σ by central differences."""
    z, h = complex(0.35, 0.4), 1e-5
    s = elliptic_service.sigma(generic_data, z)
    numeric = (elliptic_service.sigma(generic_data, z + h) - elliptic_service.sigma(generic_data, z - h)) / (2 * h * s)
    zeta = elliptic_service.zeta_w(generic_data, z)
    assert abs(zeta - numeric) < 1e-6 * abs(zeta)


def test_zeta_against_series(generic_data, generic_lattice):
    """Test ζ against its truncated partial-fraction series."""
    z = complex(0.35, 0.4)
    zeta = elliptic_service.zeta_w(generic_data, z)
    assert abs(zeta - elliptic_service.zeta_series(generic_lattice, z)) < 1e-3 * abs(zeta)


def test_zeta_pole(generic_data, generic_lattice):
    """Test ζ raises at lattice points."""
    with pytest.raises(PoleAtLatticePoint):
        elliptic_service.zeta_w(generic_data, 0)
    with pytest.raises(PoleAtLatticePoint):
        elliptic_service.zeta_w(generic_data, generic_lattice.omega1)


def test_quasi_period_zero(generic_data, generic_lattice):
    """Test η(0) is rejected."""
    with pytest.raises(ZeroGamma):
        elliptic_service.quasi_period(generic_data, lattice_service.point(generic_lattice, 0, 0))


def test_mu_square_lattice(square_lattice):
    """Test μ(Z + iZ) = 0 at ν = π."""
    data = elliptic_service.weierstrass_data(square_lattice)
    mu = elliptic_service.mu_invariant(data, math.pi)
    assert abs(mu.mu) < 1e-10
    assert mu.mismatch < 1e-10


def test_mu_needs_dimension_one(square_lattice):
    """Test μ is only defined for ν = π/S."""
    data = elliptic_service.weierstrass_data(square_lattice)
    with pytest.raises(NotOneDimensional):
        elliptic_service.mu_invariant(data, 2.0 * math.pi)


def test_modified_sigma_generic(generic_data):
    """Test σ̃_μ is scalar for scalar input and matches its definition."""
    mu = elliptic_service.mu_invariant(generic_data, math.pi / 1.1)
    z = complex(0.2, 0.1)
    value = elliptic_service.modified_sigma(generic_data, mu, z)
    assert isinstance(value, complex)
    assert abs(value - cmath.exp(-0.5 * mu.mu * z * z) * elliptic_service.sigma(generic_data, z)) < 1e-14


def test_printed_theta_identity_residual():
    """Test the identity in its printed arrangement does not hold."""
    assert elliptic_service.theta_identity_residual(1.0) > 1e-3


@pytest.mark.parametrize("q", [0.99, 0.9999, 0.99999])
def test_theta_constants_near_unit_nome(q):
    """Test the series length grows with the nome instead of truncating."""
    assert elliptic_service.theta2(q).real == pytest.approx(float(mpmath.jtheta(2, 0, q)), rel=1e-11)
    assert elliptic_service.theta3(q).real == pytest.approx(float(mpmath.jtheta(3, 0, q)), rel=1e-11)


def test_nome_too_close_to_one():
    """Test a nome needing more than theta_max_terms terms raises."""
    with pytest.raises(NoConvergence):
        elliptic_service.nome(1.0 - 1e-12)


def test_modified_sigma_functional_equation(generic_space, generic_data):
    """Test σ̃_μ lies in the one-dimensional space of the generic lattice."""
    mu = elliptic_service.mu_invariant(generic_data, generic_space.nu)
    rng = np.random.default_rng(11)
    lat = generic_space.lattice

    def f(z):
        return elliptic_service.modified_sigma(generic_data, mu, z)

    shell = lattice_service.shell(lat, 1)
    for s, t in rng.uniform(-0.5, 0.5, size=(20, 2)):
        z = s * lat.omega1 + t * lat.omega2
        for gamma in shell:
            assert kernel_service.functional_equation_residual(generic_space, f, z, gamma) < 1e-8


@pytest.mark.parametrize("lam", [2.0, 1j, complex(0.7, -1.3)])
def test_sigma_homogeneity(generic_data, generic_lattice, lam):
    """Test σ(λz; λΓ) = λ σ(z; Γ)."""
    scaled = elliptic_service.weierstrass_data(lattice_service.scaled(generic_lattice, lam))
    for z in (complex(0.3, 0.2), complex(-0.41, 0.17)):
        expected = lam * elliptic_service.sigma(generic_data, z)
        assert abs(elliptic_service.sigma(scaled, lam * z) - expected) < 1e-9 * abs(expected)


def test_mu_scaled_square_lattice(square_lattice):
    """Test μ(λ(Z + iZ)) = 0 at ν = π/|λ|²."""
    for lam in (1.3 * cmath.exp(0.4j), complex(0.6, 0.9), 2.0):
        data = elliptic_service.weierstrass_data(lattice_service.scaled(square_lattice, lam))
        mu = elliptic_service.mu_invariant(data, math.pi / abs(lam) ** 2)
        assert abs(mu.mu) < 1e-9
