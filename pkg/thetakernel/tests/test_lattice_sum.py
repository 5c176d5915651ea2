"""
Tests for shell-ordered lattice summation.
"""
import math

import numpy as np
import pytest

from thetakernel.core.config import Settings
from thetakernel.core.exceptions import NoConvergence, Overflow, ThetaKernelError
from thetakernel.core.schemas import TailModel
from thetakernel.services.elliptic import elliptic_service
from thetakernel.services.lattice_sum import LatticeSummer, lattice_summer


def test_gaussian_sum_is_theta_square(square_lattice):
    """Test Σ e^{−π|γ|²} over Z + iZ equals ϑ3(e^{−π})²."""

    def summand(m, n, gamma):
        return np.exp(-math.pi * np.abs(gamma) ** 2)

    result = lattice_summer.shell_sum(square_lattice, summand, 1e-16)
    expected = elliptic_service.theta3(math.exp(-math.pi)).real ** 2
    assert result.value.real == pytest.approx(expected, rel=1e-14)
    assert result.abs_sum == pytest.approx(expected, rel=1e-14)
    assert result.shells_used >= lattice_summer.quiet_shells


def test_vector_summand(square_lattice):
    """Test leading summand axes are summed independently."""

    def summand(m, n, gamma):
        base = np.exp(-math.pi * np.abs(gamma) ** 2)
        return np.stack([base, 2.0 * base])

    value, mass, _ = lattice_summer.accumulate(square_lattice, summand, 1e-16)
    assert value.shape == (2,)
    assert value[1] == pytest.approx(2.0 * value[0])


def test_shell_cap(square_lattice):
    """Test a non-decaying summand hits the shell cap."""
    summer = LatticeSummer(Settings(shell_cap=5))
    with pytest.raises(NoConvergence):
        summer.accumulate(square_lattice, lambda m, n, gamma: np.ones(gamma.shape), 1e-14)


def test_guard_overflow():
    """Test exponents beyond the clamp raise Overflow."""
    assert lattice_summer.guard(np.array([1.0]))[0] == pytest.approx(math.e)
    with pytest.raises(Overflow):
        lattice_summer.guard(np.array([800.0 + 1j]))


def test_tail_estimate_decreases(square_lattice):
    """Test the tail majorant shrinks as more shells are taken."""
    model = TailModel(nu=math.pi, degree=2)
    tails = [lattice_summer.tail_estimate(square_lattice, model, k) for k in (2, 4, 6)]
    assert tails[0] > tails[1] > tails[2] >= 0.0


def test_block_shells_cap(square_lattice):
    """Test an oversized fixed block is refused."""
    summer = LatticeSummer(Settings(shell_cap=4))
    with pytest.raises(NoConvergence):
        summer.block_shells(square_lattice, math.pi, 10.0, 1e-14)


@pytest.mark.parametrize("eps", [0.0, -1e-14])
def test_tolerance_must_be_positive(square_lattice, eps):
    """Test non-positive tolerances are refused."""
    with pytest.raises(ThetaKernelError):
        lattice_summer.accumulate(square_lattice, lambda m, n, gamma: np.ones(gamma.shape), eps)
    with pytest.raises(ThetaKernelError):
        lattice_summer.block_shells(square_lattice, math.pi, 1.0, eps)
