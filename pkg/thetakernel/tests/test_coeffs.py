"""
Tests for the Hermite–Taylor lattice coefficients.
"""
import numpy as np
import pytest

from thetakernel.core.exceptions import NotRealCharacter, Overflow, ThetaKernelError
from thetakernel.core.schemas import CoeffRequest
from thetakernel.services.coeffs import REFERENCE_SUM_TABLE, coeff_service


def test_perelomov_vanishing(vn_space):
    """Test a_{0,0} vanishes on Z + iZ at ν = π."""
    result = coeff_service.coeff(CoeffRequest(space=vn_space, m=0, n=0))
    assert abs(result.value) < 1e-12 * result.abs_sum
    assert result.tail_bound >= 0.0


@pytest.mark.parametrize("t", sorted(REFERENCE_SUM_TABLE))
def test_sum_table_reference(t):
    """Test the Gaussian character sum against tabulated values."""
    assert coeff_service.gaussian_char_sum(t) == pytest.approx(REFERENCE_SUM_TABLE[t], abs=1e-9)


def test_sign_profile():
    """Test the sum is negative below t = 1, zero at 1 and increasing."""
    profile = coeff_service.sign_profile([0.5, 1.0, 2.0, 4.0])
    assert profile.signs == [-1, 0, 1, 1]
    assert profile.increasing
    assert profile.bounded_by_one


def test_table_matches_single_sums(square_space_2):
    """Test coeff_table entries against individual shell sums."""
    table = coeff_service.coeff_table(square_space_2, 4, 4, p=1, q=0)
    for m, n in [(0, 1), (2, 2), (4, 3)]:
        single = coeff_service.coeff_value(square_space_2, m, n, 1, 0)
        assert abs(table.values[m, n] - single) <= 1e-12 * max(1.0, float(table.mass[m, n]))


def test_parity_real_character(square_space_2, generic_space):
    """Test odd-total coefficients vanish for real characters."""
    for space in (square_space_2, generic_space):
        report = coeff_service.parity_report(space, 5)
        assert report.passed
        assert report.max_relative < 1e-10
        assert report.even_witness is not None


def test_parity_rejects_complex_character(complex_space):
    """Test the parity report needs a real character."""
    with pytest.raises(NotRealCharacter):
        coeff_service.parity_report(complex_space, 3)


@pytest.mark.parametrize("indices", [(1, 0, 0, 1), (2, 1, 1, 0), (0, 3, 2, 1)])
def test_conjugation_symmetry(complex_space, indices):
    """Test conj(a^{p,q}_{m,n}) = (−1)^{m+n+p+q} a^{q,p}_{n,m}."""
    assert coeff_service.conj_symmetry_residual(complex_space, *indices) < 1e-12


def test_recurrences(square_space_2):
    """Test the corrected recurrences hold and the index-swapped ones do not."""
    report = coeff_service.recurrence_residuals(square_space_2, 4)
    assert report.max_residual < 1e-9
    assert max(report.printed_residual_a, report.printed_residual_b) > 1e-6


def test_scaling(square_space_2):
    """Test coefficients transform under Γ → λΓ, ν → ν/|λ|²."""
    lam = 1.3 * np.exp(0.4j)
    for indices in [(0, 0, 0, 0), (1, 2, 0, 1), (2, 0, 2, 1)]:
        assert coeff_service.scaling_residual(square_space_2, lam, *indices) < 1e-9


def test_degree_cap(vn_space):
    """Test totals above the cap raise Overflow."""
    with pytest.raises(Overflow):
        coeff_service.coeff(CoeffRequest(space=vn_space, m=40, n=30))


def test_printed_conjugation_differs(generic_space):
    """Test the unswapped conjugation form fails where the swapped one holds."""
    assert coeff_service.conj_symmetry_residual(generic_space, 0, 0, 2, 0) < 1e-12
    assert coeff_service.printed_conj_residual(generic_space, 0, 0, 2, 0) > 1e-8


@pytest.mark.parametrize("t", [0.0, -1.0])
def test_sum_table_needs_positive_t(t):
    """Test the character sum is only defined for t > 0."""
    with pytest.raises(ThetaKernelError):
        coeff_service.gaussian_char_sum(t)


def test_tensor_degree_cap(vn_space):
    """Test the tensor is capped by its largest total m + n + p + q."""
    with pytest.raises(Overflow):
        coeff_service.coeff_tensor(vn_space, 16)
