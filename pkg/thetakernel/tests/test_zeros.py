"""
Tests for zero counting, location and the common-zero probe.
"""
import math

import numpy as np
import pytest

from thetakernel.core.exceptions import IdenticallyZero, NotOneDimensional, ThetaKernelError
from thetakernel.services.lattice import lattice_service
from thetakernel.services.zeros import zero_service


@pytest.mark.parametrize(
    "space_name, w, expected",
    [
        ("vn_space", complex(0.3, 0.2), 1),
        ("square_space_2", complex(0.2, 0.1), 2),
        ("square_space_3", complex(-0.15, 0.35), 3),
        ("generic_space", complex(0.1, -0.2), 1),
    ],
)
def test_zero_count_is_dimension(request, space_name, w, expected):
    """Test φ_w has exactly k zeros in a cell."""
    space = request.getfixturevalue(space_name)
    result = zero_service.zero_count(space, w)
    assert result.count == expected
    assert abs(result.winding_raw - expected) < 1e-3
    assert result.path_min_abs > 0


def test_identically_zero(vn_space):
    """Test w ∈ Γ gives φ_w ≡ 0 in the one-dimensional square case."""
    with pytest.raises(IdenticallyZero):
        zero_service.zero_count(vn_space, 0)
    with pytest.raises(IdenticallyZero):
        zero_service.zero_locate(vn_space, vn_space.lattice.omega1)


def test_locate_matches_count(square_space_2):
    """Test located zeros agree with the count and repeat under translation."""
    w = complex(0.2, 0.1)
    zeros = zero_service.zero_locate(square_space_2, w)
    assert len(zeros.zeros) == 2
    assert all(z.refined_abs < 1e-8 for z in zeros.zeros)
    assert zero_service.translation_closure_residual(square_space_2, w, zeros) < 1e-7
    assert zero_service.symmetry_residual(square_space_2, w, zeros) < 1e-7


def test_von_neumann_zero_on_lattice(vn_space):
    """Test the single zero of φ_w sits on Γ."""
    zeros = zero_service.zero_locate(vn_space, complex(0.3, 0.2))
    assert len(zeros.zeros) == 1
    assert abs(complex(lattice_service.centered_offset(vn_space.lattice, zeros.zeros[0].location))) < 1e-8


def test_poincare_common_zero(vn_space):
    """Test every P(e_m) vanishes at the origin."""
    assert zero_service.poincare_common_zero_residual(vn_space, 0, 4) < 1e-10


def test_xi_probe(vn_space):
    """Test the probe finds the origin and stays within the bound."""
    result = zero_service.xi_probe(vn_space, 4, 6)
    assert result.bound == 1
    assert not result.exceeds_bound
    assert not result.low_confidence
    assert len(result.candidates) == 1
    assert abs(complex(lattice_service.centered_offset(vn_space.lattice, result.candidates[0]))) < 1e-6


def test_sigma_factorisation(vn_space, generic_space):
    """Test K(z, w) / (σ̃(z) conj(σ̃(w))) is constant."""
    for space in (vn_space, generic_space):
        report = zero_service.sigma_factor_residual(space)
        assert report.spread < 1e-7
        assert report.deviation < 1e-7
        assert report.samples_used > 0
        assert report.constant.real > 0


def test_sigma_factorisation_dimension(square_space_2):
    """Test the factorisation is refused for k > 1."""
    with pytest.raises(NotOneDimensional):
        zero_service.sigma_factor_residual(square_space_2)


def test_cell_grid_size(generic_space):
    """Test the probing grid covers the cell."""
    grid = zero_service.cell_grid(generic_space, 5)
    assert grid.shape == (5, 5)
    s, t = lattice_service.coordinates(generic_space.lattice, grid)
    assert float(s.min()) == pytest.approx(0.1)
    assert float(t.max()) == pytest.approx(0.9)
    assert math.isfinite(zero_service.kernel_scale(generic_space, complex(0.2, 0.2)))


@pytest.mark.parametrize(
    "space_name, w, expected",
    [
        ("vn_space", complex(0.3, 0.2), 1),
        ("square_space_2", complex(0.2, 0.1), 2),
        ("generic_space", complex(0.1, -0.2), 1),
    ],
)
def test_zero_count_shift_invariant(request, space_name, w, expected):
    """Test the count does not depend on where the contour cell sits."""
    space = request.getfixturevalue(space_name)
    lat = space.lattice
    rng = np.random.default_rng(5)
    base = zero_service.base_shift(space)
    for s, t in rng.uniform(-0.25, 0.25, size=(5, 2)):
        result = zero_service.zero_count(space, w, shift=base + s * lat.omega1 + t * lat.omega2)
        assert result.count == expected


def test_explicit_zero_sizes_refused(square_space_2):
    """Test zero node and grid counts are not replaced by the defaults."""
    w = complex(0.2, 0.1)
    with pytest.raises(ThetaKernelError):
        zero_service.zero_count(square_space_2, w, nodes=0)
    with pytest.raises(ThetaKernelError):
        zero_service.zero_locate(square_space_2, w, grid=0)
