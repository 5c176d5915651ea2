"""
Full-rank lattices Γ = Zω1 + Zω2: construction, shells and cell geometry.
"""
import logging
import math
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from thetakernel.core.config import Settings, settings
from thetakernel.core.exceptions import DegenerateLattice, NonIntegralDimension
from thetakernel.core.schemas import FundamentalCell, Lattice, LatticePoint


logger = logging.getLogger(__name__)


@lru_cache(maxsize=512)
def _shell_indices(k: int) -> Tuple[np.ndarray, np.ndarray]:
    if k == 0:
        return np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64)
    r = np.arange(-k, k + 1, dtype=np.int64)
    m, n = np.meshgrid(r, r, indexing="ij")
    mask = np.maximum(np.abs(m), np.abs(n)) == k
    m, n = m[mask], n[mask]
    m.setflags(write=False)
    n.setflags(write=False)
    return m, n


class LatticeService:
    """Service for lattice construction and geometry."""

    def __init__(self, config: Optional[Settings] = None):
        """Initialize with numerical tolerances."""
        self.config = config or settings
        self.degeneracy_tol = self.config.degeneracy_tol
        self.integrality_tol = self.config.integrality_tol

    def new_lattice(self, omega1: complex, omega2: complex) -> Lattice:
        """
        Build a normalized lattice.

        Args:
            omega1: First generator
            omega2: Second generator

        Returns:
            Lattice with Im(ω1·conj(ω2)) > 0 (generators swapped if needed)

        Raises:
            DegenerateLattice: if the generators are (nearly) collinear
        """
        omega1, omega2 = complex(omega1), complex(omega2)
        cross = (omega1 * omega2.conjugate()).imag
        if abs(cross) <= self.degeneracy_tol * abs(omega1) * abs(omega2) or cross == 0.0:
            raise DegenerateLattice(
                f"generators {omega1} and {omega2} are collinear",
                omega1=omega1,
                omega2=omega2,
            )
        if cross < 0:
            logger.debug("Swapping generators %s, %s for orientation", omega1, omega2)
            omega1, omega2 = omega2, omega1
        return Lattice(omega1=omega1, omega2=omega2)

    def scaled(self, lat: Lattice, lam: complex) -> Lattice:
        """The lattice λΓ; orientation is preserved by complex scaling."""
        return self.new_lattice(lam * lat.omega1, lam * lat.omega2)

    def cell_area(self, lat: Lattice) -> float:
        """Cell area S(Γ) = |Im(ω1·conj(ω2))|."""
        return abs((lat.omega1 * lat.omega2.conjugate()).imag)

    def shell_radius(self, lat: Lattice) -> float:
        """
        Lower bound h with |γ| >= k·h for every γ in shell k.

        The shell-k points sit on the lines m = ±k or n = ±k, whose distances
        from the origin are k·S/|ω2| and k·S/|ω1|.
        """
        area = self.cell_area(lat)
        return area / max(abs(lat.omega1), abs(lat.omega2))

    def shell_indices(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """Coefficient arrays (m, n) of shell k in lexicographic order."""
        return _shell_indices(int(k))

    def shell(self, lat: Lattice, k: int) -> List[LatticePoint]:
        """All lattice points with max(|m|,|n|) = k, lexicographic in (m, n)."""
        m, n = self.shell_indices(k)
        return [
            LatticePoint(m=int(a), n=int(b), value=a * lat.omega1 + b * lat.omega2)
            for a, b in zip(m.tolist(), n.tolist())
        ]

    def points(self, lat: Lattice, m: np.ndarray, n: np.ndarray) -> np.ndarray:
        """Values m·ω1 + n·ω2 for coefficient arrays."""
        return m * lat.omega1 + n * lat.omega2

    def point(self, lat: Lattice, m: int, n: int) -> LatticePoint:
        return LatticePoint(m=m, n=n, value=m * lat.omega1 + n * lat.omega2)

    def coordinates(self, lat: Lattice, z):
        """Real coordinates (s, t) with z = s·ω1 + t·ω2."""
        z = np.asarray(z, dtype=complex)
        cross = (lat.omega1 * lat.omega2.conjugate()).imag
        s = (z * lat.omega2.conjugate()).imag / cross
        t = (lat.omega1 * np.conj(z)).imag / cross
        return s, t

    def reduce_to_cell(self, cell: FundamentalCell, z: complex) -> Tuple[complex, LatticePoint]:
        """
        Decompose z = z0 + γ with z0 in the cell.

        Args:
            cell: Fundamental cell (origin and lattice)
            z: Point to reduce

        Returns:
            Tuple of the reduced point z0 and the lattice point γ
        """
        lat = cell.lattice
        s, t = self.coordinates(lat, complex(z) - cell.origin)
        s, t = float(s), float(t)
        m, n = math.floor(s), math.floor(t)
        if s - m >= 1.0:
            m += 1
        if t - n >= 1.0:
            n += 1
        gamma = self.point(lat, m, n)
        return complex(z) - gamma.value, gamma

    def centered_offset(self, lat: Lattice, z):
        """Shortest-coordinate representative of z modulo Γ (coordinates in [-1/2, 1/2))."""
        s, t = self.coordinates(lat, z)
        s = s - np.floor(s + 0.5)
        t = t - np.floor(t + 0.5)
        return s * lat.omega1 + t * lat.omega2

    def dimension(self, lat: Lattice, nu: float) -> int:
        """
        Dimension k = (ν/π)·S(Γ) of the theta Fock space.

        Raises:
            NonIntegralDimension: if k is not a positive integer within tolerance
        """
        value = nu / math.pi * self.cell_area(lat)
        k = round(value)
        if k < 1 or abs(value - k) >= self.integrality_tol:
            raise NonIntegralDimension(
                f"(nu/pi)*S = {value!r} is not a positive integer; no pseudo-character exists",
                value=value,
            )
        return int(k)

    def to_json(self, lat: Lattice) -> Dict[str, Any]:
        return {
            "omega1": [lat.omega1.real, lat.omega1.imag],
            "omega2": [lat.omega2.real, lat.omega2.imag],
        }

    def from_json(self, data: Dict[str, Any]) -> Lattice:
        w1, w2 = data["omega1"], data["omega2"]
        return self.new_lattice(complex(w1[0], w1[1]), complex(w2[0], w2[1]))


# Global lattice service instance
lattice_service = LatticeService()
