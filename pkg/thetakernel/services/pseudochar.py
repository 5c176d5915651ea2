"""
Pseudo-characters χ: Γ → U(1) satisfying
χ(γ+γ') = χ(γ)χ(γ')·exp((ν/2)(γ·conj(γ') − conj(γ)·γ')).
"""
import cmath
import logging
from typing import Optional

import numpy as np

from thetakernel.core.config import Settings, settings
from thetakernel.core.exceptions import ThetaKernelError
from thetakernel.core.schemas import Lattice, LatticePoint, PseudoCharacter
from thetakernel.services.lattice import lattice_service


logger = logging.getLogger(__name__)


class PseudoCharacterService:
    """Construction and evaluation of pseudo-characters from generator values."""

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or settings
        self.unit_tol = self.config.unit_tol

    def char_from_generators(self, lat: Lattice, nu: float, u1: complex, u2: complex) -> PseudoCharacter:
        """
        Extend the generator values u1 = χ(ω1), u2 = χ(ω2) to all of Γ.

        The extension is χ(mω1 + nω2) = u1^m·u2^n·(−1)^(k·m·n) with k = (ν/π)S(Γ).

        Raises:
            NonIntegralDimension: if (ν/π)S(Γ) is not a positive integer
        """
        k = lattice_service.dimension(lat, nu)
        u1, u2 = complex(u1), complex(u2)
        for label, u in (("u1", u1), ("u2", u2)):
            if abs(abs(u) - 1.0) > self.unit_tol:
                raise ThetaKernelError(f"{label} = {u} is not unimodular")
        # snap near-real units to exact ±1 so real characters stay exactly real
        u1, u2 = _snap(u1), _snap(u2)
        return PseudoCharacter(lattice=lat, nu=float(nu), u1=u1, u2=u2, k=k)

    def weierstrass_char(self, lat: Lattice, nu: float) -> PseudoCharacter:
        """χ_W: u1 = u2 = −1; for odd k, +1 exactly when γ/2 ∈ Γ."""
        return self.char_from_generators(lat, nu, -1.0, -1.0)

    def transported(self, chi: PseudoCharacter, lat: Lattice, nu: float) -> PseudoCharacter:
        """Character of λΓ with χ_λΓ(λγ) = χ_Γ(γ) (same generator values)."""
        return self.char_from_generators(lat, nu, chi.u1, chi.u2)

    def evaluate(self, chi: PseudoCharacter, gamma: LatticePoint) -> complex:
        """Value χ(γ) of a single lattice point."""
        return complex(self.evaluate_array(chi, np.array([gamma.m]), np.array([gamma.n]))[0])

    def evaluate_array(self, chi: PseudoCharacter, m: np.ndarray, n: np.ndarray) -> np.ndarray:
        """Vectorised χ(mω1 + nω2); the cocycle sign is taken from integer parity."""
        m = np.asarray(m, dtype=np.int64)
        n = np.asarray(n, dtype=np.int64)
        sign = 1.0 - 2.0 * ((chi.k * m * n) % 2)
        if chi.is_real:
            s1 = np.where(m % 2 == 1, chi.u1.real, 1.0)
            s2 = np.where(n % 2 == 1, chi.u2.real, 1.0)
            return (s1 * s2 * sign).astype(complex)
        phase = m * cmath.phase(chi.u1) + n * cmath.phase(chi.u2)
        return np.exp(1j * phase) * sign

    def cocycle_factor(self, nu: float, g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
        """exp((ν/2)(γ·conj(γ') − conj(γ)·γ')); the exponent is purely imaginary."""
        return np.exp(0.5 * nu * (g1 * np.conj(g2) - np.conj(g1) * g2))

    def verify_cocycle(self, chi: PseudoCharacter, radius: int) -> float:
        """
        Maximum cocycle residual over all γ, γ' with coefficients in [−radius, radius].

        Args:
            chi: Pseudo-character
            radius: Coefficient range

        Returns:
            max |χ(γ+γ') − χ(γ)χ(γ')exp((ν/2)(γγ̄' − γ̄γ'))|
        """
        lat = chi.lattice
        r = np.arange(-radius, radius + 1, dtype=np.int64)
        m, n = np.meshgrid(r, r, indexing="ij")
        m, n = m.ravel(), n.ravel()
        values = self.evaluate_array(chi, m, n)
        gammas = lattice_service.points(lat, m, n)

        lhs = self.evaluate_array(chi, m[:, None] + m[None, :], n[:, None] + n[None, :])
        rhs = values[:, None] * values[None, :] * self.cocycle_factor(chi.nu, gammas[:, None], gammas[None, :])
        residual = float(np.max(np.abs(lhs - rhs)))
        logger.debug("Cocycle residual %.3e at radius %d", residual, radius)
        return residual


def _snap(u: complex) -> complex:
    if abs(u.imag) < 1e-15 and abs(abs(u.real) - 1.0) < 1e-15:
        return complex(1.0 if u.real > 0 else -1.0, 0.0)
    return u


# Global pseudo-character service instance
pseudochar_service = PseudoCharacterService()
