"""
Jacobi theta constants, Weierstrass σ and ζ of a lattice, the invariant μ(Γ)
and the modified sigma function σ̃_μ(z) = e^{−μz²/2}σ(z).

σ is evaluated from θ1 with base period A = ω2 and τ = ω1/ω2:

    σ(z) = (A/π) · exp(η(A) z²/(2A)) · θ1(πz/A | τ) / θ1'(0 | τ),
    η(A) = −π² θ1'''(0) / (3A θ1'(0)),

after reducing z to the centred cell with σ(z0+γ) = χ_W(γ) e^{η(γ)(z0+γ/2)} σ(z0).
"""
import cmath
import logging
import math
from typing import Optional

import numpy as np

from thetakernel.core.config import Settings, settings
from thetakernel.core.exceptions import (
    InconsistentMu,
    NoConvergence,
    NomeOutOfRange,
    NotOneDimensional,
    PoleAtLatticePoint,
    ZeroGamma,
)
from thetakernel.core.schemas import (
    Lattice,
    LatticePoint,
    MuInvariant,
    ThetaIdentityReport,
    ThetaParams,
    WeierstrassData,
)
from thetakernel.core.utils import compensated_sum
from thetakernel.services.coeffs import coeff_service
from thetakernel.services.lattice import lattice_service


logger = logging.getLogger(__name__)


class EllipticService:
    """Theta constants and Weierstrass functions."""

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or settings
        self.theta_rtol = self.config.theta_rtol
        self.theta_max_terms = self.config.theta_max_terms
        self.product_radius = self.config.product_radius
        self.mu_tol = self.config.mu_tol

    # Theta constants

    def nome(self, q: complex) -> ThetaParams:
        """
        Validate a nome and fix the number of series terms.

        Raises:
            NomeOutOfRange: if |q| >= 1
            NoConvergence: if the tolerance needs more than theta_max_terms terms
        """
        q = complex(q)
        if not abs(q) < 1.0:
            raise NomeOutOfRange(f"|q| = {abs(q)!r} is not below 1", q=q)
        if q == 0:
            return ThetaParams(q=q, terms=0)
        # dropped terms decay like |q|^{n²}
        log_q = -math.log(abs(q))
        terms = int(math.ceil(math.sqrt(-math.log(self.theta_rtol * 1e-2) / log_q))) + 5
        if terms > self.theta_max_terms:
            raise NoConvergence(
                f"nome |q| = {abs(q)!r} needs {terms} theta terms, cap is {self.theta_max_terms}",
                q=q,
                terms=terms,
            )
        return ThetaParams(q=q, terms=terms)

    def theta2(self, q: complex) -> complex:
        """ϑ2(0, q) = 2 Σ_{n>=0} q^{(n+1/2)²} (principal branch of q^{1/4})."""
        params = self.nome(q)
        if params.terms == 0:
            return 0j
        log_q = cmath.log(params.q)
        terms = [2.0 * cmath.exp(log_q * (n + 0.5) ** 2) for n in range(params.terms)]
        return compensated_sum(terms)

    def theta3(self, q: complex) -> complex:
        """ϑ3(0, q) = 1 + 2 Σ_{n>=1} q^{n²}."""
        params = self.nome(q)
        if params.terms == 0:
            return 1 + 0j
        log_q = cmath.log(params.q)
        terms = [1 + 0j] + [2.0 * cmath.exp(log_q * n * n) for n in range(1, params.terms + 1)]
        return compensated_sum(terms)

    def theta_identity_residual(self, nu: float) -> float:
        """|ϑ2² − ϑ3² − 2ϑ2ϑ3| at nome e^{−2ν}, the identity as printed."""
        q = math.exp(-2.0 * nu)
        t2, t3 = self.theta2(q), self.theta3(q)
        return abs(t2 * t2 - t3 * t3 - 2.0 * t2 * t3)

    def theta_identity_report(self, nu: float, radius: int = 30) -> ThetaIdentityReport:
        """
        Compare the printed theta identity with the parity split of
        Σ χ_W(γ) e^{−(ν/2)|γ|²} over Z + iZ.

        The split sums (both odd, both even, mixed) are brute-forced over
        |m|, |n| <= radius; in theta constants they are ϑ2², ϑ3² and 2ϑ2ϑ3.
        """
        q = math.exp(-2.0 * nu)
        t2, t3 = self.theta2(q).real, self.theta3(q).real

        r = np.arange(-radius, radius + 1)
        m, n = np.meshgrid(r, r, indexing="ij")
        weight = np.exp(-0.5 * nu * (m * m + n * n))
        odd_m, odd_n = m % 2 == 1, n % 2 == 1
        odd_odd = math.fsum(weight[odd_m & odd_n])
        even_even = math.fsum(weight[~odd_m & ~odd_n])
        mixed = math.fsum(weight[odd_m ^ odd_n])

        report = ThetaIdentityReport(
            nu=nu,
            theta2=t2,
            theta3=t3,
            printed_residual=abs(t2 * t2 - t3 * t3 - 2.0 * t2 * t3),
            theta_combination=t3 * t3 - t2 * t2 - 2.0 * t2 * t3,
            split_odd_odd=odd_odd,
            split_even_even=even_even,
            split_mixed=mixed,
            split_combination=even_even - odd_odd - mixed,
            gaussian_char_sum=coeff_service.gaussian_char_sum(nu / math.pi),
        )
        logger.debug("Theta identity at nu=%s: printed residual %.3e", nu, report.printed_residual)
        return report

    # Weierstrass functions

    def weierstrass_data(self, lat: Lattice) -> WeierstrassData:
        """Quasi-periods η(ω1), η(ω2) and the θ1 constants of the lattice."""
        period = lat.omega2
        tau = lat.omega1 / lat.omega2
        nome = cmath.exp(1j * math.pi * tau)
        params = self.nome(nome)
        terms = max(params.terms, 1)
        k = np.arange(terms)
        odd = 2 * k + 1
        weights = (-1.0) ** k * np.exp(1j * math.pi * tau * (k + 0.5) ** 2)
        d1 = 2.0 * compensated_sum((weights * odd).tolist())
        d3 = -2.0 * compensated_sum((weights * odd ** 3).tolist())
        eta2 = -(math.pi ** 2) * d3 / (3.0 * period * d1)
        # Legendre: η(ω1)ω2 − η(ω2)ω1 = −2πi for Im(ω1/ω2) > 0
        eta1 = (eta2 * lat.omega1 - 2j * math.pi) / lat.omega2
        return WeierstrassData(
            lattice=lat,
            eta1=eta1,
            eta2=eta2,
            period=period,
            tau=tau,
            nome=nome,
            theta1_d1=d1,
            theta1_d3=d3,
            series_terms=terms,
        )

    def legendre(self, w: WeierstrassData) -> complex:
        """η(ω1)ω2 − η(ω2)ω1; equals −2πi in the stored orientation."""
        return w.eta1 * w.lattice.omega2 - w.eta2 * w.lattice.omega1

    def _theta1(self, w: WeierstrassData, v: np.ndarray, derivative: bool = False) -> np.ndarray:
        k = np.arange(w.series_terms)
        odd = (2 * k + 1).astype(float)
        weights = (-1.0) ** k * np.exp(1j * math.pi * w.tau * (k + 0.5) ** 2)
        phase = np.multiply.outer(v, odd)
        if derivative:
            return 2.0 * np.sum(weights * odd * np.cos(phase), axis=-1)
        return 2.0 * np.sum(weights * np.sin(phase), axis=-1)

    def _reduce(self, w: WeierstrassData, z: np.ndarray):
        lat = w.lattice
        s, t = lattice_service.coordinates(lat, z)
        m = np.floor(np.asarray(s) + 0.5).astype(np.int64)
        n = np.floor(np.asarray(t) + 0.5).astype(np.int64)
        gamma = lattice_service.points(lat, m, n)
        return z - gamma, m, n, gamma

    def sigma(self, w: WeierstrassData, z):
        """
        Weierstrass σ(z; Γ) with simple zeros exactly on Γ.

        Args:
            w: Weierstrass data of the lattice
            z: Complex scalar or array

        Returns:
            σ(z) with the shape of z
        """
        scalar = np.ndim(z) == 0
        z = np.asarray(z, dtype=complex)
        z0, m, n, gamma = self._reduce(w, z)
        a = w.period
        core = (a / math.pi) * np.exp(w.eta2 * z0 * z0 / (2.0 * a)) * self._theta1(w, math.pi * z0 / a) / w.theta1_d1
        sign = 1.0 - 2.0 * ((m + n + m * n) % 2)
        eta_gamma = m * w.eta1 + n * w.eta2
        value = sign * np.exp(eta_gamma * (z0 + 0.5 * gamma)) * core
        return complex(value) if scalar else value

    def zeta_w(self, w: WeierstrassData, z: complex) -> complex:
        """
        Weierstrass ζ = σ'/σ.

        Raises:
            PoleAtLatticePoint: if z is a lattice point
        """
        z = complex(z)
        z0, m, n, _ = self._reduce(w, np.asarray(z))
        z0 = complex(z0)
        scale = max(abs(w.lattice.omega1), abs(w.lattice.omega2))
        if abs(z0) <= 1e-12 * scale:
            raise PoleAtLatticePoint(f"zeta has a pole at lattice point {z}", z=z)
        a = w.period
        v = np.asarray(math.pi * z0 / a)
        ratio = complex(self._theta1(w, v, derivative=True)) / complex(self._theta1(w, v))
        return w.eta2 * z0 / a + (math.pi / a) * ratio + int(m) * w.eta1 + int(n) * w.eta2

    def sigma_product(self, lat: Lattice, z: complex, radius: Optional[int] = None) -> complex:
        """Truncated Weierstrass product z Π' (1 − z/γ) e^{z/γ + z²/(2γ²)} over max(|m|,|n|) <= radius."""
        radius = self.product_radius if radius is None else radius
        z = complex(z)
        if z == 0:
            return 0j
        gamma = self._punctured(lat, radius)
        u = z / gamma
        log_terms = np.log1p(-u) + u + 0.5 * u * u
        return z * cmath.exp(compensated_sum(log_terms.tolist()))

    def zeta_series(self, lat: Lattice, z: complex, radius: Optional[int] = None) -> complex:
        """Truncated series 1/z + Σ' (1/(z−γ) + 1/γ + z/γ²)."""
        radius = self.product_radius if radius is None else radius
        z = complex(z)
        gamma = self._punctured(lat, radius)
        terms = 1.0 / (z - gamma) + 1.0 / gamma + z / gamma ** 2
        return 1.0 / z + compensated_sum(terms.tolist())

    def _punctured(self, lat: Lattice, radius: int) -> np.ndarray:
        r = np.arange(-radius, radius + 1)
        m, n = np.meshgrid(r, r, indexing="ij")
        keep = (m != 0) | (n != 0)
        return lattice_service.points(lat, m[keep], n[keep])

    def quasi_period(self, w: WeierstrassData, gamma: LatticePoint) -> complex:
        """
        η(γ) = mη(ω1) + nη(ω2), the constant of σ(z+γ) = ±σ(z)e^{η(γ)(z+γ/2)}.

        Raises:
            ZeroGamma: for γ = 0
        """
        if gamma.m == 0 and gamma.n == 0:
            raise ZeroGamma("quasi-period is undefined at gamma = 0")
        return gamma.m * w.eta1 + gamma.n * w.eta2

    def mu_invariant(self, w: WeierstrassData, nu: float) -> MuInvariant:
        """
        Solve η(ω_l) = μω_l + ν·conj(ω_l) for both generators.

        Raises:
            NotOneDimensional: unless ν = π/S(Γ)
            InconsistentMu: if the two generator equations disagree
        """
        k = lattice_service.dimension(w.lattice, nu)
        if k != 1:
            raise NotOneDimensional(f"mu(Gamma) needs nu = pi/S, got dimension {k}", dimension=k)
        mus = [
            (eta - nu * omega.conjugate()) / omega
            for eta, omega in ((w.eta1, w.lattice.omega1), (w.eta2, w.lattice.omega2))
        ]
        mismatch = abs(mus[0] - mus[1])
        if mismatch > self.mu_tol * max(1.0, abs(mus[1])):
            raise InconsistentMu(f"generator equations give mu = {mus[0]} and {mus[1]}", mismatch=mismatch)
        return MuInvariant(mu=0.5 * (mus[0] + mus[1]), nu=float(nu), mismatch=mismatch)

    def modified_sigma(self, w: WeierstrassData, mu: MuInvariant, z):
        """σ̃_μ(z) = e^{−μz²/2} σ(z); scalar or array."""
        scalar = np.ndim(z) == 0
        z = np.asarray(z, dtype=complex)
        value = np.exp(-0.5 * mu.mu * z * z) * np.asarray(self.sigma(w, z))
        return complex(value) if scalar else value


# Global elliptic service instance
elliptic_service = EllipticService()
