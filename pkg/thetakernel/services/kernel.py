"""
The reproducing kernel of the theta Bargmann–Fock space

    K(z, w) = (ν/π) Σ_γ χ(γ) e^{−(ν/2)|γ|² + ν(z·conj(γ) − conj(w)·γ + z·conj(w))},

its Hermite–Taylor and Poincaré-series expansions, and the structural
identities it satisfies.
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from thetakernel.core.config import Settings, settings
from thetakernel.core.exceptions import ThetaKernelError
from thetakernel.core.schemas import (
    Lattice,
    LatticePoint,
    PseudoCharacter,
    SumResult,
    TailModel,
    ThetaFockSpace,
)
from thetakernel.core.utils import gauss_legendre_unit, relative
from thetakernel.services.coeffs import coeff_service
from thetakernel.services.lattice import lattice_service
from thetakernel.services.lattice_sum import lattice_summer
from thetakernel.services.pseudochar import pseudochar_service


logger = logging.getLogger(__name__)


class KernelService:
    """Evaluation of K(z, w) and the Poincaré series P(e_m)."""

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or settings
        self.kernel_eps = self.config.kernel_eps
        self.quad_nodes = self.config.quad_nodes

    def space(self, lat: Lattice, nu: float, chi: Optional[PseudoCharacter] = None) -> ThetaFockSpace:
        """
        Bundle (Γ, ν, χ); χ defaults to the Weierstrass character.

        Raises:
            NonIntegralDimension: if (ν/π)S(Γ) is not a positive integer
        """
        k = lattice_service.dimension(lat, nu)
        if chi is None:
            chi = pseudochar_service.weierstrass_char(lat, nu)
        if chi.lattice != lat or chi.nu != float(nu) or chi.k != k:
            raise ThetaKernelError("character was built for a different lattice or weight")
        return ThetaFockSpace(lattice=lat, nu=float(nu), chi=chi, k=k)

    # Lattice-sum evaluation

    def _exponent(self, sp: ThetaFockSpace, z, w, gamma):
        return sp.nu * (
            -0.5 * (gamma * np.conj(gamma)).real + z * np.conj(gamma) - np.conj(w) * gamma + z * np.conj(w)
        )

    def kernel_eval(self, sp: ThetaFockSpace, z: complex, w: complex, eps: Optional[float] = None) -> SumResult:
        """
        K(z, w) by adaptive shell summation.

        Args:
            sp: Theta Fock space
            z, w: Arguments
            eps: Relative shell tolerance (default kernel_eps)

        Returns:
            SumResult scaled by ν/π, with the Gaussian tail estimate

        Raises:
            NoConvergence: if the shell cap is reached
            Overflow: if an exponent leaves the double range
        """
        z, w = complex(z), complex(w)
        eps = self.kernel_eps if eps is None else eps

        def summand(m, n, gamma):
            chi = pseudochar_service.evaluate_array(sp.chi, m, n)
            return chi * lattice_summer.guard(self._exponent(sp, z, w, gamma))

        # |summand| = exp(−(ν/2)|γ − (z − w)|² + (ν/2)|z − w|² + ν Re(z w̄))
        tail = TailModel(
            nu=sp.nu,
            center=abs(z - w),
            log_amplitude=0.5 * sp.nu * abs(z - w) ** 2 + sp.nu * (z * w.conjugate()).real,
        )
        min_shells = lattice_summer.min_shells(sp.lattice, abs(z) + abs(w))
        result = lattice_summer.shell_sum(sp.lattice, summand, eps, min_shells=min_shells, tail=tail)
        return _scaled(result, sp.nu / math.pi)

    def kernel_value(self, sp: ThetaFockSpace, z: complex, w: complex) -> complex:
        return self.kernel_eval(sp, z, w).value

    def kernel_eval_series(
        self,
        sp: ThetaFockSpace,
        z,
        w,
        M: int,
        N: int,
        eps: Optional[float] = None,
        even_odd_only: bool = False,
    ):
        """
        (ν/π) Σ_{m<=M, n<=N} (−1)^m a_{m,n} z^n conj(w)^m / (m! n!).

        z and w may be broadcast arrays; the coefficient table is summed once
        and shared by every pair. Scalar arguments give a complex result.

        With even_odd_only only the (even, even) and (odd, odd) index pairs are
        kept, which loses nothing when χ is real.
        """
        table = coeff_service.coeff_table(sp, M, N, eps=eps)
        m = np.arange(M + 1)
        n = np.arange(N + 1)
        inv_fact_m = np.array([1.0 / math.factorial(i) for i in m])
        inv_fact_n = np.array([1.0 / math.factorial(j) for j in n])
        z, w = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
        left = (-np.conj(w))[..., None] ** m * inv_fact_m
        right = z[..., None] ** n * inv_fact_n
        values = table.values
        if even_odd_only:
            values = np.where((m[:, None] + n[None, :]) % 2 == 0, values, 0.0)
        result = sp.nu / math.pi * np.einsum("...m,mn,...n->...", left, values, right)
        return complex(result) if result.ndim == 0 else result

    def poincare_monomials(
        self, sp: ThetaFockSpace, M: int, z: complex, eps: Optional[float] = None
    ) -> Tuple[np.ndarray, np.ndarray, int]:
        """P(e_m)(z) for m = 0..M in one shell pass; returns (values, mass, shells_used)."""
        z = complex(z)
        eps = self.kernel_eps if eps is None else eps
        powers = np.arange(M + 1)

        def summand(m, n, gamma):
            chi = pseudochar_service.evaluate_array(sp.chi, m, n)
            base = chi * lattice_summer.guard(sp.nu * (-0.5 * (gamma * np.conj(gamma)).real + z * np.conj(gamma)))
            return (z - gamma)[None, :] ** powers[:, None] * base

        min_shells = lattice_summer.min_shells(sp.lattice, abs(z) + math.sqrt(M / sp.nu))
        return lattice_summer.accumulate(sp.lattice, summand, eps, min_shells=min_shells)

    def poincare_monomial(self, sp: ThetaFockSpace, m: int, z: complex, eps: Optional[float] = None) -> SumResult:
        """
        P(e_m)(z) = Σ χ(γ) (z − γ)^m e^{−(ν/2)|γ|² + ν z conj(γ)}.

        Raises:
            NoConvergence: if the shell cap is reached
        """
        z = complex(z)
        eps = self.kernel_eps if eps is None else eps

        def summand(mm, nn, gamma):
            chi = pseudochar_service.evaluate_array(sp.chi, mm, nn)
            exponent = sp.nu * (-0.5 * (gamma * np.conj(gamma)).real + z * np.conj(gamma))
            return chi * (z - gamma) ** m * lattice_summer.guard(exponent)

        # |z − γ|^m <= (1 + |z|)^m r^m for r >= 1
        tail = TailModel(
            nu=sp.nu,
            center=abs(z),
            degree=m,
            log_amplitude=0.5 * sp.nu * abs(z) ** 2 + m * math.log1p(abs(z)),
        )
        min_shells = lattice_summer.min_shells(sp.lattice, abs(z) + math.sqrt(m / sp.nu))
        return lattice_summer.shell_sum(sp.lattice, summand, eps, min_shells=min_shells, tail=tail)

    def kernel_via_poincare(self, sp: ThetaFockSpace, z: complex, w: complex, M: int, eps: Optional[float] = None) -> complex:
        """(ν/π) Σ_{m<=M} P(e_m)(z) (ν conj(w))^m / m!."""
        values, _, _ = self.poincare_monomials(sp, M, z, eps)
        weights = np.array([(sp.nu * complex(w).conjugate()) ** m / math.factorial(m) for m in range(M + 1)])
        return sp.nu / math.pi * complex(np.sum(values * weights))

    # Structural identities

    def bi_invariance_residual(
        self,
        sp: ThetaFockSpace,
        z: complex,
        w: complex,
        gamma: LatticePoint,
        gamma2: LatticePoint,
        eps: Optional[float] = None,
    ) -> float:
        """
        |K(z+γ, w+γ') − χ(γ)e^{(ν/2)|γ|²+νz conj(γ)} K(z,w) conj(χ(γ')) e^{(ν/2)|γ'|²+ν conj(w)γ'}|
        normalised by max(1, |RHS|).
        """
        z, w = complex(z), complex(w)
        g, g2 = gamma.value, gamma2.value
        lhs = self.kernel_eval(sp, z + g, w + g2, eps).value
        left = pseudochar_service.evaluate(sp.chi, gamma) * np.exp(0.5 * sp.nu * abs(g) ** 2 + sp.nu * z * g.conjugate())
        right = pseudochar_service.evaluate(sp.chi, gamma2).conjugate() * np.exp(
            0.5 * sp.nu * abs(g2) ** 2 + sp.nu * w.conjugate() * g2
        )
        rhs = left * self.kernel_eval(sp, z, w, eps).value * right
        return relative(abs(lhs - rhs), abs(rhs))

    def hermitian_residual(self, sp: ThetaFockSpace, z: complex, w: complex) -> float:
        """|K(z,w) − conj(K(w,z))| / max(1, |K(z,w)|)."""
        a = self.kernel_value(sp, z, w)
        b = self.kernel_value(sp, w, z)
        return relative(abs(a - b.conjugate()), abs(a))

    def diagonal(self, sp: ThetaFockSpace, z: complex) -> complex:
        """K(z, z); real and non-negative."""
        return self.kernel_value(sp, z, z)

    def functional_equation_residual(
        self, sp: ThetaFockSpace, f: Callable[[complex], complex], z: complex, gamma: LatticePoint
    ) -> float:
        """|f(z+γ) − χ(γ) e^{ν(z+γ/2)conj(γ)} f(z)| / max(1, |f(z+γ)|)."""
        z = complex(z)
        g = gamma.value
        lhs = complex(f(z + g))
        rhs = pseudochar_service.evaluate(sp.chi, gamma) * np.exp(sp.nu * (z + 0.5 * g) * g.conjugate()) * complex(f(z))
        return relative(abs(lhs - rhs), abs(lhs))

    def _quad_nodes(self, quad_n: Optional[int]) -> int:
        quad_n = self.quad_nodes if quad_n is None else quad_n
        if quad_n < 8:
            raise ThetaKernelError(f"quadrature needs at least 8 nodes per axis, got {quad_n}")
        return quad_n

    def cell_nodes(self, sp: ThetaFockSpace, quad_n: int, origin: complex = 0j) -> Tuple[np.ndarray, np.ndarray]:
        """Tensor Gauss–Legendre nodes of origin + sω1 + tω2 and weights (Jacobian S included)."""
        x, wts = gauss_legendre_unit(quad_n)
        s, t = np.meshgrid(x, x, indexing="ij")
        nodes = origin + s * sp.lattice.omega1 + t * sp.lattice.omega2
        weights = np.outer(wts, wts) * lattice_service.cell_area(sp.lattice)
        return nodes.ravel(), weights.ravel()

    def reproducing_residual(self, sp: ThetaFockSpace, m: int, z: complex, quad_n: Optional[int] = None) -> float:
        """
        Quadrature of ∫_cell K(z,w) f(w) e^{−ν|w|²} dm(w) for f = P(e_m),
        compared with f(z); normalised by max(1, |f(z)|).
        """
        quad_n = self._quad_nodes(quad_n)
        z = complex(z)
        nodes, weights = self.cell_nodes(sp, quad_n)
        f_nodes = self.poincare_grid(sp, m, nodes)
        k_nodes = self.kernel_grid(sp, z, nodes)
        integrand = k_nodes * f_nodes * np.exp(-sp.nu * np.abs(nodes) ** 2)
        quadrature = complex(np.sum(weights * integrand))
        target = self.poincare_monomial(sp, m, z).value
        residual = relative(abs(quadrature - target), abs(target))
        logger.debug("Reproducing residual m=%d at %s: %.3e", m, z, residual)
        return residual

    def diagonal_trace(self, sp: ThetaFockSpace, quad_n: Optional[int] = None) -> float:
        """∫_cell K(z,z) e^{−ν|z|²} dm(z); equals the dimension k."""
        quad_n = self._quad_nodes(quad_n)
        nodes, weights = self.cell_nodes(sp, quad_n)
        diag = self.kernel_grid(sp, nodes, nodes)
        return float(np.sum(weights * diag.real * np.exp(-sp.nu * np.abs(nodes) ** 2)))

    # Vectorised evaluation on arrays of points

    def _block_terms(self, sp: ThetaFockSpace, z, w, eps: Optional[float], derivative: bool = False):
        eps = self.kernel_eps if eps is None else eps
        z, w = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
        reach = float(np.max(np.abs(z - w))) if z.size else 0.0
        k = lattice_summer.block_shells(sp.lattice, sp.nu, reach, eps)
        m, n, gamma = lattice_summer.block_points(sp.lattice, k)
        chi = pseudochar_service.evaluate_array(sp.chi, m, n)
        zz, ww = z[..., None], w[..., None]
        terms = chi * lattice_summer.guard(self._exponent(sp, zz, ww, gamma))
        if derivative:
            terms = terms * sp.nu * (np.conj(gamma) + np.conj(ww))
        return terms

    def kernel_grid(self, sp: ThetaFockSpace, z, w, eps: Optional[float] = None) -> np.ndarray:
        """K on broadcast arrays of z and w, summed over a fixed shell block."""
        return sp.nu / math.pi * self._block_terms(sp, z, w, eps).sum(axis=-1)

    def kernel_grid_derivative(self, sp: ThetaFockSpace, z, w, eps: Optional[float] = None) -> np.ndarray:
        """∂K/∂z, each term multiplied by ν(conj(γ) + conj(w))."""
        return sp.nu / math.pi * self._block_terms(sp, z, w, eps, derivative=True).sum(axis=-1)

    def kernel_grid_mass(self, sp: ThetaFockSpace, z, w, eps: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
        """(K, (ν/π)Σ|term|) on broadcast arrays."""
        terms = self._block_terms(sp, z, w, eps)
        factor = sp.nu / math.pi
        return factor * terms.sum(axis=-1), factor * np.abs(terms).sum(axis=-1)

    def poincare_grid(self, sp: ThetaFockSpace, m: int, z, eps: Optional[float] = None) -> np.ndarray:
        """P(e_m) on an array of points."""
        eps = self.kernel_eps if eps is None else eps
        z = np.asarray(z, dtype=complex)
        reach = float(np.max(np.abs(z))) if z.size else 0.0
        k = lattice_summer.block_shells(sp.lattice, sp.nu, reach, eps, degree=m)
        mm, nn, gamma = lattice_summer.block_points(sp.lattice, k)
        chi = pseudochar_service.evaluate_array(sp.chi, mm, nn)
        zz = z[..., None]
        exponent = sp.nu * (-0.5 * (gamma * np.conj(gamma)).real + zz * np.conj(gamma))
        return (chi * (zz - gamma) ** m * lattice_summer.guard(exponent)).sum(axis=-1)


def _scaled(result: SumResult, factor: float) -> SumResult:
    return SumResult(
        value=factor * result.value,
        tail_bound=factor * result.tail_bound,
        shells_used=result.shells_used,
        abs_sum=factor * result.abs_sum,
    )


# Global kernel service instance
kernel_service = KernelService()
