"""
Weighted complex Hermite polynomials

    H^ν_{m,n}(ξ, ξ̄) = m! n! ν^{m+n} Σ_k (−1)^k / (ν^k k!) · ξ^{m−k}/(m−k)! · ξ̄^{n−k}/(n−k)!

with H_{1,0} = νξ, H_{0,1} = νξ̄ and conj(H_{m,n}) = H_{n,m}.
"""
import cmath
import logging
import math
from typing import Optional

import numpy as np

from thetakernel.core.config import Settings, settings
from thetakernel.core.exceptions import Overflow
from thetakernel.core.schemas import HermiteTable
from thetakernel.core.utils import compensated_sum


logger = logging.getLogger(__name__)


class HermiteService:
    """Explicit-sum and recurrence evaluation of H^ν_{m,n}."""

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or settings
        self.degree_cap = self.config.degree_cap

    def _check_degree(self, degree: int) -> None:
        if degree > self.degree_cap:
            raise Overflow(
                f"degree {degree} exceeds the configured cap {self.degree_cap}",
                degree=degree,
            )

    @staticmethod
    def _coefficients(nu: float, m: int, n: int):
        """(k, c_k) with H_{m,n} = Σ_k c_k ξ^{m−k} ξ̄^{n−k}."""
        for k in range(min(m, n) + 1):
            c = (-1) ** k * math.factorial(k) * math.comb(m, k) * math.comb(n, k)
            yield k, c * nu ** (m + n - k)

    def hermite_eval(self, nu: float, m: int, n: int, xi: complex) -> complex:
        """
        Evaluate H^ν_{m,n}(ξ, ξ̄) from the explicit finite sum.

        Args:
            nu: Weight ν > 0
            m, n: Degrees
            xi: Evaluation point

        Returns:
            Complex value, summed with correct rounding

        Raises:
            Overflow: if m + n exceeds the degree cap
        """
        self._check_degree(m + n)
        xi = complex(xi)
        xb = xi.conjugate()
        terms = [c * xi ** (m - k) * xb ** (n - k) for k, c in self._coefficients(nu, m, n)]
        return compensated_sum(terms)

    def hermite_array(self, nu: float, m: int, n: int, xi) -> np.ndarray:
        """Explicit formula evaluated on an array of points."""
        self._check_degree(m + n)
        xi = np.asarray(xi, dtype=complex)
        xb = np.conj(xi)
        out = np.zeros_like(xi)
        for k, c in self._coefficients(nu, m, n):
            out = out + c * xi ** (m - k) * xb ** (n - k)
        return out

    def hermite_grid(self, nu: float, max_m: int, max_n: int, xi) -> np.ndarray:
        """
        All H_{m,n}, m <= max_m, n <= max_n, on an array of points.

        Seeded by H_{0,n} = (ν ξ̄)^n and filled with
        H_{m+1,n} = ν ξ H_{m,n} − ν n H_{m,n−1}.

        Returns:
            Array of shape (max_m+1, max_n+1) + xi.shape
        """
        self._check_degree(max_m + max_n)
        xi = np.asarray(xi, dtype=complex)
        grid = np.empty((max_m + 1, max_n + 1) + xi.shape, dtype=complex)
        grid[0, 0] = 1.0
        for n in range(1, max_n + 1):
            grid[0, n] = nu * np.conj(xi) * grid[0, n - 1]
        for m in range(max_m):
            grid[m + 1, 0] = nu * xi * grid[m, 0]
            for n in range(1, max_n + 1):
                grid[m + 1, n] = nu * xi * grid[m, n] - nu * n * grid[m, n - 1]
        return grid

    def hermite_table(self, nu: float, max_m: int, max_n: int, xi: complex) -> HermiteTable:
        """Recurrence table of H_{m,n}(ξ) at a single point."""
        values = self.hermite_grid(nu, max_m, max_n, complex(xi))
        values.setflags(write=False)
        return HermiteTable(nu=nu, max_m=max_m, max_n=max_n, xi=complex(xi), values=values)

    def genfun2_residual(self, nu: float, a: complex, b: complex, xi: complex, M: int, N: int) -> float:
        """|exp(ν(aξ + bξ̄ − ab)) − Σ_{m<=M, n<=N} a^m b^n/(m! n!) H_{m,n}(ξ)|."""
        xi = complex(xi)
        exact = cmath.exp(nu * (a * xi + b * xi.conjugate() - a * b))
        grid = self.hermite_grid(nu, M, N, xi)
        terms = [
            a ** m * b ** n / (math.factorial(m) * math.factorial(n)) * complex(grid[m, n])
            for m in range(M + 1)
            for n in range(N + 1)
        ]
        return abs(exact - compensated_sum(terms))

    def genfun1_residual(self, nu: float, z: complex, xi: complex, n: int, M: int) -> float:
        """|ν^n (ξ̄ − z)^n e^{νξz} − Σ_{m<=M} z^m/m! H_{m,n}(ξ)|."""
        xi = complex(xi)
        exact = nu ** n * (xi.conjugate() - z) ** n * cmath.exp(nu * xi * z)
        grid = self.hermite_grid(nu, M, n, xi)
        terms = [z ** m / math.factorial(m) * complex(grid[m, n]) for m in range(M + 1)]
        return abs(exact - compensated_sum(terms))

    def recurrence_residual(self, nu: float, xi: complex, max_m: int, max_n: int, printed: bool = False) -> float:
        """
        Max of |H_{m+1,n} − ν ξ H_{m,n} + ν n H_{m,n−1}| / max(1, |H_{m+1,n}|),
        entries taken from the explicit formula.

        With printed=True the multiplier is ξ̄ instead of ξ (the form that
        contradicts H_{1,0} = νξ); reported for the record only.
        """
        xi = complex(xi)
        factor = xi.conjugate() if printed else xi
        worst = 0.0
        for m in range(max_m):
            for n in range(max_n + 1):
                lhs = self.hermite_eval(nu, m + 1, n, xi)
                rhs = nu * factor * self.hermite_eval(nu, m, n, xi)
                if n > 0:
                    rhs -= nu * n * self.hermite_eval(nu, m, n - 1, xi)
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        return worst

    def scaling_residual(self, nu: float, lam: complex, m: int, n: int, xi: complex) -> float:
        """Relative residual of H^{ν/|λ|²}_{m,n}(λξ) = λ^{−n} conj(λ)^{−m} H^ν_{m,n}(ξ)."""
        lam = complex(lam)
        lhs = self.hermite_eval(nu / abs(lam) ** 2, m, n, lam * xi)
        rhs = lam ** (-n) * lam.conjugate() ** (-m) * self.hermite_eval(nu, m, n, xi)
        return abs(lhs - rhs) / max(1.0, abs(rhs))


# Global hermite service instance
hermite_service = HermiteService()
