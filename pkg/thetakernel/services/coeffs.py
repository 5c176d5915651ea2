"""
Hermite–Taylor lattice coefficients

    a^{p,q}_{m,n}(Γ|ν,χ) = Σ_γ χ(γ) γ^p conj(γ)^q e^{−(ν/2)|γ|²} H^ν_{m,n}(γ, conj(γ))

and the arithmetic identities they satisfy.
"""
import logging
import math
from typing import Dict, Iterable, List, Optional

import numpy as np

from thetakernel.core.config import Settings, settings
from thetakernel.core.exceptions import NotRealCharacter, Overflow, ThetaKernelError
from thetakernel.core.schemas import (
    CoeffRequest,
    CoeffRow,
    CoeffTable,
    ParityReport,
    RecurrenceReport,
    SignProfile,
    SumResult,
    SumTableRow,
    TailModel,
    ThetaFockSpace,
)
from thetakernel.core.utils import relative
from thetakernel.services.hermite import hermite_service
from thetakernel.services.lattice import lattice_service
from thetakernel.services.lattice_sum import lattice_summer
from thetakernel.services.pseudochar import pseudochar_service


logger = logging.getLogger(__name__)

# Σ_{m,n} (−1)^{m+n+mn} e^{−(tπ/2)(m²+n²)} as tabulated in the source
REFERENCE_SUM_TABLE: Dict[float, float] = {
    0.01: -100.0,
    0.1: -9.999993971929990,
    1.0: 0.0,
    1.25: 0.36083819735290820,
    1.5: 0.58520756798201985,
    1.75: 0.72768068786287015,
    2.0: 0.81968729982004590,
    3.0: 0.96374406342682663,
    4.0: 0.99251627975220775,
    8.0: 0.99998605058192894,
}


def _hermite_log_amplitude(nu: float, m: int, n: int) -> float:
    """log of Σ_k k! C(m,k) C(n,k) ν^{m+n−k}, bounding |H_{m,n}(ξ)| / |ξ|^{m+n} for |ξ| >= 1."""
    total = sum(
        math.factorial(k) * math.comb(m, k) * math.comb(n, k) * nu ** (m + n - k)
        for k in range(min(m, n) + 1)
    )
    return math.log(total)


class CoeffService:
    """Lattice coefficients a^{p,q}_{m,n} and their identities."""

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or settings
        self.coeff_eps = self.config.coeff_eps
        self.degree_cap = self.config.degree_cap

    def _check_degree(self, degree: int) -> None:
        if degree > self.degree_cap:
            raise Overflow(f"total degree {degree} exceeds the cap {self.degree_cap}", degree=degree)

    def _weights(self, space: ThetaFockSpace, m: np.ndarray, n: np.ndarray, gamma: np.ndarray) -> np.ndarray:
        """χ(γ) e^{−(ν/2)|γ|²} for one shell."""
        chi = pseudochar_service.evaluate_array(space.chi, m, n)
        return chi * lattice_summer.guard(-0.5 * space.nu * (gamma * np.conj(gamma)).real)

    def _min_shells(self, space: ThetaFockSpace, degree: int) -> int:
        # r^d e^{−νr²/2} peaks at r = sqrt(d/ν)
        return lattice_summer.min_shells(space.lattice, math.sqrt(degree / space.nu))

    def coeff(self, req: CoeffRequest) -> SumResult:
        """
        Shell-ordered sum for a single a^{p,q}_{m,n}.

        Args:
            req: Space, indices and optional tolerance

        Returns:
            SumResult whose abs_sum is the mass Σ|summand|

        Raises:
            Overflow: if m+n+p+q exceeds the degree cap
            NoConvergence: if the shell cap is reached
        """
        self._check_degree(req.total)
        space = req.space
        eps = self.coeff_eps if req.eps is None else req.eps

        def summand(m, n, gamma):
            h = hermite_service.hermite_array(space.nu, req.m, req.n, gamma)
            return self._weights(space, m, n, gamma) * gamma ** req.p * np.conj(gamma) ** req.q * h

        tail = TailModel(
            nu=space.nu,
            degree=req.total,
            log_amplitude=_hermite_log_amplitude(space.nu, req.m, req.n),
        )
        return lattice_summer.shell_sum(
            space.lattice, summand, eps, min_shells=self._min_shells(space, req.total), tail=tail
        )

    def coeff_value(self, space: ThetaFockSpace, m: int, n: int, p: int = 0, q: int = 0) -> complex:
        return self.coeff(CoeffRequest(space=space, m=m, n=n, p=p, q=q)).value

    def coeff_table(
        self,
        space: ThetaFockSpace,
        max_m: int,
        max_n: int,
        p: int = 0,
        q: int = 0,
        eps: Optional[float] = None,
    ) -> CoeffTable:
        """All a^{p,q}_{m,n} with m <= max_m, n <= max_n in one shell pass."""
        degree = max_m + max_n + p + q
        self._check_degree(degree)
        eps = self.coeff_eps if eps is None else eps

        def summand(m, n, gamma):
            h = hermite_service.hermite_grid(space.nu, max_m, max_n, gamma)
            return h * (self._weights(space, m, n, gamma) * gamma ** p * np.conj(gamma) ** q)

        values, mass, shells = lattice_summer.accumulate(
            space.lattice, summand, eps, min_shells=self._min_shells(space, degree)
        )
        return CoeffTable(values=values, mass=mass, shells_used=shells, p=p, q=q)

    def coeff_tensor(self, space: ThetaFockSpace, size: int, eps: Optional[float] = None) -> CoeffTable:
        """All a^{p,q}_{m,n} with every index <= size, indexed [m, n, p, q]."""
        degree = 4 * size
        self._check_degree(degree)
        eps = self.coeff_eps if eps is None else eps
        powers = np.arange(size + 1)

        def summand(m, n, gamma):
            h = hermite_service.hermite_grid(space.nu, size, size, gamma)
            g_p = gamma[None, :] ** powers[:, None]
            g_q = np.conj(gamma)[None, :] ** powers[:, None]
            return np.einsum("mng,pg,qg->mnpqg", h * self._weights(space, m, n, gamma), g_p, g_q)

        values, mass, shells = lattice_summer.accumulate(
            space.lattice, summand, eps, min_shells=self._min_shells(space, degree)
        )
        return CoeffTable(values=values, mass=mass, shells_used=shells)

    def rows(self, table: CoeffTable, degree: int, parity: Optional[int] = None) -> List[CoeffRow]:
        """Rows (m, n, p, q) of a tensor table with total <= degree, optionally of one parity."""
        size = table.values.shape[0] - 1
        out = []
        for m in range(size + 1):
            for n in range(size + 1):
                for p in range(size + 1):
                    for q in range(size + 1):
                        total = m + n + p + q
                        if total > degree or (parity is not None and total % 2 != parity):
                            continue
                        value = complex(table.values[m, n, p, q])
                        out.append(
                            CoeffRow(
                                m=m, n=n, p=p, q=q,
                                value=(value.real, value.imag),
                                abs_value=abs(value),
                                mass=float(table.mass[m, n, p, q]),
                            )
                        )
        return out

    def parity_report(self, space: ThetaFockSpace, degree: int) -> ParityReport:
        """
        Odd-total coefficients for a real character; each must vanish relative
        to its own mass.

        Raises:
            NotRealCharacter: if χ takes non-real values
        """
        if not space.chi.is_real:
            raise NotRealCharacter("parity vanishing needs a real-valued character", u1=space.chi.u1, u2=space.chi.u2)
        table = self.coeff_tensor(space, degree)
        odd = self.rows(table, degree, parity=1)
        even = self.rows(table, degree, parity=0)
        max_relative = max((r.abs_value / max(r.mass, 1e-300) for r in odd), default=0.0)
        witness = max(even, key=lambda r: r.abs_value, default=None)
        passed = max_relative < 1e-10
        if not passed:
            logger.warning("Odd-parity coefficient relative size %.3e", max_relative)
        return ParityReport(degree=degree, rows=odd, max_relative=max_relative, passed=passed, even_witness=witness)

    def conj_symmetry_residual(self, space: ThetaFockSpace, m: int, n: int, p: int, q: int) -> float:
        """|conj(a^{p,q}_{m,n}) − (−1)^{m+n+p+q} a^{q,p}_{n,m}| relative to the mass."""
        a = self.coeff(CoeffRequest(space=space, m=m, n=n, p=p, q=q))
        b = self.coeff(CoeffRequest(space=space, m=n, n=m, p=q, q=p))
        sign = (-1) ** (m + n + p + q)
        return relative(abs(a.value.conjugate() - sign * b.value), a.abs_sum)

    def printed_conj_residual(self, space: ThetaFockSpace, m: int, n: int, p: int, q: int) -> float:
        """Same check without the index swap, reported for the record."""
        a = self.coeff(CoeffRequest(space=space, m=m, n=n, p=p, q=q))
        sign = (-1) ** (m + n + p + q)
        return relative(abs(a.value.conjugate() - sign * a.value), a.abs_sum)

    def recurrence_residuals(self, space: ThetaFockSpace, degree: int) -> RecurrenceReport:
        """
        Max residuals, over tuples of total <= degree, of

            ν a^{p+1,q}_{m,n} = a^{p,q}_{m+1,n} + ν n a^{p,q}_{m,n−1}
            ν a^{p,q+1}_{m,n} = a^{p,q}_{m,n+1} + ν m a^{p,q}_{m−1,n}

        and of the same identities with p and q exchanged on the left.
        """
        a = self.coeff_tensor(space, degree + 1).values
        nu = space.nu
        worst = {"a": 0.0, "b": 0.0, "pa": 0.0, "pb": 0.0}

        def track(key, lhs, rhs):
            worst[key] = max(worst[key], abs(lhs - rhs) / max(1.0, abs(lhs)))

        for m in range(degree + 1):
            for n in range(degree + 1 - m):
                for p in range(degree + 1 - m - n):
                    for q in range(degree + 1 - m - n - p):
                        down_n = nu * n * a[m, n - 1, p, q] if n > 0 else 0.0
                        down_m = nu * m * a[m - 1, n, p, q] if m > 0 else 0.0
                        rhs_a = a[m + 1, n, p, q] + down_n
                        rhs_b = a[m, n + 1, p, q] + down_m
                        track("a", nu * a[m, n, p + 1, q], rhs_a)
                        track("b", nu * a[m, n, p, q + 1], rhs_b)
                        track("pa", nu * a[m, n, p, q + 1], rhs_a)
                        track("pb", nu * a[m, n, p + 1, q], rhs_b)
        logger.debug("Coefficient recurrences up to degree %d: %s", degree, worst)
        return RecurrenceReport(
            degree=degree,
            max_residual_a=worst["a"],
            max_residual_b=worst["b"],
            printed_residual_a=worst["pa"],
            printed_residual_b=worst["pb"],
        )

    def scaled_space(self, space: ThetaFockSpace, lam: complex) -> ThetaFockSpace:
        """(λΓ, ν/|λ|², χ transported by χ_λΓ(λγ) = χ_Γ(γ))."""
        lat = lattice_service.scaled(space.lattice, lam)
        nu = space.nu / abs(lam) ** 2
        chi = pseudochar_service.transported(space.chi, lat, nu)
        return ThetaFockSpace(lattice=lat, nu=nu, chi=chi, k=chi.k)

    def scaling_residual(self, space: ThetaFockSpace, lam: complex, m: int, n: int, p: int, q: int) -> float:
        """|a(λΓ) − λ^{p−n} conj(λ)^{q−m} a(Γ)| / max(1, |a(Γ)|)."""
        lam = complex(lam)
        base = self.coeff_value(space, m, n, p, q)
        scaled = self.coeff_value(self.scaled_space(space, lam), m, n, p, q)
        factor = lam ** (p - n) * lam.conjugate() ** (q - m)
        return relative(abs(scaled - factor * base), abs(base))

    def gaussian_char_sum(self, t: float) -> float:
        """Σ_{m,n} (−1)^{m+n+mn} e^{−(tπ/2)(m²+n²)}, i.e. a_{0,0}(Z+iZ | tπ, χ_W)."""
        if not t > 0:
            raise ThetaKernelError(f"t must be positive, got {t}", t=t)
        lat = lattice_service.new_lattice(1.0, 1j)
        scale = 0.5 * t * math.pi

        def summand(m, n, gamma):
            sign = 1.0 - 2.0 * ((m + n + m * n) % 2)
            return sign * lattice_summer.guard(-scale * (m * m + n * n))

        value, _, _ = lattice_summer.accumulate(lat, summand, 1e-17, min_shells=1)
        return float(value)

    def sum_table(self, ts: Iterable[float]) -> List[SumTableRow]:
        """Rows (t, value, tabulated reference when known)."""
        return [
            SumTableRow(t=float(t), value=self.gaussian_char_sum(t), reference=REFERENCE_SUM_TABLE.get(float(t)))
            for t in ts
        ]

    def sign_profile(self, ts: Iterable[float], tol: float = 1e-12) -> SignProfile:
        """Signs, monotonicity and the upper bound 1 of the sum over a t-grid."""
        ts = [float(t) for t in ts]
        values = [self.gaussian_char_sum(t) for t in ts]
        signs = [0 if abs(v) <= tol else (1 if v > 0 else -1) for v in values]
        increasing = all(b > a for a, b in zip(values, values[1:]))
        bounded = all(v <= 1.0 + tol for v in values)
        return SignProfile(ts=ts, values=values, signs=signs, increasing=increasing, bounded_by_one=bounded)


# Global coefficient service instance
coeff_service = CoeffService()
