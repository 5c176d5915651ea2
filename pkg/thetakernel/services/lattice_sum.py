"""
Shell-ordered lattice summation with the three-quiet-shells stopping rule.

Summands are callables ``summand(m, n, gamma)`` receiving the coefficient
arrays and values of one shell and returning an array whose LAST axis runs
over the shell's points (leading axes are independent sums).
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate

from thetakernel.core.config import Settings, settings
from thetakernel.core.exceptions import NoConvergence, Overflow, ThetaKernelError
from thetakernel.core.schemas import Lattice, SumResult, TailModel
from thetakernel.services.lattice import lattice_service


logger = logging.getLogger(__name__)

Summand = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

_TINY = 1e-300


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ThetaKernelError(f"tolerance must be positive, got {eps}", eps=eps)


@lru_cache(maxsize=64)
def _block_indices(k: int) -> Tuple[np.ndarray, np.ndarray]:
    parts = [lattice_service.shell_indices(j) for j in range(k + 1)]
    m = np.concatenate([p[0] for p in parts])
    n = np.concatenate([p[1] for p in parts])
    m.setflags(write=False)
    n.setflags(write=False)
    return m, n


class LatticeSummer:
    """Deterministic summation over Γ, one shell max(|m|,|n|) = k at a time."""

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or settings
        self.shell_cap = self.config.shell_cap
        self.quiet_shells = self.config.quiet_shells
        self.exp_clamp = self.config.exp_clamp

    def guard(self, exponent: np.ndarray) -> np.ndarray:
        """
        exp of an assembled complex exponent.

        Raises:
            Overflow: if any real part exceeds the clamp
        """
        exponent = np.asarray(exponent)
        if exponent.size and float(np.max(exponent.real)) > self.exp_clamp:
            raise Overflow(
                f"exponent real part {float(np.max(exponent.real)):.3g} exceeds {self.exp_clamp}",
            )
        return np.exp(exponent)

    def min_shells(self, lat: Lattice, radius: float) -> int:
        """Number of shells needed before the summand peak at |γ| ≈ radius is passed."""
        h = lattice_service.shell_radius(lat)
        return int(math.ceil(max(radius, 0.0) / h)) + 1

    def block_shells(self, lat: Lattice, nu: float, reach: float, eps: float, degree: int = 0) -> int:
        """
        Fixed shell count for vectorised evaluation: every dropped point sits
        where exp(−(ν/2)(r − reach)²)·r^degree is below eps of its peak.
        """
        _check_eps(eps)
        h = lattice_service.shell_radius(lat)
        margin = math.sqrt((2.0 * math.log(1.0 / eps) + 2.0 * degree) / nu) + math.sqrt(degree / nu)
        k = int(math.ceil((reach + margin) / h)) + 1
        if k > self.shell_cap:
            raise NoConvergence(f"fixed block needs {k} shells, cap is {self.shell_cap}", shells=k)
        return k

    def block_indices(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """All (m, n) of shells 0..k, concatenated in shell order."""
        return _block_indices(int(k))

    def block_points(self, lat: Lattice, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        m, n = self.block_indices(k)
        return m, n, lattice_service.points(lat, m, n)

    def tail_estimate(self, lat: Lattice, model: TailModel, shells_used: int) -> float:
        """
        Gaussian integral majorant of the dropped tail,
        (2π/S) ∫_R^∞ A r^(d+1) exp(−(ν/2)(r − c)²) dr with R = shells_used·h.
        """
        h = lattice_service.shell_radius(lat)
        area = lattice_service.cell_area(lat)
        start = max(shells_used * h, model.center)

        def integrand(r: float) -> float:
            log_g = (
                model.log_amplitude
                + (model.degree + 1) * math.log(r)
                - 0.5 * model.nu * (r - model.center) ** 2
            )
            return math.exp(log_g) if log_g > -745.0 else 0.0

        value, _ = integrate.quad(integrand, start, np.inf, limit=200)
        return max(0.0, 2.0 * math.pi / area * value)

    def accumulate(
        self,
        lat: Lattice,
        summand: Summand,
        eps: float,
        min_shells: int = 0,
    ) -> Tuple[np.ndarray, np.ndarray, int]:
        """
        Sum shell by shell until `quiet_shells` consecutive shells have mass
        Σ|summand| below eps times the accumulated mass (for every component),
        once `min_shells` shells have been taken.

        Returns:
            Tuple of (value, mass, shells_used); value and mass carry the
            summand's leading shape

        Raises:
            NoConvergence: if the shell cap is exceeded
        """
        _check_eps(eps)
        total = None
        mass = None
        quiet = 0
        k = 0
        while True:
            if k > self.shell_cap:
                raise NoConvergence(
                    f"lattice sum did not settle within {self.shell_cap} shells",
                    shells=k,
                )
            m, n = lattice_service.shell_indices(k)
            gamma = lattice_service.points(lat, m, n)
            values = np.asarray(summand(m, n, gamma))
            shell_value = values.sum(axis=-1)
            shell_mass = np.abs(values).sum(axis=-1)
            if total is None:
                total, mass = shell_value, shell_mass
            else:
                total = total + shell_value
                mass = mass + shell_mass
            k += 1
            if k > min_shells and np.all(shell_mass <= eps * np.maximum(mass, _TINY)):
                quiet += 1
            else:
                quiet = 0
            if quiet >= self.quiet_shells:
                break
        logger.debug("Lattice sum settled after %d shells", k)
        return total, mass, k

    def shell_sum(
        self,
        lat: Lattice,
        summand: Summand,
        eps: float,
        min_shells: int = 0,
        tail: Optional[TailModel] = None,
    ) -> SumResult:
        """Scalar shell sum wrapped in a SumResult."""
        value, mass, shells = self.accumulate(lat, summand, eps, min_shells)
        tail_bound = self.tail_estimate(lat, tail, shells) if tail is not None else 0.0
        return SumResult(
            value=complex(value),
            tail_bound=tail_bound,
            shells_used=shells,
            abs_sum=float(mass),
        )


# Global lattice summer instance
lattice_summer = LatticeSummer()
