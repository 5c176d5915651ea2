"""
Zeros of φ_w = K(·, w) in a fundamental cell: argument-principle counting,
grid-plus-Newton location, and a numerical probe of the common zero set Ξ.

All thresholds act on the Γ-periodic modulus
ρ(z) = |K(z, w)| e^{−ν(|z|² + |w|²)/2}, relative to its median over the cell.
"""
import logging
import math
from typing import List, Optional

import numpy as np
from scipy import optimize

from thetakernel.core.config import Settings, settings
from thetakernel.core.exceptions import (
    IdenticallyZero,
    NotOneDimensional,
    PathUnstable,
    RefinementFailed,
    ThetaKernelError,
)
from thetakernel.core.schemas import (
    FundamentalCell,
    LocatedZero,
    SigmaFactorReport,
    ThetaFockSpace,
    XiProbeResult,
    ZeroCountResult,
    ZeroList,
)
from thetakernel.core.utils import gauss_legendre_unit
from thetakernel.services.elliptic import elliptic_service
from thetakernel.services.kernel import kernel_service
from thetakernel.services.lattice import lattice_service


logger = logging.getLogger(__name__)

# the contour cell is offset so that its boundary misses Γ
_BASE_SHIFT = (-0.5 + 0.1234, -0.5 + 0.0567)
_PROBE_GRID = 12


class ZeroService:
    """Counting and locating zeros of φ_w."""

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or settings
        self.contour_nodes = self.config.contour_nodes
        self.path_safety = self.config.path_safety
        self.shift_retries = self.config.shift_retries
        self.winding_tol = self.config.winding_tol
        self.zero_grid = self.config.zero_grid
        self.newton_max_iter = self.config.newton_max_iter
        self.newton_tol = self.config.newton_tol
        self.dedupe_tol = self.config.dedupe_tol
        self.zero_tol = self.config.zero_tol
        self.identically_zero_tol = self.config.identically_zero_tol
        self.xi_tol = self.config.xi_tol
        self.random_seed = self.config.random_seed

    # Helpers

    def base_shift(self, sp: ThetaFockSpace) -> complex:
        s, t = _BASE_SHIFT
        return s * sp.lattice.omega1 + t * sp.lattice.omega2

    def cell_grid(self, sp: ThetaFockSpace, size: int, origin: complex = 0j, centered: bool = True) -> np.ndarray:
        """size × size points origin + sω1 + tω2, at cell midpoints when centered."""
        offset = 0.5 if centered else 0.0
        x = (np.arange(size) + offset) / size
        s, t = np.meshgrid(x, x, indexing="ij")
        return origin + s * sp.lattice.omega1 + t * sp.lattice.omega2

    def normalized(self, sp: ThetaFockSpace, z, w, values) -> np.ndarray:
        """Γ-periodic modulus |K(z,w)| e^{−ν(|z|²+|w|²)/2}."""
        return np.abs(values) * np.exp(-0.5 * sp.nu * (np.abs(z) ** 2 + np.abs(w) ** 2))

    def kernel_scale(self, sp: ThetaFockSpace, w: complex) -> float:
        """
        Median normalised modulus of φ_w over a probe grid.

        Raises:
            IdenticallyZero: if φ_w vanishes on the probe grid relative to its mass
        """
        z = self.cell_grid(sp, _PROBE_GRID, self.base_shift(sp))
        values, mass = kernel_service.kernel_grid_mass(sp, z, w)
        ratio = float(np.max(np.abs(values)) / max(float(np.max(mass)), 1e-300))
        if ratio < self.identically_zero_tol:
            raise IdenticallyZero(f"phi_w vanishes identically (max/mass = {ratio:.3e}); w is a candidate for Xi", w=w)
        return float(np.median(self.normalized(sp, z, w, values)))

    # Counting

    def _winding(self, sp: ThetaFockSpace, w: complex, shift: complex, nodes: int):
        x, wts = gauss_legendre_unit(nodes)
        o1, o2 = sp.lattice.omega1, sp.lattice.omega2
        corners = [shift, shift + o2, shift + o1 + o2, shift + o1, shift]
        points, dz = [], []
        for a, b in zip(corners[:-1], corners[1:]):
            points.append(a + x * (b - a))
            dz.append(wts * (b - a))
        points = np.concatenate(points)
        dz = np.concatenate(dz)
        phi = kernel_service.kernel_grid(sp, points, w)
        dphi = kernel_service.kernel_grid_derivative(sp, points, w)
        winding = complex(np.sum(dphi / phi * dz)) / (2j * math.pi)
        path_min = float(np.min(self.normalized(sp, points, w, phi)))
        return winding, path_min

    def zero_count(
        self,
        sp: ThetaFockSpace,
        w: complex,
        nodes: Optional[int] = None,
        shift: Optional[complex] = None,
    ) -> ZeroCountResult:
        """
        Number of zeros of φ_w in a shifted cell by the argument principle.

        Args:
            sp: Theta Fock space
            w: Second kernel argument
            nodes: Gauss–Legendre nodes per edge (default contour_nodes)
            shift: Displacement u of the first contour cell (default base_shift)

        Returns:
            ZeroCountResult; path_min_abs is relative to the kernel scale

        Raises:
            IdenticallyZero: if φ_w ≡ 0
            PathUnstable: if no admissible contour was found
        """
        w = complex(w)
        nodes = self.contour_nodes if nodes is None else nodes
        if nodes < 8:
            raise ThetaKernelError(f"the contour needs at least 8 nodes per edge, got {nodes}")
        scale = self.kernel_scale(sp, w)
        rng = np.random.default_rng(self.random_seed)
        start = self.base_shift(sp) if shift is None else complex(shift)
        shift = start
        for attempt in range(1, self.shift_retries + 1):
            winding, path_min = self._winding(sp, w, shift, nodes)
            path_min /= scale
            count = int(round(winding.real))
            if path_min > self.path_safety and abs(winding - count) < self.winding_tol:
                return ZeroCountResult(
                    count=count,
                    winding_raw=winding,
                    shift=shift,
                    path_min_abs=path_min,
                    attempts=attempt,
                )
            logger.warning(
                "Contour at shift %s rejected (winding %s, path min %.3e); re-shifting",
                shift, winding, path_min,
            )
            s, t = rng.uniform(-0.25, 0.25, size=2)
            shift = start + s * sp.lattice.omega1 + t * sp.lattice.omega2
        raise PathUnstable(f"no stable contour after {self.shift_retries} shifts", w=w)

    # Location

    def _newton(self, sp: ThetaFockSpace, w: complex, seeds: np.ndarray):
        z = seeds.astype(complex)
        active = np.ones(z.shape, dtype=bool)
        for _ in range(self.newton_max_iter):
            if not active.any():
                break
            phi = kernel_service.kernel_grid(sp, z[active], w)
            dphi = kernel_service.kernel_grid_derivative(sp, z[active], w)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(dphi != 0, phi / dphi, 0.0)
            z[active] = z[active] - step
            done = np.abs(step) < self.newton_tol * np.maximum(1.0, np.abs(z[active]))
            idx = np.flatnonzero(active)
            active[idx[done]] = False
        return z, ~active

    def zero_locate(self, sp: ThetaFockSpace, w: complex, grid: Optional[int] = None) -> ZeroList:
        """
        Grid local minima of ρ refined by Newton's method on φ_w, reduced to
        the probing cell and de-duplicated modulo Γ.

        Seeds whose Newton iteration stalls are logged and counted, not raised.
        """
        w = complex(w)
        grid = self.zero_grid if grid is None else grid
        if grid < 3:
            raise ThetaKernelError(f"the seed grid needs at least 3 points per side, got {grid}")
        scale = self.kernel_scale(sp, w)
        origin = self.base_shift(sp)
        z = self.cell_grid(sp, grid, origin)
        rho = self.normalized(sp, z, w, kernel_service.kernel_grid(sp, z, w))

        # ρ is Γ-periodic, so neighbours wrap around the cell
        is_min = np.ones_like(rho, dtype=bool)
        for ds in (-1, 0, 1):
            for dt in (-1, 0, 1):
                if ds or dt:
                    is_min &= rho <= np.roll(np.roll(rho, ds, axis=0), dt, axis=1)
        seeds = z[is_min]
        refined, converged = self._newton(sp, w, seeds)

        cell = FundamentalCell(origin=origin, lattice=sp.lattice)
        found: List[LocatedZero] = []
        failed = 0
        for seed, z0, ok in zip(seeds.tolist(), refined.tolist(), converged.tolist()):
            z0 = lattice_service.reduce_to_cell(cell, z0)[0] if np.isfinite(z0) else z0
            value = complex(kernel_service.kernel_grid(sp, z0, w)) if np.isfinite(z0) else complex("nan")
            rel = float(self.normalized(sp, z0, w, value)) / scale if np.isfinite(z0) else math.inf
            if not ok or not rel < self.zero_tol:
                err = RefinementFailed(f"Newton from {seed} stalled at relative |phi| {rel:.3e}", seed=seed)
                logger.warning("%s: %s", err.code, err.detail)
                failed += 1
                continue
            if any(abs(complex(lattice_service.centered_offset(sp.lattice, z0 - f.location))) < self.dedupe_tol for f in found):
                continue
            found.append(LocatedZero(location=z0, refined_abs=rel))
        logger.debug("Located %d zeros from %d seeds (%d failed)", len(found), len(seeds), failed)
        return ZeroList(zeros=found, scale=scale, failed_seeds=failed)

    def translation_closure_residual(self, sp: ThetaFockSpace, w: complex, zeros: ZeroList) -> float:
        """max ρ(z0 + γ)/scale over located zeros z0 and first-shell γ."""
        shell = np.array([g.value for g in lattice_service.shell(sp.lattice, 1)])
        worst = 0.0
        for zero in zeros.zeros:
            z = zero.location + shell
            rho = self.normalized(sp, z, w, kernel_service.kernel_grid(sp, z, w))
            worst = max(worst, float(np.max(rho)) / zeros.scale)
        return worst

    def symmetry_residual(self, sp: ThetaFockSpace, w: complex, zeros: ZeroList) -> float:
        """max normalised |K(w, z0)| over located zeros; (z0, w) ∈ Z(K) implies (w, z0) ∈ Z(K)."""
        worst = 0.0
        for zero in zeros.zeros:
            value = kernel_service.kernel_value(sp, w, zero.location)
            worst = max(worst, float(self.normalized(sp, w, zero.location, value)) / zeros.scale)
        return worst

    # Common zeros

    def poincare_common_zero_residual(self, sp: ThetaFockSpace, z: complex, M: int) -> float:
        """max_{m<=M} |P(e_m)(z)| relative to its mass; small exactly on Ξ."""
        values, mass, _ = kernel_service.poincare_monomials(sp, M, z)
        return float(np.max(np.abs(values) / np.maximum(mass, 1e-300)))

    def xi_objective(self, sp: ThetaFockSpace, w: complex, zgrid: int) -> float:
        """max_z |φ_w(z)| / max_z mass over a zgrid × zgrid cell grid."""
        z = self.cell_grid(sp, zgrid, self.base_shift(sp))
        values, mass = kernel_service.kernel_grid_mass(sp, z, w)
        return float(np.max(np.abs(values)) / max(float(np.max(mass)), 1e-300))

    def xi_probe(self, sp: ThetaFockSpace, wgrid: int, zgrid: int) -> XiProbeResult:
        """
        Candidates w̃ with φ_w̃ ≡ 0: local minima of the objective on a w-grid,
        refined by Nelder–Mead in cell coordinates and confirmed below xi_tol.
        """
        lat = sp.lattice
        x = np.arange(wgrid) / wgrid
        objective = np.array([[self.xi_objective(sp, s * lat.omega1 + t * lat.omega2, zgrid) for t in x] for s in x])

        is_min = np.ones_like(objective, dtype=bool)
        if wgrid > 1:
            for ds in (-1, 0, 1):
                for dt in (-1, 0, 1):
                    if ds or dt:
                        is_min &= objective <= np.roll(np.roll(objective, ds, axis=0), dt, axis=1)

        def fun(st):
            return self.xi_objective(sp, st[0] * lat.omega1 + st[1] * lat.omega2, zgrid)

        candidates: List[complex] = []
        values: List[float] = []
        for i, j in zip(*np.nonzero(is_min)):
            start = np.array([x[i], x[j]])
            best, best_value = start, float(objective[i, j])
            if best_value >= self.xi_tol:
                res = optimize.minimize(
                    fun, start, method="Nelder-Mead",
                    options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 600},
                )
                best, best_value = res.x, float(res.fun)
            if best_value >= self.xi_tol:
                continue
            w_tilde = complex(best[0] * lat.omega1 + best[1] * lat.omega2)
            w_tilde = lattice_service.reduce_to_cell(FundamentalCell(lattice=lat), w_tilde)[0]
            if any(abs(complex(lattice_service.centered_offset(lat, w_tilde - c))) < self.dedupe_tol for c in candidates):
                continue
            candidates.append(w_tilde)
            values.append(best_value)

        exceeds = len(candidates) > sp.k
        if exceeds:
            logger.warning("Xi probe found %d candidates, above the bound %d", len(candidates), sp.k)
        return XiProbeResult(
            candidates=candidates,
            objective=values,
            bound=sp.k,
            low_confidence=zgrid < 4,
            exceeds_bound=exceeds,
        )

    # Von Neumann factorisation

    def sigma_factor_residual(self, sp: ThetaFockSpace, samples: int = 10) -> SigmaFactorReport:
        """
        Spread of K(z,w) / (e^{−(μz² + conj(μ)conj(w)²)/2} σ(z) conj(σ(w))) over random
        pairs in the cell; a single constant C means the ratio is flat.

        Raises:
            NotOneDimensional: if dim != 1
        """
        if sp.k != 1:
            raise NotOneDimensional(f"sigma factorisation needs dimension 1, got {sp.k}", dimension=sp.k)
        if not (sp.chi.u1 == -1 and sp.chi.u2 == -1):
            raise ThetaKernelError("sigma factorisation needs the Weierstrass character")
        wd = elliptic_service.weierstrass_data(sp.lattice)
        mu = elliptic_service.mu_invariant(wd, sp.nu)

        rng = np.random.default_rng(self.random_seed)
        st = rng.uniform(-0.5, 0.5, size=(samples, 4))
        lat = sp.lattice
        z = st[:, 0] * lat.omega1 + st[:, 1] * lat.omega2
        w = st[:, 2] * lat.omega1 + st[:, 3] * lat.omega2
        sz = np.asarray(elliptic_service.modified_sigma(wd, mu, z))
        sw = np.asarray(elliptic_service.modified_sigma(wd, mu, w))

        scale = float(np.median(np.abs(np.concatenate([sz, sw]))))
        keep = (np.abs(sz) > 1e-3 * scale) & (np.abs(sw) > 1e-3 * scale)
        ratios = np.array([
            kernel_service.kernel_value(sp, complex(a), complex(b)) / (sa * np.conj(sb))
            for a, b, sa, sb in zip(z[keep], w[keep], sz[keep], sw[keep])
        ])
        magnitudes = np.abs(ratios)
        constant = complex(np.mean(ratios))
        spread = float((magnitudes.max() - magnitudes.min()) / magnitudes.mean())
        deviation = float(np.max(np.abs(ratios - constant)) / abs(constant))
        logger.debug("Sigma factor spread %.3e, deviation %.3e over %d samples", spread, deviation, int(keep.sum()))
        return SigmaFactorReport(
            spread=spread,
            deviation=deviation,
            constant=constant,
            samples_used=int(keep.sum()),
        )


# Global zero service instance
zero_service = ZeroService()
