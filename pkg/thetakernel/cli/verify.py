"""
verify all: the acceptance suite as a pass/fail table.

Every check returns (measured, threshold) and passes when measured < threshold.
Random inputs come from numpy's default_rng seeded with settings.random_seed,
so repeated runs print identical tables.
"""
import argparse
import logging
import math
import time
from typing import Callable, Dict, Tuple

import numpy as np

from thetakernel.cli.common import UsageError, add_output_arguments, emit, run_config
from thetakernel.core.config import settings
from thetakernel.core.exceptions import ThetaKernelError
from thetakernel.core.schemas import CoeffRequest, VerifyReport, VerifyRow
from thetakernel.core.utils import relative
from thetakernel.services.coeffs import REFERENCE_SUM_TABLE, coeff_service
from thetakernel.services.elliptic import elliptic_service
from thetakernel.services.hermite import hermite_service
from thetakernel.services.kernel import kernel_service
from thetakernel.services.lattice import lattice_service
from thetakernel.services.pseudochar import pseudochar_service
from thetakernel.services.zeros import zero_service


logger = logging.getLogger(__name__)

Check = Callable[[], Tuple[float, float]]


def _rng() -> np.random.Generator:
    return np.random.default_rng(settings.random_seed)


def _square(nu_over_pi: float = 1.0):
    lat = lattice_service.new_lattice(1.0, 1j)
    return kernel_service.space(lat, nu_over_pi * math.pi)


def _generic(k: int = 1):
    lat = lattice_service.new_lattice(1.0, complex(0.3, 1.1))
    return kernel_service.space(lat, k * math.pi / 1.1)


def _cell_point(sp, s: float, t: float) -> complex:
    return s * sp.lattice.omega1 + t * sp.lattice.omega2


def check_perelomov() -> Tuple[float, float]:
    result = coeff_service.coeff(CoeffRequest(space=_square(), m=0, n=0))
    return abs(result.value) / result.abs_sum, 1e-12


def check_sumtable() -> Tuple[float, float]:
    rows = coeff_service.sum_table(sorted(REFERENCE_SUM_TABLE))
    return max(abs(r.value - r.reference) for r in rows), 1e-9


def check_parity() -> Tuple[float, float]:
    spaces = [_square(1.0), _square(2.0), _generic(1)]
    return max(coeff_service.parity_report(sp, 7).max_relative for sp in spaces), 1e-10


def check_scaling() -> Tuple[float, float]:
    rng = _rng()
    sp = _square(2.0)
    worst = 0.0
    for _ in range(10):
        lam = rng.uniform(0.7, 1.4) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        for _ in range(10):
            m, n, p, q = (int(v) for v in rng.integers(0, 3, size=4))
            worst = max(worst, coeff_service.scaling_residual(sp, lam, m, n, p, q))
    return worst, 1e-9


def triangle_pairs(sp):
    """25 (z, w) pairs on a 5 × 5 grid of the centred cell."""
    x = np.linspace(0.1, 0.9, 5) - 0.5
    grid = [_cell_point(sp, s, t) for s in x for t in x]
    return list(zip(grid, reversed(grid)))


def check_triangle() -> Tuple[float, float]:
    worst = 0.0
    for sp in (_square(1.0), _square(2.0)):
        pairs = triangle_pairs(sp)
        series_values = kernel_service.kernel_eval_series(sp, [z for z, _ in pairs], [w for _, w in pairs], 30, 30)
        for (z, w), series in zip(pairs, series_values):
            direct = kernel_service.kernel_value(sp, z, w)
            poincare = kernel_service.kernel_via_poincare(sp, z, w, 30)
            worst = max(
                worst,
                relative(abs(series - direct), abs(direct)),
                relative(abs(poincare - direct), abs(direct)),
                relative(abs(series - poincare), abs(direct)),
            )
    return worst, 1e-8


def check_bi_invariance() -> Tuple[float, float]:
    rng = _rng()
    sp = _square(2.0)
    shell = [lattice_service.point(sp.lattice, 0, 0)] + lattice_service.shell(sp.lattice, 1)
    worst = 0.0
    for _ in range(20):
        s = rng.uniform(-0.5, 0.5, size=4)
        z, w = _cell_point(sp, s[0], s[1]), _cell_point(sp, s[2], s[3])
        g1, g2 = (shell[int(i)] for i in rng.integers(0, len(shell), size=2))
        worst = max(worst, kernel_service.bi_invariance_residual(sp, z, w, g1, g2))
    return worst, 1e-8


def check_reproducing() -> Tuple[float, float]:
    sp = _square(1.0)
    z = complex(0.25, 0.25)
    return max(kernel_service.reproducing_residual(sp, m, z, 48) for m in (0, 1, 2)), 1e-6


def check_zero_count() -> Tuple[float, float]:
    rng = _rng()
    worst = 0.0
    for k in (1, 2, 3):
        for sp in (_square(float(k)), _generic(k)):
            for _ in range(5):
                s, t = rng.uniform(-0.45, 0.45, size=2)
                w = _cell_point(sp, s, t)
                count = zero_service.zero_count(sp, w).count
                zeros = zero_service.zero_locate(sp, w)
                if count != k or len(zeros.zeros) != count:
                    logger.warning("k=%d, w=%s: count %d, located %d", k, w, count, len(zeros.zeros))
                    return math.inf, 1e-7
                worst = max(worst, zero_service.translation_closure_residual(sp, w, zeros))
    return worst, 1e-7


def check_sigma_factor() -> Tuple[float, float]:
    sp = _square(1.0)
    mu = elliptic_service.mu_invariant(elliptic_service.weierstrass_data(sp.lattice), sp.nu)
    report = zero_service.sigma_factor_residual(sp)
    return max(report.spread, report.deviation, abs(mu.mu)), 1e-7


def check_hermite() -> Tuple[float, float]:
    rng = _rng()
    worst = 0.0
    for _ in range(100):
        nu = rng.uniform(0.5, 2.0)
        xi = complex(*rng.uniform(-0.7, 0.7, size=2))
        a, b = (complex(*rng.uniform(-0.3, 0.3, size=2)) for _ in range(2))
        z = complex(*rng.uniform(-0.4, 0.4, size=2))
        lam = rng.uniform(0.7, 1.4) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        m, n = (int(v) for v in rng.integers(0, 7, size=2))
        h = hermite_service.hermite_eval(nu, m, n, xi)
        worst = max(
            worst,
            hermite_service.genfun2_residual(nu, a, b, xi, 25, 25),
            hermite_service.genfun1_residual(nu, z, xi, n % 4, 30),
            hermite_service.recurrence_residual(nu, xi, 5, 5),
            relative(abs(h.conjugate() - hermite_service.hermite_eval(nu, n, m, xi)), abs(h)),
            relative(abs(hermite_service.hermite_eval(nu, m, n, -xi) - (-1) ** (m + n) * h), abs(h)),
            hermite_service.scaling_residual(nu, lam, m, n, xi),
        )
    return worst, 1e-10


def check_recurrences() -> Tuple[float, float]:
    rng = _rng()
    sp = _square(1.0)
    worst = coeff_service.recurrence_residuals(sp, 6).max_residual
    complex_sp = kernel_service.space(sp.lattice, sp.nu, pseudochar_service.char_from_generators(sp.lattice, sp.nu, 1j, 1.0))
    for space in (sp, complex_sp):
        for _ in range(10):
            m, n, p, q = (int(v) for v in rng.integers(0, 3, size=4))
            worst = max(worst, coeff_service.conj_symmetry_residual(space, m, n, p, q))
    return worst, 1e-9


def check_theta_identity() -> Tuple[float, float]:
    worst = 0.0
    for nu in (0.5, 1.0, math.pi / 2, math.pi, 2.0):
        report = elliptic_service.theta_identity_report(nu)
        worst = max(
            worst,
            abs(report.split_combination - report.gaussian_char_sum),
            abs(report.theta_combination - report.gaussian_char_sum),
        )
    return worst, 1e-10


CHECKS: Dict[str, Check] = {
    "perelomov": check_perelomov,
    "sumtable": check_sumtable,
    "parity": check_parity,
    "scaling": check_scaling,
    "triangle": check_triangle,
    "bi-invariance": check_bi_invariance,
    "reproducing": check_reproducing,
    "zero-count": check_zero_count,
    "sigma-factor": check_sigma_factor,
    "hermite": check_hermite,
    "recurrences": check_recurrences,
    "theta-identity": check_theta_identity,
}


def register(subparsers) -> None:
    group = subparsers.add_parser("verify", help="acceptance checks")
    commands = group.add_subparsers(dest="command", required=True)
    p = commands.add_parser("all", help="run every acceptance check")
    add_output_arguments(p, default="text")
    p.add_argument("--only", default=None, help="comma separated subset of: " + ", ".join(CHECKS))
    p.set_defaults(func=verify_all)


def run_checks(names) -> VerifyReport:
    rows = []
    for name in names:
        started = time.perf_counter()
        try:
            measured, threshold = CHECKS[name]()
        except ThetaKernelError as exc:
            logger.error("Check %s raised %s: %s", name, exc.code, exc.detail)
            measured, threshold = math.inf, 0.0
        logger.info("Check %s finished in %.2f s", name, time.perf_counter() - started)
        rows.append(VerifyRow(name=name, passed=measured < threshold, measured=measured, threshold=threshold))
    return VerifyReport(rows=rows, passed=all(r.passed for r in rows))


def verify_all(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    names = list(CHECKS)
    if args.only:
        names = [n.strip() for n in args.only.split(",") if n.strip()]
        unknown = [n for n in names if n not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(unknown)}")
    report = run_checks(names)
    lines = [f"{'check':<16}{'result':<8}{'measured':>12}{'threshold':>12}"]
    for row in report.rows:
        status = "PASS" if row.passed else "FAIL"
        lines.append(f"{row.name:<16}{status:<8}{row.measured:>12.3e}{row.threshold:>12.1e}")
    lines.append("all passed" if report.passed else "FAILED")
    emit(report.rows if cfg.format == "csv" else report, cfg, text="\n".join(lines) + "\n")
    return 0 if report.passed else 1
