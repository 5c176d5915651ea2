"""
coeffs one|table|parity|scaling|recur|sumtable
"""
import argparse
from typing import Tuple

import numpy as np

from thetakernel.cli.common import (
    RunConfig,
    UsageError,
    add_output_arguments,
    add_space_arguments,
    build_space,
    check_degree,
    complex_arg,
    emit,
    run_config,
)
from thetakernel.core.schemas import CoeffRequest, CoeffRow, ResidualReport, pair
from thetakernel.core.utils import fixed
from thetakernel.services.coeffs import coeff_service


def register(subparsers) -> None:
    group = subparsers.add_parser("coeffs", help="Hermite–Taylor lattice coefficients")
    commands = group.add_subparsers(dest="command", required=True)

    p = commands.add_parser("one", help="a single coefficient a^{p,q}_{m,n}")
    add_space_arguments(p)
    add_output_arguments(p)
    _add_indices(p)
    p.set_defaults(func=coeffs_one)

    p = commands.add_parser("table", help="all coefficients up to a total degree")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=coeffs_table)

    p = commands.add_parser("parity", help="odd-total vanishing for a real character")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--degree", type=int, default=7)
    p.set_defaults(func=coeffs_parity)

    p = commands.add_parser("scaling", help="lattice-function scaling residual")
    add_space_arguments(p)
    add_output_arguments(p)
    _add_indices(p)
    p.add_argument("--lambda", dest="lam", type=complex_arg, required=True)
    p.set_defaults(func=coeffs_scaling)

    p = commands.add_parser("recur", help="coefficient recurrence residuals")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--degree", type=int, default=6)
    p.set_defaults(func=coeffs_recur)

    p = commands.add_parser("sumtable", help="Σ χ_W(γ) e^{−(tπ/2)|γ|²} on Z + iZ")
    add_output_arguments(p, default="text")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-step", type=float, default=None)
    p.set_defaults(func=coeffs_sumtable)


def _add_indices(parser: argparse.ArgumentParser) -> None:
    for name in ("m", "n", "p", "q"):
        parser.add_argument(f"--{name}", type=int, default=0)


def _indices(args: argparse.Namespace, cfg: RunConfig) -> Tuple[int, int, int, int]:
    indices = (args.m, args.n, args.p, args.q)
    if min(indices) < 0:
        raise UsageError("indices m, n, p, q must be non-negative")
    check_degree(cfg, sum(indices))
    return indices


def coeffs_one(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    m, n, p, q = _indices(args, cfg)
    sp = build_space(cfg)
    result = coeff_service.coeff(CoeffRequest(space=sp, m=m, n=n, p=p, q=q, eps=cfg.eps))
    row = CoeffRow(
        m=m, n=n, p=p, q=q,
        value=pair(result.value),
        abs_value=abs(result.value),
        mass=result.abs_sum,
    )
    emit(row, cfg)
    return 0


def coeffs_table(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    check_degree(cfg, 4 * args.degree)
    sp = build_space(cfg)
    table = coeff_service.coeff_tensor(sp, args.degree, cfg.eps)
    emit(coeff_service.rows(table, args.degree), cfg)
    return 0


def coeffs_parity(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    check_degree(cfg, 4 * args.degree)
    sp = build_space(cfg)
    report = coeff_service.parity_report(sp, args.degree)
    emit(report, cfg)
    return 0 if report.passed else 1


def coeffs_scaling(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    indices = _indices(args, cfg)
    if args.lam == 0:
        raise UsageError("--lambda must be non-zero")
    sp = build_space(cfg)
    residual = coeff_service.scaling_residual(sp, args.lam, *indices)
    emit(ResidualReport(residual=residual), cfg)
    return 0


def coeffs_recur(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    check_degree(cfg, 4 * (args.degree + 1))
    sp = build_space(cfg)
    emit(coeff_service.recurrence_residuals(sp, args.degree), cfg)
    return 0


def _t_grid(args: argparse.Namespace):
    if args.t is not None:
        if not args.t > 0:
            raise UsageError("--t must be positive")
        return [args.t]
    if None in (args.t_min, args.t_max, args.t_step):
        raise UsageError("give --t or all of --t-min, --t-max, --t-step")
    if args.t_step <= 0 or args.t_min <= 0 or args.t_max < args.t_min:
        raise UsageError("need 0 < --t-min <= --t-max and --t-step > 0")
    count = int(np.floor((args.t_max - args.t_min) / args.t_step + 1e-9)) + 1
    return [round(args.t_min + i * args.t_step, 12) for i in range(count)]


def coeffs_sumtable(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    ts = _t_grid(args)
    rows = coeff_service.sum_table(ts)
    if len(rows) == 1:
        text = fixed(rows[0].value) + "\n"
    else:
        text = "".join(f"{row.t:g} & {fixed(row.value)}\n" for row in rows)
    emit(rows, cfg, text=text)
    return 0
