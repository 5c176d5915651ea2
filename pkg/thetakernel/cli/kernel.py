"""
kernel eval|series|poincare|reproduce
"""
import argparse

from thetakernel.cli.common import (
    add_output_arguments,
    add_space_arguments,
    build_space,
    check_degree,
    complex_arg,
    emit,
    run_config,
)
from thetakernel.core.schemas import ComplexReport, ResidualReport, SumResultReport, pair
from thetakernel.services.kernel import kernel_service


def register(subparsers) -> None:
    group = subparsers.add_parser("kernel", help="reproducing kernel evaluation")
    commands = group.add_subparsers(dest="command", required=True)

    p = commands.add_parser("eval", help="K(z, w) by lattice sum")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--w", type=complex_arg, required=True)
    p.set_defaults(func=kernel_eval)

    p = commands.add_parser("series", help="K(z, w) from a truncated expansion")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--w", type=complex_arg, required=True)
    p.add_argument("--M", type=int, default=30)
    p.add_argument("--N", type=int, default=30)
    p.add_argument("--via", choices=["hermite", "poincare"], default="hermite")
    p.add_argument("--even-odd-only", action="store_true", help="keep only (even, even) and (odd, odd) terms")
    p.set_defaults(func=kernel_series)

    p = commands.add_parser("poincare", help="Poincaré series P(e_m)(z)")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--z", type=complex_arg, required=True)
    p.set_defaults(func=kernel_poincare)

    p = commands.add_parser("reproduce", help="reproducing-property residual for f = P(e_m)")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--quad-n", type=int, default=None)
    p.set_defaults(func=kernel_reproduce)


def kernel_eval(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    sp = build_space(cfg)
    result = kernel_service.kernel_eval(sp, args.z, args.w, cfg.eps)
    emit(SumResultReport(value=pair(result.value), tail_bound=result.tail_bound, shells_used=result.shells_used), cfg)
    return 0


def kernel_series(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    check_degree(cfg, args.M if args.via == "poincare" else args.M + args.N)
    sp = build_space(cfg)
    if args.via == "poincare":
        value = kernel_service.kernel_via_poincare(sp, args.z, args.w, args.M, cfg.eps)
    else:
        value = kernel_service.kernel_eval_series(
            sp, args.z, args.w, args.M, args.N, cfg.eps, even_odd_only=args.even_odd_only
        )
    emit(ComplexReport(value=pair(value)), cfg)
    return 0


def kernel_poincare(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    sp = build_space(cfg)
    result = kernel_service.poincare_monomial(sp, args.m, args.z, cfg.eps)
    emit(SumResultReport(value=pair(result.value), tail_bound=result.tail_bound, shells_used=result.shells_used), cfg)
    return 0


def kernel_reproduce(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    sp = build_space(cfg)
    emit(ResidualReport(residual=kernel_service.reproducing_residual(sp, args.m, args.z, args.quad_n)), cfg)
    return 0
