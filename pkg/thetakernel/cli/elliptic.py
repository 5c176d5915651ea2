"""
elliptic mu|sigma|theta-identity
"""
import argparse

from thetakernel.cli.common import (
    add_output_arguments,
    add_space_arguments,
    complex_arg,
    emit,
    run_config,
)
from thetakernel.core.schemas import ComplexReport, MuReport, pair
from thetakernel.services.elliptic import elliptic_service


def register(subparsers) -> None:
    group = subparsers.add_parser("elliptic", help="theta constants and Weierstrass functions")
    commands = group.add_subparsers(dest="command", required=True)

    p = commands.add_parser("mu", help="mu(Gamma) for nu = pi/S")
    add_space_arguments(p)
    add_output_arguments(p)
    p.set_defaults(func=elliptic_mu)

    p = commands.add_parser("sigma", help="Weierstrass sigma (or the modified sigma with --modified)")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--modified", action="store_true")
    p.set_defaults(func=elliptic_sigma)

    p = commands.add_parser("theta-identity", help="theta identity at nome e^{-2 nu}")
    add_space_arguments(p)
    add_output_arguments(p)
    p.set_defaults(func=elliptic_theta_identity)


def elliptic_mu(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    wd = elliptic_service.weierstrass_data(cfg.lattice)
    mu = elliptic_service.mu_invariant(wd, cfg.nu)
    emit(
        MuReport(
            mu=pair(mu.mu),
            eta1=pair(wd.eta1),
            eta2=pair(wd.eta2),
            legendre=pair(elliptic_service.legendre(wd)),
        ),
        cfg,
    )
    return 0


def elliptic_sigma(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    wd = elliptic_service.weierstrass_data(cfg.lattice)
    if args.modified:
        mu = elliptic_service.mu_invariant(wd, cfg.nu)
        value = elliptic_service.modified_sigma(wd, mu, args.z)
    else:
        value = elliptic_service.sigma(wd, args.z)
    emit(ComplexReport(value=pair(value)), cfg)
    return 0


def elliptic_theta_identity(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    emit(elliptic_service.theta_identity_report(cfg.nu), cfg)
    return 0
