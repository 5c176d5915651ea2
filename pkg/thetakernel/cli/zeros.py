"""
zeros count|locate|xi
"""
import argparse
import os

import pandas as pd

from thetakernel.cli.common import (
    add_output_arguments,
    add_space_arguments,
    build_space,
    complex_arg,
    emit,
    run_config,
)
from thetakernel.core.schemas import XiProbeReport, ZeroCountReport, ZeroLocateReport, pair
from thetakernel.core.utils import ensure_directory
from thetakernel.services.zeros import zero_service


def register(subparsers) -> None:
    group = subparsers.add_parser("zeros", help="zeros of phi_w = K(., w)")
    commands = group.add_subparsers(dest="command", required=True)

    p = commands.add_parser("count", help="argument-principle zero count in a cell")
    add_space_arguments(p)
    add_output_arguments(p, default="text")
    p.add_argument("--w", type=complex_arg, required=True)
    p.add_argument("--nodes", type=int, default=None, help="Gauss–Legendre nodes per edge")
    p.set_defaults(func=zeros_count)

    p = commands.add_parser("locate", help="refined zero locations")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--w", type=complex_arg, required=True)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--emit-csv", default=None, help="also write (re, im, abs) rows to this path")
    p.set_defaults(func=zeros_locate)

    p = commands.add_parser("xi", help="probe the common zero set")
    add_space_arguments(p)
    add_output_arguments(p)
    p.add_argument("--wgrid", type=int, default=8)
    p.add_argument("--zgrid", type=int, default=12)
    p.set_defaults(func=zeros_xi)


def zeros_count(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    sp = build_space(cfg)
    result = zero_service.zero_count(sp, args.w, args.nodes)
    emit(
        ZeroCountReport(
            count=result.count,
            winding_raw=pair(result.winding_raw),
            shift=pair(result.shift),
            path_min_abs=result.path_min_abs,
            dimension=sp.k,
        ),
        cfg,
        text=f"{result.count}\n",
    )
    return 0


def zeros_locate(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    sp = build_space(cfg)
    found = zero_service.zero_locate(sp, args.w, args.grid)
    if args.emit_csv:
        ensure_directory(os.path.dirname(args.emit_csv))
        frame = pd.DataFrame(
            {
                "re": [z.location.real for z in found.zeros],
                "im": [z.location.imag for z in found.zeros],
                "abs": [z.refined_abs for z in found.zeros],
            }
        )
        frame.to_csv(args.emit_csv, index=False, float_format="%.17g")
    emit(
        ZeroLocateReport(
            zeros=[pair(z.location) for z in found.zeros],
            refined_abs=[z.refined_abs for z in found.zeros],
            scale=found.scale,
        ),
        cfg,
    )
    return 0


def zeros_xi(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    sp = build_space(cfg)
    result = zero_service.xi_probe(sp, args.wgrid, args.zgrid)
    emit(
        XiProbeReport(
            candidates=[pair(c) for c in result.candidates],
            objective=result.objective,
            bound=result.bound,
            low_confidence=result.low_confidence,
            exceeds_bound=result.exceeds_bound,
        ),
        cfg,
    )
    return 0
