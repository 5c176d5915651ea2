"""
Shared CLI plumbing: flags, RunConfig construction and report writers.
"""
import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, Iterable, List, Literal, Optional, Union

import pandas as pd
from pydantic import BaseModel

from thetakernel.core.config import settings
from thetakernel.core.schemas import Lattice, ThetaFockSpace
from thetakernel.core.utils import ensure_directory, load_json, parse_complex, parse_floats, parse_real
from thetakernel.services.kernel import kernel_service
from thetakernel.services.lattice import lattice_service
from thetakernel.services.pseudochar import pseudochar_service


logger = logging.getLogger(__name__)

OutputFormat = Literal["json", "csv", "text"]


class UsageError(ValueError):
    """Malformed command-line input (exit code 2)."""


class RunConfig(BaseModel):
    """Validated inputs shared by every subcommand."""
    lattice: Lattice
    nu: float
    chi_spec: str = "weierstrass"
    eps: Optional[float] = None
    degree_cap: int = settings.degree_cap
    format: OutputFormat = "json"
    output: Optional[str] = None


def complex_arg(text: str) -> complex:
    """argparse type for "re,im" values."""
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def add_space_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lattice", default="1,0,0,1", help='"re1,im1,re2,im2", a JSON object or a JSON file')
    parser.add_argument("--nu", default="pi", help='weight, e.g. "pi", "2pi", "0.5pi" or "3.14"')
    parser.add_argument("--chi", default="weierstrass", help='"weierstrass" or "unitary:re1,im1,re2,im2"')
    parser.add_argument("--eps", type=float, default=None, help="relative truncation tolerance")


def add_output_arguments(parser: argparse.ArgumentParser, default: OutputFormat = "json") -> None:
    parser.add_argument("--format", choices=["json", "csv", "text"], default=default)
    parser.add_argument("--output", default=None, help="write the report to this path instead of stdout")


def parse_lattice(text: str) -> Lattice:
    """
    Lattice from four comma separated reals, an inline JSON object or a JSON file.

    Raises:
        UsageError: if the text is none of these
        DegenerateLattice: if the generators are collinear
    """
    text = text.strip()
    if text.startswith("{"):
        try:
            return lattice_service.from_json(json.loads(text))
        except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
            raise UsageError(f"malformed lattice JSON: {exc}") from exc
    if os.path.isfile(text):
        data = load_json(text)
        try:
            return lattice_service.from_json(data)
        except (KeyError, IndexError, TypeError) as exc:
            raise UsageError(f"malformed lattice file {text}: {exc}") from exc
    try:
        re1, im1, re2, im2 = parse_floats(text, 4)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return lattice_service.new_lattice(complex(re1, im1), complex(re2, im2))


def parse_chi(spec: str, lat: Lattice, nu: float):
    """Pseudo-character from "weierstrass" or "unitary:re1,im1,re2,im2"."""
    spec = spec.strip()
    if spec.lower() == "weierstrass":
        return pseudochar_service.weierstrass_char(lat, nu)
    if spec.lower().startswith("unitary:"):
        try:
            re1, im1, re2, im2 = parse_floats(spec.split(":", 1)[1], 4)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return pseudochar_service.char_from_generators(lat, nu, complex(re1, im1), complex(re2, im2))
    raise UsageError(f"unknown character spec {spec!r}")


def run_config(args: argparse.Namespace) -> RunConfig:
    """Build the RunConfig of a parsed command line."""
    try:
        nu = parse_real(getattr(args, "nu", "pi"))
    except ValueError as exc:
        raise UsageError(f"invalid --nu: {exc}") from exc
    if not nu > 0:
        raise UsageError("--nu must be positive")
    eps = getattr(args, "eps", None)
    if eps is not None and not eps > 0:
        raise UsageError("--eps must be positive")
    return RunConfig(
        lattice=parse_lattice(getattr(args, "lattice", "1,0,0,1")),
        nu=nu,
        chi_spec=getattr(args, "chi", "weierstrass"),
        eps=eps,
        format=getattr(args, "format", "json"),
        output=getattr(args, "output", None),
    )


def check_degree(cfg: RunConfig, degree: int) -> None:
    """Reject a requested total degree before any summation starts."""
    if degree < 0:
        raise UsageError(f"degree must be non-negative, got {degree}")
    if degree > cfg.degree_cap:
        raise UsageError(f"total degree {degree} exceeds the cap {cfg.degree_cap} (THETA_KERNEL_DEGREE_CAP)")


def build_space(cfg: RunConfig) -> ThetaFockSpace:
    chi = parse_chi(cfg.chi_spec, cfg.lattice, cfg.nu)
    return kernel_service.space(cfg.lattice, cfg.nu, chi)


def _flatten(row: Dict[str, Any]) -> Dict[str, Any]:
    """Complex pairs become <name>_re / <name>_im columns."""
    flat: Dict[str, Any] = {}
    for key, value in row.items():
        if isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(v, float) for v in value):
            flat[f"{key}_re"], flat[f"{key}_im"] = value
        else:
            flat[key] = value
    return flat


def render(payload: Union[BaseModel, Iterable[BaseModel]], fmt: OutputFormat, text: Optional[str] = None) -> str:
    """
    Serialise a report.

    Args:
        payload: A report model or a list of row models
        fmt: json, csv or text
        text: Pre-rendered text for the text format
    """
    if fmt == "text" and text is not None:
        return text
    if isinstance(payload, BaseModel):
        data = payload.model_dump(mode="json")
        rows: List[Dict[str, Any]] = [data]
    else:
        rows = [row.model_dump(mode="json") for row in payload]
        data = {"rows": rows}
    if fmt == "csv":
        frame = pd.DataFrame([_flatten(r) for r in rows])
        return frame.to_csv(index=False, float_format="%.17g")
    return json.dumps(data, indent=2) + "\n"


def emit(payload, cfg: RunConfig, text: Optional[str] = None) -> None:
    """Write a rendered report to --output or stdout."""
    out = render(payload, cfg.format, text)
    if cfg.output:
        ensure_directory(os.path.dirname(cfg.output))
        with open(cfg.output, "w", encoding="utf-8") as f:
            f.write(out)
        logger.info("Report written to %s", cfg.output)
    else:
        sys.stdout.write(out)
