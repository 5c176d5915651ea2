"""
Utility functions for the theta kernel toolkit.
"""
import json
import math
import os
import re
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, Tuple

import numpy as np


_PI_LITERAL = re.compile(r"^\s*([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*$", re.IGNORECASE)


def ensure_directory(path: str) -> None:
    """Ensure a directory exists, creating it if necessary."""
    if path:
        Path(path).mkdir(parents=True, exist_ok=True)


def load_json(file_path: str) -> Dict[str, Any]:
    """Load data from a JSON file."""
    if not os.path.exists(file_path):
        return {}
    with open(file_path, "r", encoding="utf-8") as f:
        return json.load(f)


def parse_real(text: str) -> float:
    """
    Parse a real number, accepting a trailing ``pi`` factor.

    "2pi" -> 2π, "pi" -> π, "0.5*pi" -> π/2, "3.25" -> 3.25.
    """
    match = _PI_LITERAL.match(text)
    if match:
        sign = -1.0 if match.group(1) == "-" else 1.0
        factor = match.group(2)
        return sign * (float(factor) if factor else 1.0) * math.pi
    return float(text)


def parse_complex(text: str) -> complex:
    """Parse "re,im" (or a single real) into a complex number."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(parse_real(parts[0]), 0.0)
    if len(parts) != 2:
        raise ValueError(f"expected 're,im', got {text!r}")
    return complex(parse_real(parts[0]), parse_real(parts[1]))


def parse_floats(text: str, count: int) -> Tuple[float, ...]:
    """Parse exactly `count` comma separated reals."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise ValueError(f"expected {count} comma separated numbers, got {text!r}")
    return tuple(parse_real(p) for p in parts)


def fixed(value: float, digits: int = 12) -> str:
    """Fixed-point rendering that never prints a negative zero."""
    return f"{round(value, digits) + 0.0:.{digits}f}"


def compensated_sum(terms: Iterable[complex]) -> complex:
    """Correctly rounded sum of complex terms (real and imaginary parts via math.fsum)."""
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


@lru_cache(maxsize=32)
def gauss_legendre_unit(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * (x + 1.0), 0.5 * w


def relative(residual: float, reference: float) -> float:
    """Residual normalised by max(1, |reference|)."""
    return float(residual) / max(1.0, abs(reference))
