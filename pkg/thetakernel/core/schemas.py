"""
Pydantic models: immutable domain types and the report schemas emitted by the CLI.
"""
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


Pair = Tuple[float, float]


def pair(z: complex) -> Pair:
    """Complex number as a JSON-friendly [re, im] pair."""
    z = complex(z)
    return (z.real, z.imag)


class Frozen(BaseModel):
    """Base for immutable domain types."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# Lattice module
class Lattice(Frozen):
    """Full-rank lattice Zω1 + Zω2, stored with Im(ω1·conj(ω2)) > 0."""
    omega1: complex
    omega2: complex


class LatticePoint(Frozen):
    """Lattice element m·ω1 + n·ω2."""
    m: int
    n: int
    value: complex


class FundamentalCell(Frozen):
    """Parallelogram {origin + s·ω1 + t·ω2 : 0 <= s,t < 1}."""
    origin: complex = 0j
    lattice: Lattice


# Pseudo-characters
class PseudoCharacter(Frozen):
    lattice: Lattice
    nu: float
    u1: complex
    u2: complex
    k: int

    @property
    def is_real(self) -> bool:
        return self.u1.imag == 0.0 and self.u2.imag == 0.0 and abs(self.u1.real) == 1.0 and abs(self.u2.real) == 1.0


# Hermite polynomials
class HermiteTable(Frozen):
    nu: float
    max_m: int
    max_n: int
    xi: complex
    values: np.ndarray


# Elliptic functions
class ThetaParams(Frozen):
    q: complex
    terms: int


class WeierstrassData(Frozen):
    """
    Quasi-periods of σ(z; Γ) together with the theta data it is evaluated from.

    The closed form uses the base period `period` = ω2 and τ = ω1/ω2 (Im τ > 0).
    """
    lattice: Lattice
    eta1: complex
    eta2: complex
    period: complex
    tau: complex
    nome: complex
    theta1_d1: complex
    theta1_d3: complex
    series_terms: int


class MuInvariant(Frozen):
    mu: complex
    nu: float
    mismatch: float = 0.0


# Kernel
class ThetaFockSpace(Frozen):
    lattice: Lattice
    nu: float
    chi: PseudoCharacter
    k: int


class SumResult(Frozen):
    """Truncated lattice sum with its a-posteriori tail estimate."""
    value: complex
    tail_bound: float = Field(ge=0.0)
    shells_used: int
    abs_sum: float = 0.0


class TailModel(Frozen):
    """
    Radial majorant exp(log_amplitude) · r^degree · exp(−(ν/2)(r − center)²)
    of a summand's modulus at |γ| = r.
    """
    nu: float
    center: float = 0.0
    degree: int = 0
    log_amplitude: float = 0.0


class CoeffRequest(Frozen):
    space: ThetaFockSpace
    m: int = Field(ge=0)
    n: int = Field(ge=0)
    p: int = Field(default=0, ge=0)
    q: int = Field(default=0, ge=0)
    eps: Optional[float] = None

    @property
    def total(self) -> int:
        return self.m + self.n + self.p + self.q


class CoeffTable(Frozen):
    """
    Coefficients from one shell pass. `values` is indexed [m, n] (fixed p, q)
    or [m, n, p, q]; `mass` holds the matching Σ|summand|.
    """
    values: np.ndarray
    mass: np.ndarray
    shells_used: int
    p: Optional[int] = None
    q: Optional[int] = None


# Zeros
class ZeroCountResult(Frozen):
    count: int
    winding_raw: complex
    shift: complex
    path_min_abs: float
    attempts: int = 1


class LocatedZero(Frozen):
    location: complex
    refined_abs: float


class ZeroList(Frozen):
    zeros: List[LocatedZero]
    scale: float
    failed_seeds: int = 0


class XiProbeResult(Frozen):
    candidates: List[complex]
    objective: List[float]
    bound: int
    low_confidence: bool = False
    exceeds_bound: bool = False


class SigmaFactorReport(Frozen):
    """spread compares |ratio| only; deviation is max|r − mean| / |mean| and also sees the phase."""
    spread: float
    deviation: float
    constant: complex
    samples_used: int


# Coefficient reports
class CoeffRow(BaseModel):
    m: int
    n: int
    p: int
    q: int
    value: Pair
    abs_value: float
    mass: float


class ParityReport(BaseModel):
    degree: int
    rows: List[CoeffRow]
    max_relative: float
    passed: bool
    even_witness: Optional[CoeffRow] = None


class RecurrenceReport(BaseModel):
    degree: int
    max_residual_a: float
    max_residual_b: float
    printed_residual_a: float
    printed_residual_b: float

    @property
    def max_residual(self) -> float:
        return max(self.max_residual_a, self.max_residual_b)


class SumTableRow(BaseModel):
    t: float
    value: float
    reference: Optional[float] = None


class SignProfile(BaseModel):
    """Empirical shape of t -> Σ χ_W(γ) e^{−(tπ/2)|γ|²} on a grid."""
    ts: List[float]
    values: List[float]
    signs: List[int]
    increasing: bool
    bounded_by_one: bool


class ThetaIdentityReport(BaseModel):
    nu: float
    theta2: float
    theta3: float
    printed_residual: float
    theta_combination: float
    split_odd_odd: float
    split_even_even: float
    split_mixed: float
    split_combination: float
    gaussian_char_sum: float


# CLI reports
class SumResultReport(BaseModel):
    value: Pair
    tail_bound: float
    shells_used: int


class ComplexReport(BaseModel):
    value: Pair


class ResidualReport(BaseModel):
    residual: float


class ZeroCountReport(BaseModel):
    count: int
    winding_raw: Pair
    shift: Pair
    path_min_abs: float
    dimension: int


class ZeroLocateReport(BaseModel):
    zeros: List[Pair]
    refined_abs: List[float]
    scale: float


class XiProbeReport(BaseModel):
    candidates: List[Pair]
    objective: List[float]
    bound: int
    low_confidence: bool
    exceeds_bound: bool


class MuReport(BaseModel):
    mu: Pair
    eta1: Pair
    eta2: Pair
    legendre: Pair


class VerifyRow(BaseModel):
    name: str
    passed: bool
    measured: float
    threshold: float


class VerifyReport(BaseModel):
    rows: List[VerifyRow]
    passed: bool


class ErrorResponse(BaseModel):
    """Schema for error responses."""
    error: str
    detail: Optional[str] = None
    context: Optional[Dict[str, Any]] = None
