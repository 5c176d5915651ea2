"""
Error hierarchy. Every numerical failure raised by a service derives from
ThetaKernelError; the CLI reports the class name as the error code.
"""
from typing import Optional


class ThetaKernelError(Exception):
    """Base class for all domain errors."""

    def __init__(self, detail: str = "", **context):
        self.detail = detail
        self.context = context
        super().__init__(detail)

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        payload = {"error": self.code, "detail": self.detail}
        if self.context:
            payload["context"] = {k: _plain(v) for k, v in self.context.items()}
        return payload


def _plain(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


# lattice
class DegenerateLattice(ThetaKernelError):
    pass


class NonIntegralDimension(ThetaKernelError):
    pass


# hermite / sums
class Overflow(ThetaKernelError):
    pass


class NoConvergence(ThetaKernelError):
    pass


# elliptic
class NomeOutOfRange(ThetaKernelError):
    pass


class PoleAtLatticePoint(ThetaKernelError):
    pass


class ZeroGamma(ThetaKernelError):
    pass


class InconsistentMu(ThetaKernelError):
    pass


# coeffs
class NotRealCharacter(ThetaKernelError):
    pass


# zeros
class IdenticallyZero(ThetaKernelError):
    pass


class PathUnstable(ThetaKernelError):
    pass


class RefinementFailed(ThetaKernelError):
    def __init__(self, detail: str = "", seed: Optional[complex] = None, **context):
        super().__init__(detail, seed=seed, **context)
        self.seed = seed


class NotOneDimensional(ThetaKernelError):
    pass
