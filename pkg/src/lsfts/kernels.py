"""One-dimensional smoothing kernels for the time and space directions.

All families integrate to one. The compactly supported ones (uniform,
tricube, epanechnikov) vanish exactly outside [-1, 1]; gaussian and
silverman have unbounded support, and silverman changes sign, so it is
only admitted as a space kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveBandwidth

_SQRT2 = math.sqrt(2.0)
_GAUSS_NORM = 1.0 / math.sqrt(2.0 * math.pi)


def _uniform(v):
    return np.where(np.abs(v) <= 1.0, 0.5, 0.0)


def _tricube(v):
    a = np.abs(v)
    return np.where(a <= 1.0, (70.0 / 81.0) * (1.0 - a**3) ** 3, 0.0)


def _epanechnikov(v):
    return np.where(np.abs(v) <= 1.0, 0.75 * (1.0 - v * v), 0.0)


def _gaussian(v):
    return _GAUSS_NORM * np.exp(-0.5 * v * v)


def _silverman(v):
    a = np.abs(v) / _SQRT2
    return 0.5 * np.exp(-a) * np.sin(a + math.pi / 4.0)


_FUNCTIONS = {
    "uniform": _uniform,
    "tricube": _tricube,
    "epanechnikov": _epanechnikov,
    "gaussian": _gaussian,
    "silverman": _silverman,
}

FAMILIES = tuple(_FUNCTIONS)
COMPACT_FAMILIES = ("uniform", "tricube", "epanechnikov")
ROLES = ("time", "space")


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family bound to the direction it smooths."""

    family: str
    role: str

    def __post_init__(self):
        if self.family not in _FUNCTIONS:
            raise ValueError(f"unknown kernel family {self.family!r}; "
                             f"choose one of {', '.join(FAMILIES)}")
        if self.role not in ROLES:
            raise ValueError(f"kernel role must be one of {ROLES}")
        if self.family == "silverman" and self.role == "time":
            raise ValueError("the sign-changing silverman kernel is only "
                             "admitted in the space direction")

    @property
    def is_nonnegative(self) -> bool:
        return self.family != "silverman"

    @property
    def has_compact_support(self) -> bool:
        return self.family in COMPACT_FAMILIES

    @property
    def support_radius(self) -> float:
        """C1 such that K(v) = 0 for |v| > C1 (inf for unbounded support)."""
        return 1.0 if self.has_compact_support else math.inf

    def evaluate(self, v):
        """Kernel density value K(v); accepts scalars or arrays."""
        out = _FUNCTIONS[self.family](np.asarray(v, dtype=float))
        return float(out) if out.ndim == 0 else out

    def scaled(self, v, h: float):
        """Scaled kernel K(v / h); no 1/h prefactor, the weight ratio
        cancels any constant factor."""
        if not (h > 0.0):
            raise NonPositiveBandwidth(f"bandwidth must be positive, got {h}")
        return self.evaluate(np.asarray(v, dtype=float) / h)


def time_kernel(family: str) -> KernelSpec:
    return KernelSpec(family, "time")


def space_kernel(family: str) -> KernelSpec:
    return KernelSpec(family, "space")
