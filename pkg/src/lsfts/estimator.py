"""Two-kernel Nadaraya-Watson weights and the conditional distribution,
conditional mean, and leave-one-out estimators built from them.

Weights combine a time kernel on the rescaled index distance u - a/T with a
space kernel on the curve distance D(x, X_a), normalized to sum to one.
With a sign-changing space kernel the weights can go negative; the
estimated law is then a `SignedMeasure` (see `conditional_law`), which the
Wasserstein routines accept directly, while `monotonize` repairs it for
reporting.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .curves import Curve, FunctionalSample
from .errors import (
    DegenerateNeighborhood,
    GridMismatch,
    SampleTooSmall,
    SignedWeights,
)
from .kernels import KernelSpec, space_kernel, time_kernel
from .wasserstein import DiscreteDistribution, SignedMeasure, signed_from_atoms


@dataclass(frozen=True)
class EstimatorConfig:
    """Kernel pair and bandwidths; h_time == h_space when a single bandwidth
    is configured."""

    k1: KernelSpec
    k2: KernelSpec
    h_time: float
    h_space: float

    def __post_init__(self):
        if self.k1.role != "time" or self.k2.role != "space":
            raise ValueError("k1 must be a time kernel and k2 a space kernel")
        if not (self.h_time > 0.0 and self.h_space > 0.0):
            raise ValueError("bandwidths must be positive")

    @classmethod
    def single_bandwidth(cls, k1_family: str, k2_family: str, h: float) -> "EstimatorConfig":
        return cls(time_kernel(k1_family), space_kernel(k2_family), h, h)

    def with_bandwidth(self, h: float) -> "EstimatorConfig":
        return replace(self, h_time=h, h_space=h)

    @property
    def nonnegative(self) -> bool:
        return self.k1.is_nonnegative and self.k2.is_nonnegative


@dataclass(frozen=True, eq=False)
class NWWeights:
    """Normalized per-observation weights for one query point."""

    weights: np.ndarray
    query_u: float
    query_x: Curve


def _raw_products(s: FunctionalSample, u: float, x: Curve,
                  cfg: EstimatorConfig) -> np.ndarray:
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"rescaled time u must lie in [0, 1], got {u}")
    if not s.grid.matches(x.grid):
        raise GridMismatch("query curve lives on a different grid than the sample")
    t_over_T = np.arange(1, s.T + 1) / s.T
    k1v = cfg.k1.scaled(u - t_over_T, cfg.h_time)
    k2v = cfg.k2.scaled(s.distances_from(x), cfg.h_space)
    return k1v * k2v


def _normalize(products: np.ndarray) -> np.ndarray:
    den = products.sum()
    if not np.isfinite(den) or den <= 0.0:
        raise DegenerateNeighborhood(
            "kernel weight denominator is not positive; no observation in "
            "the kernel support (widen h or keep u inside [C1*h, 1 - C1*h])")
    return products / den


def nw_weights(s: FunctionalSample, u: float, x: Curve,
               cfg: EstimatorConfig) -> NWWeights:
    """NW weights at rescaled time u and query curve x."""
    return NWWeights(_normalize(_raw_products(s, u, x, cfg)), u, x)


def conditional_law(s: FunctionalSample, u: float, x: Curve,
                    cfg: EstimatorConfig) -> DiscreteDistribution | SignedMeasure:
    """Estimated conditional law of Y given (u, x): atoms at the responses,
    NW weights as masses. Returns a SignedMeasure when weights go negative."""
    w = nw_weights(s, u, x, cfg)
    return signed_from_atoms(s.responses, w.weights)


def conditional_cdf(s: FunctionalSample, u: float, x: Curve,
                    cfg: EstimatorConfig) -> DiscreteDistribution:
    """Estimated conditional distribution; requires nonnegative weights."""
    law = conditional_law(s, u, x, cfg)
    if isinstance(law, SignedMeasure):
        raise SignedWeights(
            "space kernel produced negative weights; call conditional_law "
            "for the raw signed estimate or monotonize it for reporting")
    return law


def conditional_mean(s: FunctionalSample, u: float, x: Curve,
                     cfg: EstimatorConfig) -> float:
    """NW regression estimate: the mean of the estimated conditional law."""
    w = nw_weights(s, u, x, cfg)
    return float(w.weights @ s.responses)


def loo_conditional_mean(s: FunctionalSample, i: int, u: float, x: Curve,
                         cfg: EstimatorConfig) -> float:
    """Conditional mean with observation i (1-based) removed and the
    remaining weights renormalized."""
    if s.T < 2:
        raise SampleTooSmall("leave-one-out needs at least two observations")
    if not 1 <= i <= s.T:
        raise IndexError(f"i must be in 1..{s.T}")
    products = _raw_products(s, u, x, cfg)
    products[i - 1] = 0.0
    return float(_normalize(products) @ s.responses)
