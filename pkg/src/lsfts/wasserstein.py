"""Exact Wasserstein distances between finitely supported distributions on
the real line, plus an independent Riemann-sum oracle.

W1 integrates |F - G| over the merged support; Wr integrates quantile
differences over merged cumulative-weight levels. Both are exact for step
CDFs. `SignedMeasure` carries the signed step functions produced by
sign-changing space kernels; W1 extends to them unchanged, and
`monotonize` rounds them back to a proper distribution for reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    EmptySupport,
    InvalidOrder,
    QuantileLevelOutOfRange,
)

MERGE_TOL = 1e-12


def merge_atoms(values, weights, tol: float = MERGE_TOL):
    """Sort values, merge entries closer than `tol`, and sum their weights.

    Returns (atoms, weights) with atoms strictly increasing. Zero-weight
    entries are kept; callers drop them as appropriate.
    """
    v = np.asarray(values, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if v.size != w.size:
        raise ValueError("values and weights must have equal length")
    if v.size == 0:
        return v, w
    if not np.all(np.isfinite(v)):
        raise ValueError("atom values must be finite")
    order = np.argsort(v, kind="stable")
    v = v[order]
    w = w[order]
    starts = np.empty(v.size, dtype=bool)
    starts[0] = True
    np.greater(np.diff(v), tol, out=starts[1:])
    group = np.cumsum(starts) - 1
    atoms = v[starts]
    merged = np.bincount(group, weights=w, minlength=atoms.size)
    return atoms, merged


def _drop_zeros(atoms: np.ndarray, weights: np.ndarray):
    keep = weights != 0.0
    return atoms[keep], weights[keep]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Finitely supported probability measure: sorted atoms, positive weights
    summing to one."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.atoms, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if a.size == 0 or a.size != w.size:
            raise ValueError("need equally many atoms and weights, at least one")
        if not np.all(np.isfinite(a)):
            raise ValueError("atoms must be finite")
        if a.size > 1 and not np.all(np.diff(a) > 0.0):
            raise ValueError("atoms must be strictly increasing")
        if np.any(w <= 0.0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to one")
        object.__setattr__(self, "atoms", _readonly(a))
        object.__setattr__(self, "weights", _readonly(w))

    @cached_property
    def cum_weights(self) -> np.ndarray:
        c = np.cumsum(self.weights)
        c[-1] = 1.0
        return _readonly(c)

    def cdf(self, y):
        """P[X <= y]; right-continuous, the atom at y is included."""
        idx = np.searchsorted(self.atoms, np.asarray(y, dtype=float), side="right")
        padded = np.concatenate(([0.0], self.cum_weights))
        out = padded[idx]
        return float(out) if out.ndim == 0 else out

    def quantile(self, z):
        """Generalized inverse inf{v : F(v) >= z} for z in (0, 1]."""
        zz = np.asarray(z, dtype=float)
        if np.any(zz <= 0.0) or np.any(zz > 1.0):
            raise QuantileLevelOutOfRange("quantile levels must lie in (0, 1]")
        idx = np.searchsorted(self.cum_weights, zz, side="left")
        out = self.atoms[idx]
        return float(out) if out.ndim == 0 else out

    def mean(self) -> float:
        return float(self.atoms @ self.weights)


@dataclass(frozen=True, eq=False)
class SignedMeasure:
    """Finitely supported signed measure with total mass one.

    Produced by kernel weights that change sign; its "CDF" is a step
    function that may leave [0, 1] but still starts at 0 and ends at 1.
    """

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.atoms, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if a.size == 0 or a.size != w.size:
            raise ValueError("need equally many atoms and weights, at least one")
        if a.size > 1 and not np.all(np.diff(a) > 0.0):
            raise ValueError("atoms must be strictly increasing")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("total mass must be one")
        object.__setattr__(self, "atoms", _readonly(a))
        object.__setattr__(self, "weights", _readonly(w))

    @cached_property
    def cum_weights(self) -> np.ndarray:
        c = np.cumsum(self.weights)
        c[-1] = 1.0
        return _readonly(c)

    def mean(self) -> float:
        return float(self.atoms @ self.weights)


def from_atoms(values, weights) -> DiscreteDistribution:
    """Build a distribution from raw (value, weight) pairs.

    Drops zero weights, sorts, merges equal values, renormalizes to sum one.
    """
    v = np.asarray(values, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if v.size == 0 or v.size != w.size:
        raise ValueError("need equally many values and weights, at least one")
    if np.any(w < 0.0):
        raise ValueError("weights must be nonnegative; use SignedMeasure for "
                         "signed kernel output")
    total = w.sum()
    if total <= 0.0:
        raise EmptySupport("all weights are zero")
    atoms, merged = merge_atoms(v, w)
    atoms, merged = _drop_zeros(atoms, merged)
    return DiscreteDistribution(atoms, merged / merged.sum())


def signed_from_atoms(values, weights) -> SignedMeasure | DiscreteDistribution:
    """Merge raw weighted atoms; return a proper distribution when every
    merged weight is nonnegative, a SignedMeasure otherwise."""
    atoms, merged = merge_atoms(values, weights)
    atoms, merged = _drop_zeros(atoms, merged)
    if atoms.size == 0:
        raise EmptySupport("all weights are zero")
    if np.all(merged > 0.0):
        return DiscreteDistribution(atoms, merged / merged.sum())
    return SignedMeasure(atoms, merged)


def monotonize(measure: SignedMeasure) -> DiscreteDistribution:
    """Isotonic rounding of a signed step CDF: running max clipped to [0, 1].

    This is the reporting-path repair for sign-changing kernels; distance
    computations use the raw signed measure.
    """
    cdf = np.clip(np.maximum.accumulate(measure.cum_weights), 0.0, 1.0)
    weights = np.diff(np.concatenate(([0.0], cdf)))
    return from_atoms(measure.atoms, weights)


def cdf_eval(d, y):
    """Step-CDF value at y for a distribution or signed measure."""
    atoms = d.atoms
    cum = d.cum_weights
    idx = np.searchsorted(atoms, np.asarray(y, dtype=float), side="right")
    padded = np.concatenate(([0.0], cum))
    out = padded[idx]
    return float(out) if out.ndim == 0 else out


def quantile(d: DiscreteDistribution, z):
    return d.quantile(z)


def _cdf_on(points: np.ndarray, atoms: np.ndarray, cum: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(atoms, points, side="right")
    padded = np.concatenate(([0.0], cum))
    return padded[idx]


def w1(d1, d2) -> float:
    """Exact 1-Wasserstein distance: integral of |F1 - F2| between the merged
    support breakpoints. Accepts distributions and signed measures."""
    xs = np.union1d(d1.atoms, d2.atoms)
    if xs.size == 1:
        return 0.0
    left = xs[:-1]
    f1 = _cdf_on(left, d1.atoms, d1.cum_weights)
    f2 = _cdf_on(left, d2.atoms, d2.cum_weights)
    return float(np.abs(f1 - f2) @ np.diff(xs))


def wr(d1: DiscreteDistribution, d2: DiscreteDistribution, r: float) -> float:
    """Exact r-Wasserstein distance via the quantile representation: the
    integrand is constant between merged cumulative-weight levels."""
    if not np.isfinite(r) or r < 1.0:
        raise InvalidOrder(f"order r must satisfy r >= 1, got {r}")
    levels = np.union1d(d1.cum_weights, d2.cum_weights)
    widths = np.diff(np.concatenate(([0.0], levels)))
    q1 = d1.atoms[np.searchsorted(d1.cum_weights, levels, side="left")]
    q2 = d2.atoms[np.searchsorted(d2.cum_weights, levels, side="left")]
    total = float(np.abs(q1 - q2) ** r @ widths)
    return total ** (1.0 / r)


def w1_riemann_oracle(d1, d2, grid_points: int) -> float:
    """Independent check of w1: left-endpoint Riemann sum of |F1 - F2| on a
    uniform grid over the merged support hull."""
    if grid_points < 10:
        raise ValueError("grid_points must be at least 10")
    lo = min(d1.atoms[0], d2.atoms[0])
    hi = max(d1.atoms[-1], d2.atoms[-1])
    if hi == lo:
        return 0.0
    step = (hi - lo) / grid_points
    points = lo + step * np.arange(grid_points)
    f1 = _cdf_on(points, d1.atoms, d1.cum_weights)
    f2 = _cdf_on(points, d2.atoms, d2.cum_weights)
    return float(np.abs(f1 - f2).sum() * step)
