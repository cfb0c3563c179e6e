"""Discretized functional data: grids, curves, samples, trapezoid quadrature
and the L2 semi-metric used as the distance between covariate curves."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatch


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing evaluation points tau_1 < ... < tau_N in [0, 1]."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a grid needs at least two points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        if not np.all(np.diff(pts) > 0.0):
            raise ValueError("grid points must be strictly increasing")
        if pts[0] < 0.0 or pts[-1] > 1.0:
            raise ValueError("grid points must lie in [0, 1]")
        object.__setattr__(self, "points", _readonly(pts))

    @classmethod
    def uniform(cls, n: int) -> "Grid":
        return cls(np.linspace(0.0, 1.0, n))

    def __len__(self) -> int:
        return self.points.size

    @cached_property
    def trapezoid_weights(self) -> np.ndarray:
        """Quadrature weights making dot(w, f) the trapezoid rule integral."""
        d = np.diff(self.points)
        w = np.empty_like(self.points)
        w[0] = d[0] / 2.0
        w[-1] = d[-1] / 2.0
        w[1:-1] = (d[:-1] + d[1:]) / 2.0
        return _readonly(w)

    def matches(self, other: "Grid") -> bool:
        return self is other or np.array_equal(self.points, other.points)


@dataclass(frozen=True, eq=False)
class Curve:
    """A real function on [0, 1] known at the points of a shared grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size != len(self.grid):
            raise ValueError("curve values must match the grid length")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve values must be finite")
        object.__setattr__(self, "values", _readonly(v))


def integrate(c: Curve) -> float:
    """Trapezoid-rule integral of the curve over its grid."""
    return float(c.grid.trapezoid_weights @ c.values)


def semi_metric_l2(x: Curve, y: Curve) -> float:
    """L2 distance ||x - y||_2 computed by trapezoid quadrature on the grid."""
    if not x.grid.matches(y.grid):
        raise GridMismatch("curves live on different grids")
    diff = x.values - y.values
    return float(np.sqrt(x.grid.trapezoid_weights @ (diff * diff)))


@dataclass(frozen=True, eq=False)
class FunctionalSample:
    """Time-indexed pairs (curve, scalar response) on one shared grid.

    Curve values are stored as a (T, N) matrix so that distance computations
    vectorize; `curves` materializes the row views on demand.
    """

    grid: Grid
    curve_values: np.ndarray
    responses: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.curve_values, dtype=float)
        r = np.asarray(self.responses, dtype=float)
        if v.ndim != 2 or v.shape[1] != len(self.grid):
            raise ValueError("curve_values must be a (T, N) matrix on the grid")
        if r.ndim != 1 or r.size != v.shape[0]:
            raise ValueError("responses must have one value per curve")
        if v.shape[0] < 1:
            raise ValueError("a sample needs at least one observation")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(r))):
            raise ValueError("sample values must be finite")
        object.__setattr__(self, "curve_values", _readonly(v))
        object.__setattr__(self, "responses", _readonly(r))

    @classmethod
    def from_curves(cls, curves, responses) -> "FunctionalSample":
        curves = list(curves)
        if not curves:
            raise ValueError("a sample needs at least one observation")
        grid = curves[0].grid
        for c in curves[1:]:
            if not grid.matches(c.grid):
                raise GridMismatch("all curves in a sample must share one grid")
        values = np.stack([c.values for c in curves])
        return cls(grid, values, np.asarray(responses, dtype=float))

    @property
    def T(self) -> int:
        return self.curve_values.shape[0]

    def __len__(self) -> int:
        return self.T

    @cached_property
    def curves(self) -> tuple:
        return tuple(Curve(self.grid, row) for row in self.curve_values)

    def curve(self, t: int) -> Curve:
        """Observation t, 1-based."""
        if not 1 <= t <= self.T:
            raise IndexError(f"t must be in 1..{self.T}")
        return Curve(self.grid, self.curve_values[t - 1])

    def distances_from(self, x: Curve) -> np.ndarray:
        """Semi-metric distances D(x, X_t) for every observation, vectorized."""
        if not self.grid.matches(x.grid):
            raise GridMismatch("query curve lives on a different grid")
        diff = self.curve_values - x.values
        sq = (diff * diff) @ self.grid.trapezoid_weights
        return np.sqrt(np.maximum(sq, 0.0))

    @cached_property
    def pairwise_distances(self) -> np.ndarray:
        """(T, T) matrix of D(X_i, X_j): symmetric up to BLAS rounding, with
        an exactly zero diagonal."""
        w = self.grid.trapezoid_weights
        scaled = self.curve_values * np.sqrt(w)
        gram = scaled @ scaled.T
        sq = np.diag(gram).copy()
        d = sq[:, None] + sq[None, :]
        d -= gram
        d -= gram
        np.maximum(d, 0.0, out=d)
        np.sqrt(d, out=d)
        np.fill_diagonal(d, 0.0)
        return _readonly(d)
