"""Real-series ingestion: block segmentation into functional covariates,
response construction at a fixed intra-block index, Gaussian smoothing."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .curves import Curve, FunctionalSample, Grid
from .errors import IndexOutOfBlock, SeriesTooShort


@dataclass(frozen=True, eq=False)
class RawSeries:
    """A plain scalar time series."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("a series needs at least two values")
        if not np.all(np.isfinite(v)):
            raise ValueError("series values must be finite (missing values "
                             "are not supported)")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class SegmentedDataset:
    """Consecutive length-block_len slices of a series viewed as curves on a
    uniform grid j/block_len, j = 1..block_len."""

    grid: Grid
    curve_values: np.ndarray
    block_len: int

    @property
    def count(self) -> int:
        return self.curve_values.shape[0]

    @cached_property
    def curves(self) -> tuple:
        return tuple(Curve(self.grid, row) for row in self.curve_values)


def segment(series: RawSeries, block_len: int) -> SegmentedDataset:
    """Split the series into floor(n / block_len) consecutive blocks; any
    trailing remainder is discarded."""
    if block_len < 1:
        raise ValueError("block_len must be positive")
    n = len(series)
    if n < 2 * block_len:
        raise SeriesTooShort(
            f"need at least {2 * block_len} values for block_len={block_len}, "
            f"got {n}")
    count = n // block_len
    values = series.values[: count * block_len].reshape(count, block_len)
    grid = Grid(np.arange(1, block_len + 1) / block_len)
    return SegmentedDataset(grid, values.copy(), block_len)


def build_pairs(ds: SegmentedDataset, j: int) -> FunctionalSample:
    """Pairs (X_t = curve t, Y_t = value j of curve t+1) for t = 1..count-1."""
    if not 1 <= j <= ds.block_len:
        raise IndexOutOfBlock(f"j must be in 1..{ds.block_len}, got {j}")
    if ds.count < 2:
        raise SeriesTooShort("need at least two curves to form pairs")
    covariates = ds.curve_values[:-1]
    responses = ds.curve_values[1:, j - 1]
    return FunctionalSample(ds.grid, covariates, responses.copy())


def gaussian_smooth(responses, sigma: float,
                    rng: np.random.Generator) -> np.ndarray:
    """Responses plus independent centered Gaussian noise of scale sigma."""
    if not sigma > 0.0:
        raise ValueError("sigma must be positive")
    y = np.asarray(responses, dtype=float)
    return y + rng.normal(0.0, sigma, y.shape)
