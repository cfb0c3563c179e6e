"""Synthetic functional time series: an orthonormal Fourier system, two
time-varying functional autoregressive generators driven by randomly drawn
operator matrices, the oracle regression function, and response generation.

The recursion runs in coefficient space (dimension J) and synthesizes
curves onto the grid only for output. Operator matrices are redrawn
independently at every time step by default; `redraw_operators=False`
freezes the underlying standard-normal draw for the whole run so only the
prescribed variances vary with rescaled time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve, FunctionalSample, Grid
from .errors import DegenerateDraw

PROCESSES = ("tvfar1", "tvfar2")

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SimConfig:
    """Knobs for one synthetic run."""

    T: int
    N: int = 100
    J: int = 7
    process: str = "tvfar1"
    burn_in: int = 50
    seed: int = 0
    redraw_operators: bool = True

    def __post_init__(self):
        if self.T < 1 or self.N < 2 or self.J < 1 or self.burn_in < 0:
            raise ValueError("need T >= 1, N >= 2, J >= 1, burn_in >= 0")
        if self.process not in PROCESSES:
            raise ValueError(f"process must be one of {PROCESSES}")


def fourier_basis(j: int, tau):
    """Orthonormal Fourier system on [0, 1]: sqrt(2)*sin(2*pi*k*tau) for odd
    j, sqrt(2)*cos(2*pi*k*tau) for even j, with k = ceil(j/2)."""
    if j < 1:
        raise ValueError("basis index j starts at 1")
    t = np.asarray(tau, dtype=float)
    k = (j + 1) // 2
    if j % 2 == 1:
        out = _SQRT2 * np.sin(2.0 * math.pi * k * t)
    else:
        out = _SQRT2 * np.cos(2.0 * math.pi * k * t)
    return float(out) if out.ndim == 0 else out


def basis_matrix(J: int, grid: Grid) -> np.ndarray:
    """(J, N) matrix of the first J basis functions on the grid points."""
    return np.stack([fourier_basis(j, grid.points) for j in range(1, J + 1)])


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    return float(np.linalg.norm(a, 2))


def _unit_norm_gaussian(sd: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Centered normal entries with per-entry standard deviations, scaled to
    unit spectral norm; one redraw on a zero-norm draw, then DegenerateDraw."""
    for _ in range(2):
        a = rng.normal(0.0, sd)
        s = spectral_norm(a)
        if s > 0.0:
            return a / s
    raise DegenerateDraw("drawn operator matrix had zero spectral norm twice")


def _index_grids(J: int):
    i = np.arange(1, J + 1, dtype=float)[:, None]
    j = np.arange(1, J + 1, dtype=float)[None, :]
    return i, j


def _tvfar1_sd(u: float, J: int) -> np.ndarray:
    i, j = _index_grids(J)
    return np.sqrt(u * i**-6 + (1.0 - u) * np.exp(-i - j))


def _tvfar2_sds(J: int):
    i, j = _index_grids(J)
    return np.sqrt(np.exp(-(i - 3.0) - (j - 3.0))), np.sqrt(1.0 / (i**4 + j))


def draw_operator_tvfar1(u: float, J: int, rng: np.random.Generator) -> np.ndarray:
    """Order-1 operator: 0.4 times a variance-profiled Gaussian matrix
    normalized to unit spectral norm."""
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must lie in [0, 1]")
    return 0.4 * _unit_norm_gaussian(_tvfar1_sd(u, J), rng)


def draw_operators_tvfar2(u: float, J: int, rng: np.random.Generator):
    """Order-2 operator pair with spectral norms |0.4*cos(1.5 - cos(pi*u))|
    and 0.5 (coefficient -0.5)."""
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must lie in [0, 1]")
    sd1, sd2 = _tvfar2_sds(J)
    b1 = 0.4 * math.cos(1.5 - math.cos(math.pi * u)) * _unit_norm_gaussian(sd1, rng)
    b2 = -0.5 * _unit_norm_gaussian(sd2, rng)
    return b1, b2


def draw_innovation(J: int, rng: np.random.Generator) -> np.ndarray:
    """Independent centered Gaussian coordinates, Var = (pi*(j - 1.5))^-2."""
    j = np.arange(1, J + 1, dtype=float)
    return rng.normal(0.0, 1.0 / (math.pi * np.abs(j - 1.5)))


def _normalize_batch(a: np.ndarray) -> np.ndarray:
    """Scale each matrix of a (steps, J, J) stack to unit spectral norm."""
    norms = np.linalg.norm(a, ord=2, axis=(1, 2))
    zero = norms == 0.0
    if np.any(zero):
        raise DegenerateDraw("drawn operator matrix had zero spectral norm")
    return a / norms[:, None, None]


def _operator_stack(cfg: SimConfig, u: np.ndarray, rng: np.random.Generator):
    """Normalized operators for every step at once; one batched draw keeps
    the per-step LAPACK overhead out of the recursion loop."""
    steps = u.size
    J = cfg.J
    if cfg.process == "tvfar2":
        sd1, sd2 = _tvfar2_sds(J)
        if cfg.redraw_operators:
            a1 = rng.standard_normal((steps, J, J)) * sd1
            a2 = rng.standard_normal((steps, J, J)) * sd2
        else:
            a1 = np.broadcast_to(rng.standard_normal((J, J)) * sd1, (steps, J, J)).copy()
            a2 = np.broadcast_to(rng.standard_normal((J, J)) * sd2, (steps, J, J)).copy()
        coef = 0.4 * np.cos(1.5 - np.cos(math.pi * u))
        b1 = coef[:, None, None] * _normalize_batch(a1)
        b2 = -0.5 * _normalize_batch(a2)
        return b1, b2
    i, j = _index_grids(J)
    var = u[:, None, None] * i**-6 + (1.0 - u[:, None, None]) * np.exp(-i - j)
    sds = np.sqrt(var)
    if cfg.redraw_operators:
        a = rng.standard_normal((steps, J, J)) * sds
    else:
        a = rng.standard_normal((J, J)) * sds
    return 0.4 * _normalize_batch(a), None


def simulate_coefficients(cfg: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """(T, J) coefficient paths of the autoregression, after burn-in."""
    J = cfg.J
    order2 = cfg.process == "tvfar2"
    u = np.concatenate((np.zeros(cfg.burn_in),
                        np.arange(1, cfg.T + 1) / cfg.T))
    b1, b2 = _operator_stack(cfg, u, rng)
    innovations = rng.normal(
        0.0, 1.0 / (math.pi * np.abs(np.arange(1, J + 1) - 1.5)),
        size=(u.size, J))

    out = np.empty((cfg.T, J))
    x_prev = np.zeros(J)
    x_prev2 = np.zeros(J)
    for step in range(u.size):
        x = b1[step] @ x_prev + innovations[step]
        if order2:
            x += b2[step] @ x_prev2
        if step >= cfg.burn_in:
            out[step - cfg.burn_in] = x
        x_prev2, x_prev = x_prev, x
    return out


def synthesize_curves(coefs: np.ndarray, grid: Grid) -> np.ndarray:
    """(T, N) curve values sum_j coef_j * psi_j(tau)."""
    coefs = np.asarray(coefs, dtype=float)
    return coefs @ basis_matrix(coefs.shape[1], grid)


def simulate_covariates(cfg: SimConfig, rng: np.random.Generator) -> list[Curve]:
    """T covariate curves on a uniform grid of N points."""
    grid = Grid.uniform(cfg.N)
    values = synthesize_curves(simulate_coefficients(cfg, rng), grid)
    return [Curve(grid, row) for row in values]


def true_mean(u: float, x: Curve) -> float:
    """Oracle regression function 2.5*sin(2*pi*u) * integral of cos(pi*x)."""
    integral = float(x.grid.trapezoid_weights @ np.cos(math.pi * x.values))
    return 2.5 * math.sin(2.0 * math.pi * u) * integral


def _responses_for(values: np.ndarray, grid: Grid,
                   rng: np.random.Generator) -> np.ndarray:
    T = values.shape[0]
    integrals = np.cos(math.pi * values) @ grid.trapezoid_weights
    u = np.arange(1, T + 1) / T
    return 2.5 * np.sin(2.0 * math.pi * u) * integrals + rng.standard_normal(T)


def generate_responses(curves, rng: np.random.Generator) -> np.ndarray:
    """Y_t = true_mean(t/T, X_t) + standard normal noise, t = 1..T."""
    curves = list(curves)
    if not curves:
        raise ValueError("need at least one curve")
    values = np.stack([c.values for c in curves])
    return _responses_for(values, curves[0].grid, rng)


def simulate_sample(cfg: SimConfig, rng: np.random.Generator) -> FunctionalSample:
    """Covariates plus responses as one functional sample."""
    grid = Grid.uniform(cfg.N)
    values = synthesize_curves(simulate_coefficients(cfg, rng), grid)
    return FunctionalSample(grid, values, _responses_for(values, grid, rng))
