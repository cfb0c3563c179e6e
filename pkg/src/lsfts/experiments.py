"""Monte Carlo experiment pipelines.

One synthetic run simulates L independent replications, estimates the
conditional CDF at a fixed rescaled time on each replication's own data
(query curve = that replication's covariate at the evaluation index),
averages the L estimated CDFs, and measures the W1 distance to the
empirical CDF of the L responses observed at that index. The real-data
variant replaces fresh simulations with Gaussian-perturbed copies of one
observed response vector; the kernel weights do not depend on the
responses, so they are computed once and reused across replications.

Replications and outer Monte Carlo runs draw from seed substreams derived
from (seed, T-index, u-index, run), so results do not depend on the thread
schedule.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bandwidth import BandwidthGrid, CVWeightMode, default_grid, select_bandwidth
from .curves import FunctionalSample
from .errors import (
    AllReplicationsDegenerate,
    DegenerateNeighborhood,
    EmptyInput,
)
from .estimator import EstimatorConfig, conditional_law, nw_weights
from .kernels import KernelSpec
from .simulate import SimConfig, simulate_sample
from .wasserstein import DiscreteDistribution, from_atoms, signed_from_atoms, w1


@dataclass(frozen=True)
class FixedBandwidth:
    h: float

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError("bandwidth must be positive")


@dataclass(frozen=True)
class CVBandwidth:
    """Per-replication cross-validation over `grid` (or the data-driven
    default grid of `grid_size` candidates, capped so the evaluation time
    stays inside [C1*h, 1 - C1*h])."""

    grid_size: int = 10
    mode: CVWeightMode = CVWeightMode.GLOBAL
    grid: BandwidthGrid | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Synthetic experiment description."""

    process: str
    T_list: tuple[int, ...]
    u_list: tuple[float, ...]
    L: int
    mc_runs: int
    k1: KernelSpec
    k2: KernelSpec
    bandwidth: FixedBandwidth | CVBandwidth
    seed: int = 0
    N: int = 100
    J: int = 7
    burn_in: int = 50
    threads: int | None = None

    def __post_init__(self):
        if self.L < 1 or self.mc_runs < 1:
            raise ValueError("need L >= 1 and mc_runs >= 1")
        if not self.T_list or not self.u_list:
            raise ValueError("need at least one T and one u")
        if any(not 0.0 < u < 1.0 for u in self.u_list):
            raise ValueError("rescaled times must lie in (0, 1)")
        if isinstance(self.bandwidth, FixedBandwidth) and self.k1.has_compact_support:
            h = self.bandwidth.h
            lo, hi = self.k1.support_radius * h, 1.0 - self.k1.support_radius * h
            if any(not lo <= u <= hi for u in self.u_list):
                raise ValueError(
                    f"every u must lie in [{lo}, {hi}] for the fixed bandwidth {h}")


@dataclass(frozen=True)
class ReportRow:
    T: int
    u: float
    w1_mean: float
    w1_std: float
    degenerate: int
    seconds: float


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple[ReportRow, ...]
    failed_runs: int = 0

    def to_csv(self) -> str:
        lines = ["T,u,w1_mean,w1_std,degenerate,seconds"]
        for r in self.rows:
            lines.append(f"{r.T},{r.u!r},{r.w1_mean!r},{r.w1_std!r},"
                         f"{r.degenerate},{r.seconds!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunResult:
    w1: float
    degenerate: int


def average_cdfs(dists) -> DiscreteDistribution:
    """Equal-weight mixture whose CDF is the pointwise average of the input
    CDFs."""
    dists = list(dists)
    if not dists:
        raise EmptyInput("need at least one distribution")
    values = np.concatenate([d.atoms for d in dists])
    weights = np.concatenate([d.weights for d in dists]) / len(dists)
    return from_atoms(values, weights)


def empirical_cdf(values) -> DiscreteDistribution:
    """Equal-weight atoms at the observed values (duplicates merged)."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise EmptyInput("need at least one value")
    return from_atoms(v, np.full(v.size, 1.0 / v.size))


def _mix_laws(laws):
    """Equal-weight mixture of laws that may carry signed weights."""
    values = np.concatenate([law.atoms for law in laws])
    weights = np.concatenate([law.weights for law in laws]) / len(laws)
    return signed_from_atoms(values, weights)


def _resolve_bandwidth(sample: FunctionalSample, u: float,
                       policy, k1: KernelSpec, k2: KernelSpec) -> float:
    if isinstance(policy, FixedBandwidth):
        return policy.h
    cap = 0.5
    if k1.has_compact_support:
        cap = min(cap, u / k1.support_radius, (1.0 - u) / k1.support_radius)
    grid = policy.grid or default_grid(sample, policy.grid_size, cap=cap)
    template = EstimatorConfig(k1, k2, 1.0, 1.0)
    h, _ = select_bandwidth(sample, grid, policy.mode, template)
    return h


def _map_replications(fn, count: int, threads: int | None):
    if threads is not None and threads <= 1:
        return [fn(l) for l in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def run_algorithm1(T: int, t_index: int, cfg: ExperimentConfig,
                   seed_seq: np.random.SeedSequence | None = None) -> RunResult:
    """One synthetic Monte Carlo run: L fresh replications, averaged NW CDF
    against the pooled empirical CDF at observation t_index (1-based)."""
    if not 1 <= t_index <= T:
        raise ValueError(f"t_index must be in 1..{T}")
    u = t_index / T
    if seed_seq is None:
        seed_seq = np.random.SeedSequence((cfg.seed, T, t_index))
    children = seed_seq.spawn(cfg.L)
    sim = SimConfig(T=T, N=cfg.N, J=cfg.J, process=cfg.process,
                    burn_in=cfg.burn_in)

    def one(l: int):
        rng = np.random.default_rng(children[l])
        sample = simulate_sample(sim, rng)
        x = sample.curve(t_index)
        y_t = float(sample.responses[t_index - 1])
        try:
            h = _resolve_bandwidth(sample, u, cfg.bandwidth, cfg.k1, cfg.k2)
            law = conditional_law(sample, u, x,
                                  EstimatorConfig(cfg.k1, cfg.k2, h, h))
        except DegenerateNeighborhood:
            return None
        return law, y_t

    results = _map_replications(one, cfg.L, cfg.threads)
    ok = [r for r in results if r is not None]
    if not ok:
        raise AllReplicationsDegenerate(
            f"all {cfg.L} replications degenerate at T={T}, u={u}")
    averaged = _mix_laws([law for law, _ in ok])
    empirical = empirical_cdf([y for _, y in ok])
    return RunResult(w1(averaged, empirical), cfg.L - len(ok))


def run_algorithm2(sample: FunctionalSample, t_index: int, sigma: float,
                   cfg: ExperimentConfig,
                   seed_seq: np.random.SeedSequence | None = None) -> RunResult:
    """One real-data run: L Gaussian-perturbed response vectors share the
    same NW weights; averaged CDF against the empirical CDF of the
    perturbed responses at t_index (1-based)."""
    T = sample.T
    if not 1 <= t_index <= T:
        raise ValueError(f"t_index must be in 1..{T}")
    if not sigma > 0.0:
        raise ValueError("sigma must be positive")
    u = t_index / T
    if seed_seq is None:
        seed_seq = np.random.SeedSequence((cfg.seed, T, t_index))
    x = sample.curve(t_index)
    try:
        h = _resolve_bandwidth(sample, u, cfg.bandwidth, cfg.k1, cfg.k2)
        weights = nw_weights(sample, u, x,
                             EstimatorConfig(cfg.k1, cfg.k2, h, h)).weights
    except DegenerateNeighborhood as exc:
        raise AllReplicationsDegenerate(
            f"weights degenerate at T={T}, u={u}: {exc}") from exc
    children = seed_seq.spawn(cfg.L)

    def one(l: int):
        rng = np.random.default_rng(children[l])
        y = sample.responses + rng.normal(0.0, sigma, T)
        return signed_from_atoms(y, weights), float(y[t_index - 1])

    results = _map_replications(one, cfg.L, cfg.threads)
    averaged = _mix_laws([law for law, _ in results])
    empirical = empirical_cdf([y for _, y in results])
    return RunResult(w1(averaged, empirical), 0)


def _t_index_for(u: float, T: int) -> int:
    return min(T, max(1, round(u * T)))


def monte_carlo(cfg: ExperimentConfig) -> ExperimentReport:
    """Mean and sample standard deviation of the run-level W1 over mc_runs
    independent runs, for every (T, u) pair."""
    rows = []
    failed = 0
    for ti, T in enumerate(cfg.T_list):
        for ui, u in enumerate(cfg.u_list):
            t_index = _t_index_for(u, T)
            start = time.perf_counter()
            values = []
            degenerate = 0
            for r in range(cfg.mc_runs):
                ss = np.random.SeedSequence((cfg.seed, ti, ui, r))
                try:
                    res = run_algorithm1(T, t_index, cfg, ss)
                except AllReplicationsDegenerate:
                    failed += 1
                    degenerate += cfg.L
                    continue
                values.append(res.w1)
                degenerate += res.degenerate
            elapsed = time.perf_counter() - start
            arr = np.array(values)
            mean = float(arr.mean()) if arr.size else float("nan")
            std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
            rows.append(ReportRow(T, u, mean, std, degenerate, elapsed))
    return ExperimentReport(tuple(rows), failed)


def real_data_report(sample: FunctionalSample, t_index: int, sigma: float,
                     cfg: ExperimentConfig) -> ExperimentReport:
    """mc_runs repetitions of the real-data run with fresh noise substreams."""
    T = sample.T
    start = time.perf_counter()
    values = []
    for r in range(cfg.mc_runs):
        ss = np.random.SeedSequence((cfg.seed, T, t_index, r))
        values.append(run_algorithm2(sample, t_index, sigma, cfg, ss).w1)
    elapsed = time.perf_counter() - start
    arr = np.array(values)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    row = ReportRow(T, t_index / T, float(arr.mean()), std, 0, elapsed)
    return ExperimentReport((row,))
