"""Command-line front door.

Subcommands: simulate, estimate, cv, wasserstein, ingest,
experiment-synthetic, experiment-real. Every run that writes files also
writes a JSON manifest echoing the resolved flags, the seed, and stage
timings, so a run can be reproduced exactly. All randomness flows from
--seed through named substreams; numeric CSV output uses shortest
round-trip decimal formatting.

Exit codes: 0 success, 1 usage error, 2 data or estimation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bandwidth import BandwidthGrid, CVWeightMode, cv_profile, default_grid, select_bandwidth
from .curves import Curve, FunctionalSample, Grid
from .errors import LsftsError
from .estimator import EstimatorConfig, conditional_law
from .experiments import (
    CVBandwidth,
    ExperimentConfig,
    FixedBandwidth,
    monte_carlo,
    real_data_report,
)
from .ingest import RawSeries, build_pairs, gaussian_smooth, segment
from .kernels import FAMILIES, space_kernel, time_kernel
from .simulate import PROCESSES, SimConfig, simulate_sample
from .wasserstein import SignedMeasure, from_atoms, monotonize, w1, wr


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(x) -> str:
    return repr(float(x))


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v)


# ---------------------------------------------------------------- file I/O

def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def write_curves(path: Path, grid: Grid, values: np.ndarray):
    lines = ["# grid: " + ",".join(_fmt(p) for p in grid.points)]
    for row in values:
        lines.append(",".join(_fmt(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def read_curves(path: Path) -> tuple[Grid, np.ndarray]:
    grid = None
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("grid:"):
                grid = Grid(_float_list(body[len("grid:"):]))
            continue
        rows.append(_float_list(line))
    if not rows:
        raise ValueError(f"no curve rows in {path}")
    values = np.asarray(rows, dtype=float)
    if grid is None:
        grid = Grid.uniform(values.shape[1])
    return grid, values


def write_column(path: Path, values: np.ndarray):
    _write_text(path, "\n".join(_fmt(v) for v in values) + "\n")


def read_column(path: Path) -> np.ndarray:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(float(line.split(",")[0]))
        except ValueError:
            continue  # header line
    if not out:
        raise ValueError(f"no numeric values in {path}")
    return np.asarray(out)


def read_weighted_atoms(path: Path):
    values, weights = [], []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        try:
            v = float(parts[0])
        except ValueError:
            continue  # header line
        values.append(v)
        weights.append(float(parts[1]) if len(parts) > 1 else 1.0)
    if not values:
        raise ValueError(f"no (value, weight) rows in {path}")
    return np.asarray(values), np.asarray(weights)


def _read_sample(curves_path: Path, responses_path: Path) -> FunctionalSample:
    grid, values = read_curves(curves_path)
    responses = read_column(responses_path)
    return FunctionalSample(grid, values, responses)


def _write_manifest(path: Path, command: str, args: argparse.Namespace,
                    started: str, stage_seconds: dict):
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "config"):
            continue
        if isinstance(value, tuple):
            value = list(value)
        config[key] = value
    manifest = {
        "command": command,
        "artifact_version": __version__,
        "seed": config.get("seed"),
        "config": config,
        "started_at": started,
        "finished_at": _now(),
        "stage_seconds": stage_seconds,
    }
    _write_text(path, json.dumps(manifest, indent=2, default=str) + "\n")


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        _write_text(out, text)


# ------------------------------------------------------------- subcommands

def _cmd_simulate(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    cfg = SimConfig(T=args.T, N=args.N, J=args.J, process=args.process,
                    burn_in=args.burn_in, seed=args.seed)
    rng = np.random.default_rng(np.random.SeedSequence((args.seed, 0)))
    sample = simulate_sample(cfg, rng)
    prefix = Path(args.out)
    write_curves(prefix.with_name(prefix.name + "_curves.csv"),
                 sample.grid, sample.curve_values)
    write_column(prefix.with_name(prefix.name + "_responses.csv"),
                 sample.responses)
    _write_manifest(prefix.with_name(prefix.name + "_manifest.json"),
                    "simulate", args, started,
                    {"total": time.perf_counter() - t0})
    return 0


def _estimator_config(args, h: float | None = None) -> EstimatorConfig:
    h_time = args.h if h is None else h
    h_space = getattr(args, "h_space", None)
    if h_space is None:
        h_space = h_time
    return EstimatorConfig(time_kernel(args.k1), space_kernel(args.k2),
                           h_time, h_space)


def _cmd_estimate(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    sample = _read_sample(Path(args.curves), Path(args.responses))
    x = sample.curve(args.query_index)
    u = args.u if args.u is not None else args.query_index / sample.T
    law = conditional_law(sample, u, x, _estimator_config(args))
    if isinstance(law, SignedMeasure):
        print("note: signed weights monotonized for reporting", file=sys.stderr)
        law = monotonize(law)
    lines = ["atom,weight,cumweight"]
    for atom, weight, cum in zip(law.atoms, law.weights, law.cum_weights):
        lines.append(f"{_fmt(atom)},{_fmt(weight)},{_fmt(cum)}")
    out = Path(args.out) if args.out else None
    _emit("\n".join(lines) + "\n", out)
    if out is not None:
        _write_manifest(out.with_suffix(out.suffix + ".manifest.json"),
                        "estimate", args, started,
                        {"total": time.perf_counter() - t0})
    return 0


def _cmd_cv(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    sample = _read_sample(Path(args.curves), Path(args.responses))
    template = EstimatorConfig(time_kernel(args.k1), space_kernel(args.k2),
                               1.0, 1.0)
    if args.grid_min is not None and args.grid_max is not None:
        grid = BandwidthGrid.log_spaced(args.grid_min, args.grid_max,
                                        args.grid_size)
    else:
        grid = default_grid(sample, args.grid_size)
    mode = CVWeightMode(args.mode)
    rows = cv_profile(sample, grid, mode, template)
    h, score = select_bandwidth(sample, grid, mode, template)
    lines = ["h,score,degenerate"]
    lines += [f"{_fmt(r.h)},{_fmt(r.score)},{r.degenerate}" for r in rows]
    lines.append(f"selected,{_fmt(h)},{_fmt(score)}")
    out = Path(args.out) if args.out else None
    _emit("\n".join(lines) + "\n", out)
    if out is not None:
        _write_manifest(out.with_suffix(out.suffix + ".manifest.json"),
                        "cv", args, started, {"total": time.perf_counter() - t0})
    return 0


def _cmd_wasserstein(args) -> int:
    va, wa = read_weighted_atoms(Path(args.first))
    vb, wb = read_weighted_atoms(Path(args.second))
    d1 = from_atoms(va, wa)
    d2 = from_atoms(vb, wb)
    value = w1(d1, d2) if args.r == 1.0 else wr(d1, d2, args.r)
    sys.stdout.write(_fmt(value) + "\n")
    return 0


def _cmd_ingest(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    series = RawSeries(read_column(Path(args.input)), label=Path(args.input).stem)
    ds = segment(series, args.block_len)
    sample = build_pairs(ds, args.j)
    responses = sample.responses
    if args.sigma is not None:
        rng = np.random.default_rng(np.random.SeedSequence((args.seed, 1)))
        responses = gaussian_smooth(responses, args.sigma, rng)
    prefix = Path(args.out)
    write_curves(prefix.with_name(prefix.name + "_curves.csv"),
                 sample.grid, sample.curve_values)
    write_column(prefix.with_name(prefix.name + "_responses.csv"), responses)
    _write_manifest(prefix.with_name(prefix.name + "_manifest.json"),
                    "ingest", args, started,
                    {"total": time.perf_counter() - t0})
    return 0


def _bandwidth_policy(args):
    if args.bandwidth == "fixed":
        if args.h is None:
            raise _UsageError("--h is required with --bandwidth fixed")
        return FixedBandwidth(args.h)
    return CVBandwidth(grid_size=args.cv_grid_size,
                       mode=CVWeightMode(args.cv_mode))


def _cmd_experiment_synthetic(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    cfg = ExperimentConfig(
        process=args.process, T_list=args.T, u_list=args.u, L=args.L,
        mc_runs=args.mc, k1=time_kernel(args.k1), k2=space_kernel(args.k2),
        bandwidth=_bandwidth_policy(args), seed=args.seed, N=args.N, J=args.J,
        burn_in=args.burn_in, threads=args.threads)
    report = monte_carlo(cfg)
    prefix = Path(args.out)
    _write_text(prefix.with_name(prefix.name + "_report.csv"), report.to_csv())
    _write_manifest(prefix.with_name(prefix.name + "_manifest.json"),
                    "experiment-synthetic", args, started,
                    {"total": time.perf_counter() - t0})
    return 0


def _cmd_experiment_real(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    sample = _read_sample(Path(args.curves), Path(args.responses))
    cfg = ExperimentConfig(
        process="tvfar1", T_list=(sample.T,), u_list=(args.t_index / sample.T,),
        L=args.L, mc_runs=args.mc, k1=time_kernel(args.k1),
        k2=space_kernel(args.k2), bandwidth=_bandwidth_policy(args),
        seed=args.seed, threads=args.threads)
    report = real_data_report(sample, args.t_index, args.sigma, cfg)
    prefix = Path(args.out)
    _write_text(prefix.with_name(prefix.name + "_report.csv"), report.to_csv())
    _write_manifest(prefix.with_name(prefix.name + "_manifest.json"),
                    "experiment-real", args, started,
                    {"total": time.perf_counter() - t0})
    return 0


# ------------------------------------------------------------------ parser

def _add_kernel_flags(p, k1_default="uniform", k2_default="silverman"):
    p.add_argument("--k1", choices=FAMILIES, default=k1_default,
                   help="time-direction kernel")
    p.add_argument("--k2", choices=FAMILIES, default=k2_default,
                   help="space-direction kernel")


def _add_bandwidth_flags(p):
    p.add_argument("--bandwidth", choices=("cv", "fixed"), default="cv")
    p.add_argument("--h", type=float, default=None,
                   help="bandwidth for --bandwidth fixed")
    p.add_argument("--cv-grid-size", type=int, default=10)
    p.add_argument("--cv-mode", choices=("global", "local"), default="global")


def build_parser() -> _Parser:
    parser = _Parser(prog="lsfts",
                     description="Kernel conditional-distribution estimation "
                                 "for functional time series")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic sample")
    p.add_argument("--process", choices=PROCESSES, default="tvfar1")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--J", type=int, default=7)
    p.add_argument("--burn-in", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", help="estimate a conditional CDF")
    p.add_argument("--curves", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--query-index", type=int, required=True,
                   help="1-based observation used as the query curve")
    p.add_argument("--u", type=float, default=None,
                   help="rescaled time (default: query-index / T)")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--h-space", type=float, default=None,
                   help="space bandwidth when different from --h")
    _add_kernel_flags(p)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("cv", help="cross-validate the bandwidth")
    p.add_argument("--curves", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--grid-min", type=float, default=None)
    p.add_argument("--grid-max", type=float, default=None)
    p.add_argument("--grid-size", type=int, default=20)
    p.add_argument("--mode", choices=("global", "local"), default="global")
    _add_kernel_flags(p)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("wasserstein",
                       help="distance between two weighted-atom CSV files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--r", type=float, default=1.0, help="Wasserstein order")
    p.add_argument("--config", default=None)
    p.set_defaults(func=_cmd_wasserstein)

    p = sub.add_parser("ingest", help="segment a raw series into pairs")
    p.add_argument("--input", required=True, help="single-column CSV series")
    p.add_argument("--block-len", type=int, required=True)
    p.add_argument("--j", type=int, required=True,
                   help="1-based intra-block response index")
    p.add_argument("--sigma", type=float, default=None,
                   help="optional Gaussian smoothing scale")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("experiment-synthetic",
                       help="Monte Carlo convergence experiment")
    p.add_argument("--process", choices=PROCESSES, default="tvfar1")
    p.add_argument("--T", type=_int_list, required=True,
                   help="comma-separated sample sizes")
    p.add_argument("--u", type=_float_list, default=(0.4,),
                   help="comma-separated rescaled times")
    p.add_argument("--L", type=int, default=100)
    p.add_argument("--mc", type=int, default=10)
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--J", type=int, default=7)
    p.add_argument("--burn-in", type=int, default=50)
    _add_kernel_flags(p)
    _add_bandwidth_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_cmd_experiment_synthetic)

    p = sub.add_parser("experiment-real",
                       help="Gaussian-smoothing experiment on ingested pairs")
    p.add_argument("--curves", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--t-index", type=int, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--L", type=int, default=100)
    p.add_argument("--mc", type=int, default=1)
    _add_kernel_flags(p)
    _add_bandwidth_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_cmd_experiment_real)

    return parser


def _apply_config(argv: list[str]) -> list[str]:
    """Splice `key = value` entries from --config FILE in right after the
    subcommand, so explicit flags still win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        return argv
    path = Path(argv[idx + 1])
    tokens = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line or "=" not in line:
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        flag = "--" + key.lstrip("-")
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                tokens.append(flag)
        else:
            tokens += [flag, value]
    return argv[:1] + tokens + argv[1:]


def dispatch(argv) -> int:
    argv = list(argv)
    try:
        argv = _apply_config(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (LsftsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch(sys.argv[1:]))
