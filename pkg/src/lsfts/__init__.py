"""Kernel conditional-distribution estimation for locally stationary
functional time series, with exact 1-D Wasserstein distances."""

__version__ = "0.1.0"

from .bandwidth import (
    BandwidthGrid,
    CandidateScore,
    CVWeightMode,
    cv_profile,
    cv_score,
    default_grid,
    select_bandwidth,
)
from .curves import Curve, FunctionalSample, Grid, integrate, semi_metric_l2
from .errors import (
    AllCandidatesDegenerate,
    AllReplicationsDegenerate,
    DegenerateDraw,
    DegenerateNeighborhood,
    EmptyInput,
    EmptySupport,
    GridMismatch,
    IndexOutOfBlock,
    InvalidOrder,
    LsftsError,
    NonPositiveBandwidth,
    QuantileLevelOutOfRange,
    SampleTooSmall,
    SeriesTooShort,
    SignedWeights,
)
from .estimator import (
    EstimatorConfig,
    NWWeights,
    conditional_cdf,
    conditional_law,
    conditional_mean,
    loo_conditional_mean,
    nw_weights,
)
from .experiments import (
    CVBandwidth,
    ExperimentConfig,
    ExperimentReport,
    FixedBandwidth,
    ReportRow,
    RunResult,
    average_cdfs,
    empirical_cdf,
    monte_carlo,
    real_data_report,
    run_algorithm1,
    run_algorithm2,
)
from .ingest import RawSeries, SegmentedDataset, build_pairs, gaussian_smooth, segment
from .kernels import FAMILIES, KernelSpec, space_kernel, time_kernel
from .simulate import (
    SimConfig,
    basis_matrix,
    draw_innovation,
    draw_operator_tvfar1,
    draw_operators_tvfar2,
    fourier_basis,
    generate_responses,
    simulate_covariates,
    simulate_sample,
    spectral_norm,
    true_mean,
)
from .wasserstein import (
    DiscreteDistribution,
    SignedMeasure,
    cdf_eval,
    from_atoms,
    merge_atoms,
    monotonize,
    quantile,
    signed_from_atoms,
    w1,
    w1_riemann_oracle,
    wr,
)
