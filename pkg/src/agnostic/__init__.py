"""Agnostic estimation of mean, covariance and operator norm under adversarial corruption."""

from .baselines import (
    WeiszfeldState,
    coordinate_median,
    geometric_median,
    sample_covariance,
    sample_mean,
)
from .contamination import (
    AxisPair,
    BernoulliProduct,
    Composite,
    Gaussian,
    GaussianTVSwap,
    GeomMedianKiller,
    PointMass,
    StudentT,
    ThreePointTail,
    TwoPoint,
    UniformBall,
    geom_median_instance,
    sample_contaminated,
    tv_swap_means,
)
from .core import (
    AgnosticError,
    ConfigError,
    Dataset,
    EmptyInput,
    EstimationError,
    EstimatorConfig,
    GroundTruth,
    InsufficientSamples,
    LabeledDataset,
    Mode,
    MomentProfile,
    OpNormConfig,
    split_dataset,
    validate_config,
)
from .covariance import (
    CovEstimate,
    DimensionCap,
    agnostic_covariance,
    agnostic_svd,
    flatten_outer,
    symmetrize_pairs,
    unflatten,
)
from .mean import DegradedRegime, MeanEstimate, agnostic_mean, refine_mean_gaussian
from .opnorm import EmptySurvivorSet, OpNormResult, StalledProgress, Termination, agnostic_opnorm
from .outliers import (
    RemovalKind,
    RemovalResult,
    outlier_damping,
    outlier_truncation,
    robust_center,
    safe_outlier_truncation,
)
from .scalar import (
    median1d,
    shortest_interval_mean,
    trace_estimate,
    var1d_gaussian,
    var1d_general,
)
from .spectral import (
    ConvergenceFailure,
    SingularMatrix,
    SubspaceSplit,
    ZeroWeightMass,
    best_rank_k,
    eigensystem,
    inverse_sqrt,
    split_top_bottom,
    weighted_covariance,
)

__version__ = "0.1.0"
