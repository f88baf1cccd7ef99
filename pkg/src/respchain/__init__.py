"""Markov-chain analysis of questionnaire response sequences.

Estimate first-order transition matrices from ordered Likert responses,
find their stationary distributions with explicit structural checks,
score sequences with log2 likelihood ratios between competing models,
evaluate the resulting classifiers, and simulate synthetic cohorts
reproducibly.
"""

__version__ = "0.1.0"

from .chain import (
    DEFAULT_MAX_POWER,
    DEFAULT_TOLERANCE,
    InertiaSummary,
    ResponseSequence,
    StateSpace,
    StationaryResult,
    TransitionCounts,
    TransitionMatrix,
    count_transitions,
    expected_inertia,
    inertia,
    is_aperiodic,
    is_irreducible,
    matrix_power,
    normalize_rows,
    pool_counts,
    sequence_log2_prob,
    stationary,
)
from .dataio import (
    CONFIG_ENV_VAR,
    CSV_HEADER,
    CohortDataset,
    Config,
    load_cohort,
    load_config,
    write_cohort,
)
from .diagnostics import (
    ConfusionTable,
    DiagnosticMetrics,
    RocCurve,
    confusion,
    metrics,
    roc_curve,
)
from .errors import RespchainError, StructuralError, ValidationError
from .models import (
    TheoreticalModelSpec,
    builtin_models,
    drunkards_walk,
    from_stationary_vector,
    max_entropy,
)
from .scoring import (
    FloorRecord,
    LogRatioMatrix,
    MultiModelVerdict,
    SequenceScore,
    classify_binary,
    classify_multimodel,
    log2_matrix,
    log_likelihood_matrix,
    ratio_matrix,
    score_sequence,
    score_value,
)
from .simulate import SimulationSpec, generate_cohort, generate_sequence, resolve_initial
from .stats import (
    ChiSquareOutcome,
    chi_square_p,
    chi_square_statistic,
    equiprobability_test,
    inertia_association_test,
    standardized_residuals,
    stationary_gof,
)

__all__ = [
    "__version__",
    "CONFIG_ENV_VAR",
    "CSV_HEADER",
    "DEFAULT_MAX_POWER",
    "DEFAULT_TOLERANCE",
    "ChiSquareOutcome",
    "CohortDataset",
    "Config",
    "ConfusionTable",
    "DiagnosticMetrics",
    "FloorRecord",
    "InertiaSummary",
    "LogRatioMatrix",
    "MultiModelVerdict",
    "ResponseSequence",
    "RespchainError",
    "RocCurve",
    "SequenceScore",
    "SimulationSpec",
    "StateSpace",
    "StationaryResult",
    "StructuralError",
    "TheoreticalModelSpec",
    "TransitionCounts",
    "TransitionMatrix",
    "ValidationError",
    "builtin_models",
    "chi_square_p",
    "chi_square_statistic",
    "classify_binary",
    "classify_multimodel",
    "confusion",
    "count_transitions",
    "drunkards_walk",
    "equiprobability_test",
    "expected_inertia",
    "from_stationary_vector",
    "generate_cohort",
    "generate_sequence",
    "inertia",
    "inertia_association_test",
    "is_aperiodic",
    "is_irreducible",
    "load_cohort",
    "load_config",
    "log2_matrix",
    "log_likelihood_matrix",
    "matrix_power",
    "max_entropy",
    "metrics",
    "normalize_rows",
    "pool_counts",
    "ratio_matrix",
    "resolve_initial",
    "roc_curve",
    "score_sequence",
    "score_value",
    "sequence_log2_prob",
    "standardized_residuals",
    "stationary",
    "stationary_gof",
    "write_cohort",
]
