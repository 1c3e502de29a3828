"""Bivariate causal direction inference via cluster-based latent instruments.

Given two paired observation vectors, the package decides between
"x causes y", "y causes x", and "a hidden common cause drives both".
Latent instrumental variables are approximated by k-means cluster centers
(from each variable alone and from the joint point cloud), the more
self-consistent candidate pair is selected, and two conditional
independence tests on the instruments yield the verdict. A benchmark
harness scores cause-effect-pair corpora, and seeded generators reproduce
the chain and confounded simulation scenarios.
"""

from .benchmark import (
    BenchmarkReport,
    PairMeta,
    PairResult,
    PAPER_EXCLUDED_IDS,
    load_metadata,
    load_pair,
    run_benchmark,
    write_report_csv,
    write_report_json,
)
from .citest import (
    CiResult,
    chi_square_sf,
    ci_test_cor,
    ci_test_mi,
    conditional_mutual_information,
    discretize_for_mi,
    partial_correlation,
    student_t_two_sided_p,
)
from .clustering import Clustering, assigned_center_coordinate, kmeans
from .core import (
    Config,
    ConfigError,
    DataPair,
    DecisionMode,
    DegenerateData,
    Direction,
    DistanceKind,
    InvalidCpt,
    LatentIvError,
    MultivariatePair,
    NearSingular,
    NonFinite,
    ParseError,
    RngStream,
    TestKind,
    TooFewDistinctPoints,
    TooFewSamples,
    Verdict,
    standardize,
)
from .inference import (
    EnsembleVerdict,
    ensemble_infer,
    forced_choice,
    infer_direction,
    p_difference,
)
from .instruments import InstrumentSet, build_and_select, build_candidates, select_instruments
from .synthetic import (
    ChainCpts,
    ConfoundedCpts,
    ScmParams,
    Scenario,
    Setting,
    SyntheticSample,
    generate,
    generate_chain_continuous,
    generate_chain_discrete,
    generate_confounded_continuous,
    generate_confounded_discrete,
    write_sample,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "Config",
    "ConfigError",
    "DataPair",
    "DecisionMode",
    "DegenerateData",
    "Direction",
    "DistanceKind",
    "InvalidCpt",
    "LatentIvError",
    "MultivariatePair",
    "NearSingular",
    "NonFinite",
    "ParseError",
    "RngStream",
    "TestKind",
    "TooFewDistinctPoints",
    "TooFewSamples",
    "Verdict",
    "standardize",
    # clustering
    "Clustering",
    "kmeans",
    "assigned_center_coordinate",
    # instruments
    "InstrumentSet",
    "build_candidates",
    "select_instruments",
    "build_and_select",
    # citest
    "CiResult",
    "partial_correlation",
    "ci_test_cor",
    "conditional_mutual_information",
    "ci_test_mi",
    "student_t_two_sided_p",
    "chi_square_sf",
    "discretize_for_mi",
    # inference
    "EnsembleVerdict",
    "infer_direction",
    "p_difference",
    "forced_choice",
    "ensemble_infer",
    # synthetic
    "Scenario",
    "Setting",
    "ChainCpts",
    "ConfoundedCpts",
    "ScmParams",
    "SyntheticSample",
    "generate",
    "generate_chain_continuous",
    "generate_confounded_continuous",
    "generate_chain_discrete",
    "generate_confounded_discrete",
    "write_sample",
    # benchmark
    "BenchmarkReport",
    "PairMeta",
    "PairResult",
    "PAPER_EXCLUDED_IDS",
    "load_pair",
    "load_metadata",
    "run_benchmark",
    "write_report_json",
    "write_report_csv",
]
