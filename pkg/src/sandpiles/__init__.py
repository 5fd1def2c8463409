"""Sandpile groups of random bipartite graphs, exactly and by simulation.

The package computes sandpile groups (critical groups), their p-ranks and
spanning-tree counts with exact integer arithmetic, implements the predicted
truncated-binomial law for the p-rank of sparse bipartite models, and ships a
seeded Monte Carlo harness plus CLI for comparing the two.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .bigraph import (
    BipartiteGraph,
    GraphModelParams,
    connected_components,
    floor_ratio,
    graph_from_json,
    graph_to_json,
    laplacian,
    laplacian_mod_p,
    load_graph,
    reduced_laplacian,
    sample_bipartite,
    sample_bipartite_from_stream,
    save_graph,
)
from .errors import (
    DimensionMismatchError,
    DisconnectedError,
    EmptyConditioningEventError,
    EmptyInputError,
    GuardExceededError,
    InvalidParamsError,
    InvalidShapeError,
    NotPrimeError,
    OutOfRangeError,
    OutOfSupportError,
    SingularBlockError,
    TooSmallError,
)
from .gfp import (
    IndexSet,
    PrimeFieldMatrix,
    corank_mod_p,
    invert_mod_p,
    is_prime,
    rank_mod_p,
    schur_complement,
    submatrix,
)
from .groups import (
    GroupInvariants,
    is_cyclic,
    p_rank,
    sandpile_group,
    spanning_tree_count,
)
from .harness import (
    ComparisonStats,
    ExperimentConfig,
    ExperimentResult,
    SweepResult,
    compare_to_theory,
    run_balanced_scaling,
    run_cyclicity_experiment,
    run_experiment,
    run_mcorank_experiment,
    run_prank_experiment,
    run_qsweep,
    wilson_interval,
    write_result_json,
    write_trials_csv,
)
from .intmat import IntegerMatrix, determinant, normalize_divisor_chain, smith_normal_form
from .reduction import (
    PipelineReport,
    ReducedModelMatrix,
    build_M,
    build_delta1,
    corank_pipeline,
    diag_uniformity_stat,
)
from .rng import SplitMix64, derive_seed, mix64
from .theory import (
    BinomialSpec,
    RankDistribution,
    binom_pmf,
    binom_tail_gt,
    conditional_mean_above,
    dml_estimate,
    expected_excess_exact,
    expected_rank_asymptotic,
    hoeffding_bound,
    min_entropy_rank_bound,
    rank_pmf_theoretical,
)

__all__ = [
    "__version__",
    "BinomialSpec",
    "BipartiteGraph",
    "ComparisonStats",
    "DimensionMismatchError",
    "DisconnectedError",
    "EmptyConditioningEventError",
    "EmptyInputError",
    "ExperimentConfig",
    "ExperimentResult",
    "GraphModelParams",
    "GroupInvariants",
    "GuardExceededError",
    "IndexSet",
    "IntegerMatrix",
    "InvalidParamsError",
    "InvalidShapeError",
    "NotPrimeError",
    "OutOfRangeError",
    "OutOfSupportError",
    "PipelineReport",
    "PrimeFieldMatrix",
    "RankDistribution",
    "ReducedModelMatrix",
    "SingularBlockError",
    "SplitMix64",
    "SweepResult",
    "TooSmallError",
    "binom_pmf",
    "binom_tail_gt",
    "build_M",
    "build_delta1",
    "compare_to_theory",
    "conditional_mean_above",
    "connected_components",
    "corank_mod_p",
    "corank_pipeline",
    "derive_seed",
    "determinant",
    "diag_uniformity_stat",
    "dml_estimate",
    "expected_excess_exact",
    "expected_rank_asymptotic",
    "floor_ratio",
    "graph_from_json",
    "graph_to_json",
    "hoeffding_bound",
    "invert_mod_p",
    "is_cyclic",
    "is_prime",
    "laplacian",
    "laplacian_mod_p",
    "load_graph",
    "min_entropy_rank_bound",
    "mix64",
    "normalize_divisor_chain",
    "p_rank",
    "rank_mod_p",
    "rank_pmf_theoretical",
    "reduced_laplacian",
    "run_balanced_scaling",
    "run_cyclicity_experiment",
    "run_experiment",
    "run_mcorank_experiment",
    "run_prank_experiment",
    "run_qsweep",
    "sample_bipartite",
    "sample_bipartite_from_stream",
    "sandpile_group",
    "save_graph",
    "schur_complement",
    "smith_normal_form",
    "spanning_tree_count",
    "submatrix",
    "wilson_interval",
    "write_result_json",
    "write_trials_csv",
]
