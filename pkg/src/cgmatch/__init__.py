"""Correlated graph matching with Gaussian node features.

Core surface: sampling (:mod:`cgmatch.model`), graph primitives
(:mod:`cgmatch.graphs`), estimators (:mod:`cgmatch.matching`), posterior
statistics (:mod:`cgmatch.likelihood`), threshold evaluators
(:mod:`cgmatch.thresholds`), and the Monte Carlo harness
(:mod:`cgmatch.experiments`).  The HTTP facade lives in
:mod:`cgmatch.service` and the CLI in :mod:`cgmatch.cli`.
"""

__version__ = "0.1.0"

from .model import EdgeProb, GraphPairSample, ModelParams, sample_gaussian_only, sample_pair
from .graphs import IntersectionGraph, Matching
from .matching import (
    KCoreConfig,
    PermutationEstimate,
    choose_k,
    hybrid_match,
    kcore_estimator_bruteforce,
    kcore_oracle,
    map_weights,
    solve_assignment,
)
from .thresholds import (
    RegimeReport,
    gaussian_threshold_d,
    regime_report,
    subsampling_probs,
)
from .experiments import ExperimentRecord, SweepConfig, emit_csv, run_cell, run_sweep

__all__ = [
    "EdgeProb",
    "ExperimentRecord",
    "GraphPairSample",
    "IntersectionGraph",
    "KCoreConfig",
    "Matching",
    "ModelParams",
    "PermutationEstimate",
    "RegimeReport",
    "SweepConfig",
    "__version__",
    "choose_k",
    "emit_csv",
    "gaussian_threshold_d",
    "hybrid_match",
    "kcore_estimator_bruteforce",
    "kcore_oracle",
    "map_weights",
    "regime_report",
    "run_cell",
    "run_sweep",
    "sample_gaussian_only",
    "sample_pair",
    "solve_assignment",
    "subsampling_probs",
]
