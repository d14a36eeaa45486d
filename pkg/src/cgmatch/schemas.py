"""Pydantic wire models shared by the HTTP service, the CLI, and file I/O.

Everything user-facing is 1-based; the core package is 0-based.  All
documents carry ``schema_version: 1``.  Graph pairs serialize with
adjacency lists (each vertex's sorted neighbor list) and features as row
arrays; the ground-truth permutation is optional so fixtures can ship
with or without it.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InputError, ParameterError
from .experiments import (
    ALL_METRICS,
    K_RULE_AUTO,
    ExperimentRecord,
    SweepConfig,
    expand_grid,
)
from .matching import BRUTE_FORCE_DEFAULT_LIMIT, MODE_ORACLE
from .model import EdgeProb, GraphPairSample, ModelParams
from .thresholds import FINITE_N_NOTE, RegimeReport


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid")


class EdgeProbDoc(_Doc):
    p11: float
    p10: float
    p01: float
    p00: float

    def to_core(self) -> EdgeProb:
        return EdgeProb(p11=self.p11, p10=self.p10, p01=self.p01, p00=self.p00)

    @classmethod
    def from_core(cls, p: EdgeProb) -> "EdgeProbDoc":
        return cls(p11=p.p11, p10=p.p10, p01=p.p01, p00=p.p00)


class SampleDoc(_Doc):
    """JSON container for one graph pair draw (1-based labels)."""

    schema_version: Literal[1] = 1
    n: int
    d: int
    rho: float | None = None
    p: EdgeProbDoc | None = None
    adjacency_a: list[list[int]]
    adjacency_b: list[list[int]]
    features_x: list[list[float]]
    features_y: list[list[float]]
    pi_star: list[int] | None = None

    @classmethod
    def from_sample(cls, sample: GraphPairSample, include_pi_star: bool = True) -> "SampleDoc":
        def neighbor_lists(adj: np.ndarray) -> list[list[int]]:
            return [sorted(int(j) + 1 for j in np.flatnonzero(row)) for row in adj]

        params = sample.params
        return cls(
            n=sample.n,
            d=sample.d,
            rho=params.rho if params else None,
            p=EdgeProbDoc.from_core(params.p) if params else None,
            adjacency_a=neighbor_lists(sample.a),
            adjacency_b=neighbor_lists(sample.b),
            features_x=[list(map(float, row)) for row in sample.x],
            features_y=[list(map(float, row)) for row in sample.y],
            pi_star=(
                [int(v) + 1 for v in sample.pi_star]
                if include_pi_star and sample.pi_star is not None
                else None
            ),
        )

    def to_sample(self) -> GraphPairSample:
        n, d = self.n, self.d
        if len(self.adjacency_a) != n or len(self.adjacency_b) != n:
            raise InputError("adjacency lists must have one entry per vertex")
        if len(self.features_x) != n or len(self.features_y) != n:
            raise InputError("feature matrices must have one row per vertex")

        def to_matrix(lists: list[list[int]], name: str) -> np.ndarray:
            adj = np.zeros((n, n), dtype=np.uint8)
            for i, neighbors in enumerate(lists):
                for label in neighbors:
                    if not 1 <= label <= n:
                        raise InputError(f"{name}: neighbor {label} of vertex {i + 1} "
                                         f"out of range 1..{n}")
                    if label == i + 1:
                        raise InputError(f"{name}: vertex {label} lists itself")
                    adj[i, label - 1] = 1
            if np.any(adj != adj.T):
                raise InputError(f"{name}: adjacency lists are not symmetric")
            return adj

        def to_features(rows: list[list[float]], name: str) -> np.ndarray:
            mat = np.asarray(rows, dtype=np.float64).reshape(n, d)
            if mat.size and not np.all(np.isfinite(mat)):
                raise InputError(f"{name}: features must be finite")
            return mat

        pi = None
        if self.pi_star is not None:
            pi = np.asarray([v - 1 for v in self.pi_star], dtype=np.int64)
        params = None
        if self.p is not None and self.rho is not None:
            params = ModelParams(n=n, p=self.p.to_core(), d=d, rho=self.rho)
        return GraphPairSample(
            a=to_matrix(self.adjacency_a, "adjacency_a"),
            b=to_matrix(self.adjacency_b, "adjacency_b"),
            x=to_features(self.features_x, "features_x"),
            y=to_features(self.features_y, "features_y"),
            pi_star=pi,
            params=params,
        )


class GenerateRequest(_Doc):
    schema_version: Literal[1] = 1
    n: int
    d: int = 0
    rho: float = 0.0
    seed: int = 0
    p11: float | None = None
    p10: float | None = None
    p01: float | None = None
    p00: float | None = None
    subsample_p: float | None = None
    subsample_s: float | None = None
    include_pi_star: bool = True

    def to_params(self) -> ModelParams:
        explicit = [v is not None for v in (self.p11, self.p10, self.p01, self.p00)]
        if self.subsample_p is not None or self.subsample_s is not None:
            if any(explicit):
                raise ParameterError("give either explicit edge probabilities or a "
                                     "subsampling pair, not both")
            if self.subsample_p is None or self.subsample_s is None:
                raise ParameterError("subsampling needs both subsample_p and subsample_s")
            from .thresholds import subsampling_probs

            p = subsampling_probs(self.subsample_p, self.subsample_s)
        elif all(explicit):
            p = EdgeProb(p11=self.p11, p10=self.p10, p01=self.p01, p00=self.p00)
        else:
            raise ParameterError("edge probabilities incomplete: give all of "
                                 "p11,p10,p01,p00 or a subsampling pair")
        return ModelParams(n=self.n, p=p, d=self.d, rho=self.rho)


class MatchRequest(_Doc):
    schema_version: Literal[1] = 1
    sample: SampleDoc
    k: int | Literal["auto"] = "auto"
    mode: Literal["brute", "oracle"] = MODE_ORACLE
    brute_force_limit: int = BRUTE_FORCE_DEFAULT_LIMIT


class MatchResponse(_Doc):
    schema_version: Literal[1] = 1
    n: int
    k: int
    mode: str
    pi_hat: list[int]
    provenance: list[Literal["kcore", "feature"]]


class RegimeRequest(_Doc):
    schema_version: Literal[1] = 1
    n: int
    d: int = 0
    rho: float = 0.0
    eps: float = Field(default=0.1, gt=0)
    np11: float | None = None
    p11: float | None = None
    p10: float | None = None
    p01: float | None = None
    p00: float | None = None
    subsample_p: float | None = None
    subsample_s: float | None = None
    sparsity_constant: float = 1.0
    corollary_margin: float = 0.0
    check_sparsity: bool = True

    def to_params(self) -> ModelParams:
        from .thresholds import subsampling_probs

        if self.subsample_p is not None and self.subsample_s is not None:
            p = subsampling_probs(self.subsample_p, self.subsample_s)
        elif self.np11 is not None:
            p11 = self.np11 / self.n
            if not 0.0 <= p11 <= 1.0:
                raise ParameterError(f"np11={self.np11} is not a probability times n={self.n}")
            p = EdgeProb(p11=p11, p10=0.0, p01=0.0, p00=1.0 - p11)
        elif self.p11 is not None:
            p10 = self.p10 or 0.0
            p01 = self.p01 or 0.0
            p00 = self.p00 if self.p00 is not None else 1.0 - self.p11 - p10 - p01
            p = EdgeProb(p11=self.p11, p10=p10, p01=p01, p00=p00)
        else:
            raise ParameterError("give np11, p11 (optionally with p10/p01/p00), or a "
                                 "subsampling pair")
        return ModelParams(n=self.n, p=p, d=self.d, rho=self.rho)


class RegimeResponse(_Doc):
    schema_version: Literal[1] = 1
    n: int
    d: int
    rho: float
    eps: float
    p: EdgeProbDoc
    info_sum: float | None
    log_n: float
    achievable: bool
    impossible: bool
    corollary_impossible: bool
    sparsity_ok: bool | None
    positive_corr: bool
    notes: list[str]

    @classmethod
    def from_report(
        cls, params: ModelParams, eps: float, report: RegimeReport
    ) -> "RegimeResponse":
        notes = [FINITE_N_NOTE]
        info: float | None = report.info_sum
        if info == float("inf"):
            info = None
            notes.append("info_sum is infinite (rho=1 with d>=1); reported as null")
        return cls(
            n=params.n,
            d=params.d,
            rho=params.rho,
            eps=eps,
            p=EdgeProbDoc.from_core(params.p),
            info_sum=info,
            log_n=report.log_n,
            achievable=report.achievable,
            impossible=report.impossible,
            corollary_impossible=report.corollary_impossible,
            sparsity_ok=report.sparsity_ok,
            positive_corr=report.positive_corr,
            notes=notes,
        )


class CellDoc(_Doc):
    n: int
    p11: float
    p10: float
    p01: float
    p00: float
    d: int = 0
    rho: float = 0.0

    def to_params(self) -> ModelParams:
        return ModelParams(
            n=self.n,
            p=EdgeProb(p11=self.p11, p10=self.p10, p01=self.p01, p00=self.p00),
            d=self.d,
            rho=self.rho,
        )

    @classmethod
    def from_params(cls, params: ModelParams) -> "CellDoc":
        return cls(
            n=params.n,
            p11=params.p.p11,
            p10=params.p.p10,
            p01=params.p.p01,
            p00=params.p.p00,
            d=params.d,
            rho=params.rho,
        )


class GridDoc(_Doc):
    """Compact grid: edge density as multiples of log(n)/n via subsampling,
    feature dimension as multiples of the feature-only critical dimension."""

    n: list[int]
    np11_log_factors: list[float]
    s: float = 1.0
    rho: list[float] = [0.0]
    d_dstar_factors: list[float] = [0.0]


class SweepRequest(_Doc):
    schema_version: Literal[1] = 1
    trials: int
    seed: int = 0
    mode: Literal["brute", "oracle"] = MODE_ORACLE
    k_rule: int | Literal["auto"] = K_RULE_AUTO
    metrics: list[str] | None = None
    brute_force_limit: int = BRUTE_FORCE_DEFAULT_LIMIT
    cells: list[CellDoc] | None = None
    grid: GridDoc | None = None
    include_timing: bool = False

    @model_validator(mode="after")
    def _one_grid_form(self) -> "SweepRequest":
        if (self.cells is None) == (self.grid is None):
            raise ValueError("give exactly one of 'cells' or 'grid'")
        return self

    def to_config(self) -> SweepConfig:
        if self.cells is not None:
            grid = tuple(cell.to_params() for cell in self.cells)
        else:
            assert self.grid is not None
            grid = expand_grid(
                n_values=self.grid.n,
                np11_log_factors=self.grid.np11_log_factors,
                s=self.grid.s,
                rho_values=self.grid.rho,
                d_dstar_factors=self.grid.d_dstar_factors,
            )
        metrics = ALL_METRICS if self.metrics is None else frozenset(self.metrics)
        return SweepConfig(
            grid=grid,
            trials=self.trials,
            seed=self.seed,
            mode=self.mode,
            k_rule=self.k_rule,
            metrics=metrics,
            brute_force_limit=self.brute_force_limit,
        )


class RecordDoc(_Doc):
    cell: CellDoc
    k: int
    mode: str
    trials: int
    successes: int
    success_rate: float
    mean_kcore_size: float | None
    mean_h_star: float | None
    mean_low_degree_k1: float | None
    mean_leftover: float | None
    j_le_3l_rate: float | None
    wall_ms: float | None

    @classmethod
    def from_record(cls, record: ExperimentRecord, include_timing: bool) -> "RecordDoc":
        return cls(
            cell=CellDoc.from_params(record.params),
            k=record.k,
            mode=record.mode,
            trials=record.trials,
            successes=record.successes,
            success_rate=record.success_rate,
            mean_kcore_size=record.mean_kcore_size,
            mean_h_star=record.mean_h_star,
            mean_low_degree_k1=record.mean_low_degree_k1,
            mean_leftover=record.mean_leftover,
            j_le_3l_rate=record.j_le_3l_rate,
            wall_ms=record.wall_ms if include_timing else None,
        )


class SweepResponse(_Doc):
    schema_version: Literal[1] = 1
    records: list[RecordDoc]


class VerifyRequest(_Doc):
    schema_version: Literal[1] = 1
    seed: int = 0
    posterior_instances: int = 200
    mu_instances: int = 50
    mu_samples_per_instance: int = 20
    mu_n: int = 50


class CheckDoc(_Doc):
    name: str
    trials: int
    violations: int
    max_abs_error: float | None
    passed: bool


class VerifyResponse(_Doc):
    schema_version: Literal[1] = 1
    checks: list[CheckDoc]
    passed: bool


class ErrorDoc(_Doc):
    code: str
    message: str
    exit_code: int
