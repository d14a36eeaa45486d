"""Monte Carlo harness: per-cell trial loops, sweeps over parameter grids,
and a flat CSV output.

Reproducibility contract: every number emitted is a pure function of the
sweep configuration and master seed.  Per-trial seeds are derived by
hashing the master seed together with the cell's parameters and the trial
index, so reordering the grid cannot change any cell's results.  Wall-time
is measured and kept on the records but excluded from the CSV by default
precisely to keep re-runs byte-identical.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ParameterError
from .graphs import Matching, intersection_under_permutation, kcore_peel, whole_graph
from .matching import (
    BRUTE_FORCE_DEFAULT_LIMIT,
    MODE_BRUTE,
    MODE_ORACLE,
    choose_k,
    complete_with_features,
    kcore_estimator_bruteforce,
)
from .model import ModelParams, sample_pair

K_RULE_AUTO = "auto"

METRIC_SUCCESS = "exact_success"
METRIC_KCORE = "kcore_size"
METRIC_H_STAR = "h_star_size"
METRIC_LOW_DEGREE = "low_degree_sizes"
METRIC_J_VS_3L = "j_vs_3L"
ALL_METRICS = frozenset(
    {METRIC_SUCCESS, METRIC_KCORE, METRIC_H_STAR, METRIC_LOW_DEGREE, METRIC_J_VS_3L}
)

CSV_COLUMNS = (
    "n", "p11", "p10", "p01", "p00", "d", "rho", "k", "mode", "trials",
    "successes", "success_rate", "mean_kcore_size", "mean_h_star",
    "mean_L_k1", "mean_J_k", "j_le_3L_rate", "wall_ms",
)


@dataclass(frozen=True)
class SweepConfig:
    """A grid of model parameter points sharing trial count and options."""

    grid: tuple[ModelParams, ...]
    trials: int
    seed: int
    mode: str = MODE_ORACLE
    k_rule: int | str = K_RULE_AUTO
    metrics: frozenset[str] = ALL_METRICS
    brute_force_limit: int = BRUTE_FORCE_DEFAULT_LIMIT

    def __post_init__(self) -> None:
        if not self.grid:
            raise ConfigurationError("sweep grid must be nonempty")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if self.mode not in (MODE_BRUTE, MODE_ORACLE):
            raise ConfigurationError(f"unknown mode {self.mode!r}")
        if self.k_rule != K_RULE_AUTO and (int(self.k_rule) != self.k_rule or self.k_rule < 1):
            raise ConfigurationError(f"k_rule must be 'auto' or a positive integer, got {self.k_rule!r}")
        unknown = set(self.metrics) - ALL_METRICS
        if unknown:
            raise ConfigurationError(f"unknown metrics {sorted(unknown)}")


@dataclass(frozen=True)
class ExperimentRecord:
    """Aggregated results of one Monte Carlo cell."""

    params: ModelParams
    k: int
    mode: str
    trials: int
    successes: int
    mean_kcore_size: float | None
    mean_h_star: float | None
    mean_low_degree_k1: float | None
    mean_leftover: float | None
    j_le_3l_rate: float | None
    wall_ms: float

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials


def derive_trial_seed(master_seed: int, params: ModelParams, trial: int) -> int:
    """Deterministic 64-bit seed from (master seed, cell content, trial).

    Hashing the cell's parameters rather than its grid position makes
    per-cell results invariant under grid reordering.
    """
    key = json.dumps(
        {
            "master": int(master_seed),
            "n": params.n,
            "p": [repr(v) for v in params.p.as_tuple()],
            "d": params.d,
            "rho": repr(params.rho),
            "trial": int(trial),
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def resolve_k(params: ModelParams, k_rule: int | str) -> int:
    if k_rule == K_RULE_AUTO:
        try:
            return choose_k(params.n, params.p.p11)
        except ParameterError as exc:
            raise ConfigurationError(f"cannot auto-select k: {exc}") from exc
    return int(k_rule)


def _validate_cell(params: ModelParams, mode: str, brute_force_limit: int) -> None:
    if mode == MODE_BRUTE and params.n > brute_force_limit:
        raise ConfigurationError(
            f"brute-force mode is limited to n <= {brute_force_limit}, cell has n={params.n}"
        )
    if params.p.p11 == 0.0 and params.d == 0:
        raise ConfigurationError(
            "cell carries no information: p11=0 leaves the core matching empty "
            "and d=0 leaves nothing to complete with"
        )


def run_cell(
    params: ModelParams,
    trials: int,
    cfg: SweepConfig,
    master_seed: int,
) -> ExperimentRecord:
    """Run one Monte Carlo cell and aggregate its statistics.

    Per trial: draw a sample, run the configured core estimator, complete
    with features when leftovers exist and features are available, and
    record exact recovery (the full bijection equals the hidden truth)
    plus the requested set statistics.  All set statistics are read off
    the same intersection-graph instance.
    """
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    _validate_cell(params, cfg.mode, cfg.brute_force_limit)
    k = resolve_k(params, cfg.k_rule)
    metrics = cfg.metrics

    n = params.n
    successes = 0
    kcore_sizes: list[int] = []
    h_star_sizes: list[int] = []
    low_degree_sizes: list[int] = []
    leftover_sizes: list[int] = []
    j_le_3l_hits = 0

    started = time.perf_counter()
    for trial in range(trials):
        seed = derive_trial_seed(master_seed, params, trial)
        sample = sample_pair(params, seed)
        pi_star = sample.pi_star
        assert pi_star is not None
        inter = intersection_under_permutation(sample.a, sample.b, pi_star)
        inter_graph = whole_graph(inter)

        if cfg.mode == MODE_ORACLE:
            core = kcore_peel(inter_graph, k)
            partial = Matching(tuple(sorted((i, int(pi_star[i])) for i in core)))
        else:
            partial = kcore_estimator_bruteforce(sample.a, sample.b, k, cfg.brute_force_limit)

        leftover = n - partial.size
        kcore_sizes.append(partial.size)
        leftover_sizes.append(leftover)

        if METRIC_H_STAR in metrics:
            degrees = inter.sum(axis=1)
            h_star_sizes.append(int(np.count_nonzero(degrees == 0)))
        if METRIC_LOW_DEGREE in metrics or METRIC_J_VS_3L in metrics:
            degrees = inter.sum(axis=1)
            low_k1 = int(np.count_nonzero(degrees <= k + 1))
            low_degree_sizes.append(low_k1)
            if leftover <= 3 * low_k1:
                j_le_3l_hits += 1

        if METRIC_SUCCESS in metrics:
            if leftover == 0:
                pi_hat = np.asarray([partial.as_dict()[i] for i in range(n)])
                success = bool(np.array_equal(pi_hat, pi_star))
            elif params.d >= 1:
                estimate = complete_with_features(sample, partial)
                success = bool(np.array_equal(estimate.as_array(), pi_star))
            else:
                success = False
            successes += int(success)
    wall_ms = (time.perf_counter() - started) * 1000.0

    def _mean(values: list[int], wanted: bool) -> float | None:
        return float(np.mean(values)) if wanted and values else None

    return ExperimentRecord(
        params=params,
        k=k,
        mode=cfg.mode,
        trials=trials,
        successes=successes,
        mean_kcore_size=_mean(kcore_sizes, METRIC_KCORE in metrics),
        mean_h_star=_mean(h_star_sizes, METRIC_H_STAR in metrics),
        mean_low_degree_k1=_mean(low_degree_sizes, METRIC_LOW_DEGREE in metrics),
        mean_leftover=_mean(leftover_sizes, METRIC_KCORE in metrics),
        j_le_3l_rate=(j_le_3l_hits / trials) if METRIC_J_VS_3L in metrics else None,
        wall_ms=wall_ms,
    )


def _run_cell_task(args: tuple[ModelParams, SweepConfig]) -> ExperimentRecord:
    params, cfg = args
    return run_cell(params, cfg.trials, cfg, cfg.seed)


def run_sweep(cfg: SweepConfig, workers: int = 1) -> list[ExperimentRecord]:
    """Run every cell of the grid; records come back in grid order.

    Cells are independent and may run on a worker pool; trial seeds depend
    only on (master seed, cell parameters, trial index), so scheduling
    cannot change any emitted number.
    """
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")
    for index, params in enumerate(cfg.grid):
        try:
            _validate_cell(params, cfg.mode, cfg.brute_force_limit)
            resolve_k(params, cfg.k_rule)
        except ConfigurationError as exc:
            raise ConfigurationError(
                f"cell {index} (n={params.n}, p11={params.p.p11:g}, d={params.d}, "
                f"rho={params.rho:g}): {exc}"
            ) from exc
    tasks = [(params, cfg) for params in cfg.grid]
    if workers == 1 or len(tasks) == 1:
        return [_run_cell_task(task) for task in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell_task, tasks))


def _format_value(value: float | int | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".6g")


def record_row(record: ExperimentRecord, include_timing: bool = False) -> list[str]:
    p = record.params
    values: list[float | int | str | None] = [
        p.n, p.p.p11, p.p.p10, p.p.p01, p.p.p00, p.d, p.rho,
        record.k, record.mode, record.trials, record.successes,
        record.success_rate, record.mean_kcore_size, record.mean_h_star,
        record.mean_low_degree_k1, record.mean_leftover, record.j_le_3l_rate,
        record.wall_ms if include_timing else None,
    ]
    return [_format_value(v) for v in values]


def emit_csv(
    records: list[ExperimentRecord],
    path: str,
    include_timing: bool = False,
) -> None:
    """Write records as CSV: fixed header, one row per record, LF endings,
    floats at 6 significant digits, empty fields for unrequested metrics.

    ``include_timing`` populates the wall_ms column with measured times and
    therefore breaks byte-for-byte reproducibility of re-runs; it is off by
    default.
    """
    from .ioutil import atomic_write_text

    lines = [",".join(CSV_COLUMNS)]
    for record in records:
        lines.append(",".join(record_row(record, include_timing)))
    atomic_write_text(path, "\n".join(lines) + "\n")


def parse_csv(path: str) -> list[dict[str, float | int | str | None]]:
    """Read an emitted CSV back into one dict per row (None for blanks)."""
    int_fields = {"n", "d", "k", "trials", "successes"}
    rows: list[dict[str, float | int | str | None]] = []
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip().split(",")
        for line in handle:
            parts = line.rstrip("\n").split(",")
            row: dict[str, float | int | str | None] = {}
            for name, text in zip(header, parts):
                if text == "":
                    row[name] = None
                elif name == "mode":
                    row[name] = text
                elif name in int_fields:
                    row[name] = int(text)
                else:
                    row[name] = float(text)
            rows.append(row)
    return rows


def expand_grid(
    n_values: list[int],
    np11_log_factors: list[float],
    s: float,
    rho_values: list[float],
    d_dstar_factors: list[float],
) -> tuple[ModelParams, ...]:
    """Expand a compact grid spec into explicit parameter points.

    Edge density is set through the subsampling construction so that
    ``n * p11`` equals the requested multiple of ``log(n)``; feature
    dimension is the requested multiple of the feature-only critical
    dimension, rounded to the nearest integer.
    """
    from .thresholds import gaussian_threshold_d, subsampling_probs

    cells: list[ModelParams] = []
    for n in n_values:
        for factor in np11_log_factors:
            p11 = factor * math.log(n) / n
            if s <= 0.0 and p11 > 0.0:
                raise ConfigurationError("subsampling rate s must be positive when p11 > 0")
            parent = p11 / (s * s) if p11 > 0.0 else 0.0
            if parent > 1.0:
                raise ConfigurationError(
                    f"requested np11 factor {factor} needs parent edge probability "
                    f"{parent:.4f} > 1 at n={n}"
                )
            p = subsampling_probs(parent, s)
            for rho in rho_values:
                for d_factor in d_dstar_factors:
                    if d_factor == 0.0:
                        d = 0
                    else:
                        if not 0.0 < rho < 1.0:
                            raise ConfigurationError(
                                "d_dstar_factors need rho strictly inside (0, 1)"
                            )
                        d = round(d_factor * gaussian_threshold_d(n, rho))
                    cells.append(ModelParams(n=n, p=p, d=int(d), rho=rho))
    return tuple(cells)
