"""Self-check property suites exposed through the `verify` entry point.

Two families of randomized checks over freshly sampled instances:

* scramble monotonicity: permutations that agree with the truth outside
  the ambiguity set never decrease the both-graph pair count;
* posterior consistency: the closed-form log posterior ratio equals the
  difference of directly accumulated per-pair log-likelihoods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .likelihood import h_set, log_posterior_ratio, pair_counts, sample_t_star
from .model import EdgeProb, ModelParams, sample_pair

POSTERIOR_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    trials: int
    violations: int
    max_abs_error: float | None = None

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _random_edge_prob(rng: np.random.Generator, low: float = 0.05, high: float = 0.85) -> EdgeProb:
    """Random edge-probability vector with every component in [low, high]."""
    while True:
        raw = rng.uniform(low, high, size=4)
        vec = raw / raw.sum()
        if np.all(vec >= low) and np.all(vec <= high):
            return EdgeProb(*(float(v) for v in vec))


def _sub_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63))


def verify_mu11_monotonicity(
    seed: int,
    instances: int = 50,
    n: int = 50,
    samples_per_instance: int = 20,
) -> CheckResult:
    """Count violations of the scramble monotonicity property."""
    rng = np.random.default_rng(seed)
    trials = 0
    violations = 0
    for _ in range(instances):
        p = _random_edge_prob(rng)
        params = ModelParams(n=n, p=p, d=0, rho=0.0)
        sample = sample_pair(params, _sub_seed(rng))
        pi_star = sample.pi_star
        assert pi_star is not None
        ambiguous = h_set(sample.a, sample.b, pi_star)
        base = pair_counts(sample.a, sample.b, pi_star).mu11
        for _ in range(samples_per_instance):
            pi = sample_t_star(pi_star, ambiguous, _sub_seed(rng))
            trials += 1
            if pair_counts(sample.a, sample.b, pi).mu11 < base:
                violations += 1
    return CheckResult(name="mu11_scramble_monotonicity", trials=trials, violations=violations)


def direct_log_likelihood(a: np.ndarray, b: np.ndarray, pi: np.ndarray, p: EdgeProb) -> float:
    """Log-likelihood of the edge observations under ``pi`` accumulated
    pair by pair; the independent oracle for the closed-form ratio."""
    n = a.shape[0]
    pi = np.asarray(pi)
    b_mapped = b[np.ix_(pi, pi)]
    iu = np.triu_indices(n, k=1)
    a_up = a[iu].astype(np.int64)
    b_up = b_mapped[iu].astype(np.int64)
    table = np.log(
        np.array([[p.p00, p.p01], [p.p10, p.p11]], dtype=np.float64)
    )
    return float(table[a_up, b_up].sum())


def verify_posterior_consistency(
    seed: int,
    instances: int = 200,
    max_n: int = 6,
    tol: float = POSTERIOR_TOL,
) -> CheckResult:
    """Compare the closed-form ratio against direct likelihood sums."""
    rng = np.random.default_rng(seed)
    violations = 0
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, max_n + 1))
        p = _random_edge_prob(rng)
        params = ModelParams(n=n, p=p, d=0, rho=0.0)
        sample = sample_pair(params, _sub_seed(rng))
        pi1 = rng.permutation(n)
        pi2 = rng.permutation(n)
        direct = direct_log_likelihood(sample.a, sample.b, pi1, p) - direct_log_likelihood(
            sample.a, sample.b, pi2, p
        )
        closed = log_posterior_ratio(
            pair_counts(sample.a, sample.b, pi1),
            pair_counts(sample.a, sample.b, pi2),
            p,
        )
        err = abs(direct - closed)
        worst = max(worst, err)
        if err > tol:
            violations += 1
    return CheckResult(
        name="posterior_ratio_consistency",
        trials=instances,
        violations=violations,
        max_abs_error=worst,
    )


def run_verification(
    seed: int,
    posterior_instances: int = 200,
    mu_instances: int = 50,
    mu_samples_per_instance: int = 20,
    mu_n: int = 50,
) -> list[CheckResult]:
    return [
        verify_mu11_monotonicity(
            seed, instances=mu_instances, n=mu_n, samples_per_instance=mu_samples_per_instance
        ),
        verify_posterior_consistency(seed + 1, instances=posterior_instances),
    ]
