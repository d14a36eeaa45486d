"""Posterior machinery on edge observations.

For a candidate permutation the per-pair edge patterns (both graphs, first
only, second only, neither) are sufficient statistics: the posterior ratio
of two permutations depends only on their counts of both-graph pairs.
The module also provides the ambiguity set of vertices that no pair of
co-occurring edges pins down, permutations that scramble only that set,
and the mismatch-degree statistic used to certify core matchings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRatioError, InputError
from .graphs import Matching, intersection_graph, intersection_under_permutation
from .model import EdgeProb, check_seed


@dataclass(frozen=True)
class PairCounts:
    """Counts of unordered vertex pairs by joint edge pattern."""

    mu11: int
    mu10: int
    mu01: int
    mu00: int

    def __post_init__(self) -> None:
        for name in ("mu11", "mu10", "mu01", "mu00"):
            if getattr(self, name) < 0:
                raise InputError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.mu11 + self.mu10 + self.mu01 + self.mu00


def pair_counts(a: np.ndarray, b: np.ndarray, pi: np.ndarray) -> PairCounts:
    """Count pair patterns of ``(a[i,j], b[pi[i],pi[j]])`` over i < j.

    The counts satisfy the bookkeeping identities tying mu10 and mu01 to
    the edge totals of the two graphs minus mu11.
    """
    n = a.shape[0]
    pi = np.asarray(pi)
    if sorted(pi.tolist()) != list(range(n)):
        raise InputError("pi must be a permutation of 0..n-1")
    b_mapped = b[np.ix_(pi, pi)]
    iu = np.triu_indices(n, k=1)
    a_up = a[iu].astype(bool)
    b_up = b_mapped[iu].astype(bool)
    mu11 = int(np.count_nonzero(a_up & b_up))
    edges_a = int(np.count_nonzero(a_up))
    edges_b = int(np.count_nonzero(b_up))
    mu10 = edges_a - mu11
    mu01 = edges_b - mu11
    mu00 = n * (n - 1) // 2 - mu11 - mu10 - mu01
    return PairCounts(mu11=mu11, mu10=mu10, mu01=mu01, mu00=mu00)


def log_posterior_ratio(counts1: PairCounts, counts2: PairCounts, p: EdgeProb) -> float:
    """Log of the posterior ratio of two permutations given the graphs.

    Equals ``(mu11_1 - mu11_2) * log(p00*p11 / (p10*p01))``: all other
    count terms cancel through the bookkeeping identities, so only the
    both-graph counts matter.  Requires every component of ``p`` to be
    positive; degenerate components make the ratio ill-defined and callers
    must special-case those deterministic regimes.
    """
    for name, value in zip(("p11", "p10", "p01", "p00"), p.as_tuple()):
        if value <= 0.0:
            raise DegenerateRatioError(
                f"posterior ratio undefined: {name}={value}; all four edge "
                "probabilities must be positive"
            )
    log_odds = math.log(p.p00 * p.p11 / (p.p10 * p.p01))
    return (counts1.mu11 - counts2.mu11) * log_odds


def h_set(a: np.ndarray, b: np.ndarray, pi: np.ndarray) -> frozenset[int]:
    """Vertices with no co-occurring edge under ``pi``.

    These are exactly the isolated vertices of the intersection graph
    under ``pi``; permuting them among themselves never lowers the
    both-graph pair count, which is what makes them ambiguous.
    """
    inter = intersection_under_permutation(a, b, np.asarray(pi))
    deg = inter.sum(axis=1)
    return frozenset(int(v) for v in np.flatnonzero(deg == 0))


def sample_t_star(pi_star: np.ndarray, h_star: frozenset[int], seed: int) -> np.ndarray:
    """Draw a permutation agreeing with the truth off the ambiguity set.

    On ``h_star`` the result composes the truth with a uniformly random
    permutation of ``h_star`` (named "scramble" here; it is unrelated to
    the feature correlation).
    """
    check_seed(seed)
    pi_star = np.asarray(pi_star)
    members = np.asarray(sorted(h_star), dtype=np.int64)
    pi = pi_star.copy()
    if members.size > 1:
        rng = np.random.default_rng(seed)
        scramble = rng.permutation(members.size)
        pi[members] = pi_star[members[scramble]]
    return pi


def mismatch_degree_sum(
    a: np.ndarray, b: np.ndarray, m: Matching, pi_star: np.ndarray
) -> int:
    """Total intersection-graph degree over mismatched domain vertices."""
    inter = intersection_graph(a, b, m)
    deg = inter.degrees()
    pi_star = np.asarray(pi_star)
    total = 0
    for local, (i, j) in enumerate(m.pairs):
        if j != int(pi_star[i]):
            total += int(deg[local])
    return total


def is_weak_kcore(f_value: int, k: int, mismatches: int) -> bool:
    """Mismatch-degree criterion: total degree >= k times mismatch count."""
    if f_value < 0 or k < 0 or mismatches < 0:
        raise InputError("f_value, k and mismatches must be non-negative")
    return f_value >= k * mismatches


def is_pi_star_maximal(m: Matching, pi_star: np.ndarray, n: int) -> bool:
    """True iff no vertex could be trivially added relative to the truth:
    every i is in the domain or its true image is already used."""
    pi_star = np.asarray(pi_star)
    domain = set(m.domain())
    image = set(m.image())
    return all(i in domain or int(pi_star[i]) in image for i in range(n))
