"""Estimators: exhaustive and oracle k-core matching, feature-based
assignment, and the two-step hybrid pipeline.

The feature step reduces posterior maximization over bijections to a
maximum-weight assignment on inner products: for jointly Gaussian feature
rows with per-coordinate correlation ``rho`` in (0, 1), the pair
log-density is an affine function of ``<x_i, y_j>`` plus terms in
``|x_i|^2`` and ``|y_j|^2`` alone, and those norm terms sum to the same
value under every bijection.  The assignment solver is exact (shortest
augmenting paths with dual potentials) and breaks ties by returning the
lexicographically smallest optimal assignment vector.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InfeasibleCompletionError, InputError, ParameterError
from .graphs import (
    EMPTY_MATCHING,
    Matching,
    intersection_under_permutation,
    kcore_peel,
    whole_graph,
)
from .model import GraphPairSample

BRUTE_FORCE_DEFAULT_LIMIT = 8
BRUTE_FORCE_HARD_CAP = 12

MODE_BRUTE = "brute"
MODE_ORACLE = "oracle"

PROV_KCORE = "kcore"
PROV_FEATURE = "feature"


@dataclass(frozen=True)
class KCoreConfig:
    """Settings for the edge-information stage of the hybrid estimator."""

    k: int
    mode: str = MODE_ORACLE
    brute_force_limit: int = BRUTE_FORCE_DEFAULT_LIMIT

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if self.mode not in (MODE_BRUTE, MODE_ORACLE):
            raise ParameterError(f"mode must be '{MODE_BRUTE}' or '{MODE_ORACLE}'")
        if not 1 <= self.brute_force_limit <= BRUTE_FORCE_HARD_CAP:
            raise ParameterError(
                f"brute_force_limit must be in [1, {BRUTE_FORCE_HARD_CAP}], "
                f"got {self.brute_force_limit}"
            )


@dataclass(frozen=True)
class PermutationEstimate:
    """A full bijection estimate with a per-vertex provenance tag."""

    pi_hat: tuple[int, ...]
    provenance: tuple[str, ...]

    def __post_init__(self) -> None:
        n = len(self.pi_hat)
        if sorted(self.pi_hat) != list(range(n)):
            raise InputError("pi_hat must be a bijection on 0..n-1")
        if len(self.provenance) != n:
            raise InputError("provenance must tag every vertex")
        for tag in self.provenance:
            if tag not in (PROV_KCORE, PROV_FEATURE):
                raise InputError(f"unknown provenance tag {tag!r}")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.pi_hat, dtype=np.int64)


def choose_k(n: int, p11: float) -> int:
    """Core threshold for the edge stage.

    Returns ``ceil(max(t1, t2))`` with ``t2 = log(n) / (log(log(n)))**2``
    and ``t1 = n*p11 / (log(n*p11))**2`` when ``n*p11 > e`` (the formula has
    a pole at ``n*p11 = e``; below it the other branch dominates and t1 is
    taken as 0).  Always at least 1.
    """
    if int(n) != n or n <= 3:
        raise ParameterError(f"n must be an integer > 3, got {n}")
    if not 0.0 <= p11 <= 1.0:
        raise ParameterError(f"p11 must be in [0, 1], got {p11}")
    np11 = n * p11
    t1 = 0.0
    if np11 > math.e:
        t1 = np11 / math.log(np11) ** 2
    t2 = math.log(n) / math.log(math.log(n)) ** 2
    return max(1, math.ceil(max(t1, t2)))


def map_weights(
    x: np.ndarray,
    y: np.ndarray,
    rows: tuple[int, ...] | list[int] | np.ndarray,
    cols: tuple[int, ...] | list[int] | np.ndarray,
) -> np.ndarray:
    """Assignment weight matrix ``W[i, j] = <x[rows[i]], y[cols[j]]>``.

    Maximizing the total weight over bijections rows -> cols is equivalent
    to maximizing the joint feature likelihood of the pairing (see module
    docstring); the correlation-dependent affine constants are dropped.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if rows.shape != cols.shape:
        raise InputError(f"rows and cols must have equal length, got {rows.size} and {cols.size}")
    if x.ndim != 2 or y.ndim != 2 or x.shape[1] != y.shape[1]:
        raise InputError(f"feature matrices disagree on dimension: {x.shape} vs {y.shape}")
    if rows.size > 0 and x.shape[1] < 1:
        raise InputError("cannot build weights with zero-dimensional features")
    return x[rows] @ y[cols].T


def _shortest_augmenting_paths(cost: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact square min-cost assignment; returns (col_of_row, u, v).

    Dual potentials satisfy ``cost[i, j] - u[i] - v[j] >= 0`` for all pairs
    with equality on assigned pairs, which the caller uses to enumerate the
    full set of optimal assignments.
    """
    n = cost.shape[0]
    u = np.zeros(n, dtype=np.float64)
    v = np.zeros(n + 1, dtype=np.float64)
    row_of_col = np.full(n + 1, -1, dtype=np.int64)  # column n is virtual
    for i in range(n):
        row_of_col[n] = i
        j0 = n
        minv = np.full(n + 1, np.inf)
        way = np.full(n + 1, n, dtype=np.int64)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of_col[j0]
            free = np.flatnonzero(~used[:n])
            cur = cost[i0, free] - u[i0] - v[free]
            better = cur < minv[free]
            upd = free[better]
            minv[upd] = cur[better]
            way[upd] = j0
            pos = np.argmin(minv[free])
            j1 = free[pos]
            delta = minv[j1]
            u[row_of_col[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = int(j1)
            if row_of_col[j0] < 0:
                break
        while j0 != n:
            j1 = int(way[j0])
            row_of_col[j0] = row_of_col[j1]
            j0 = j1
    col_of_row = np.full(n, -1, dtype=np.int64)
    col_of_row[row_of_col[:n]] = np.arange(n)
    return col_of_row, u, v[:n]


def _lex_min_perfect_matching(zero_adj: list[list[int]], col_of_row: np.ndarray) -> np.ndarray:
    """Lexicographically smallest perfect matching of a bipartite graph
    that is known to contain the given perfect matching.

    Rows are frozen in index order onto the smallest column that still
    admits a perfect completion; feasibility of each candidate is decided
    by searching for an augmenting path for the displaced row.
    """
    n = len(zero_adj)
    col_of_row = col_of_row.copy()
    row_of_col = np.full(n, -1, dtype=np.int64)
    row_of_col[col_of_row] = np.arange(n)
    frozen_cols: set[int] = set()

    def try_reroute(start_row: int, banned_col: int, visited: set[int]) -> bool:
        # iterative alternating-path search; tie chains can be long
        stack: list[tuple[int, int]] = [(start_row, 0)]
        path: list[tuple[int, int]] = []  # (row, column it moves to)
        while stack:
            row, offset = stack.pop()
            candidates = zero_adj[row]
            advanced = False
            for pos in range(offset, len(candidates)):
                cand = candidates[pos]
                if cand == banned_col or cand in frozen_cols or cand in visited:
                    continue
                visited.add(cand)
                owner = int(row_of_col[cand])
                path.append((row, cand))
                if owner == -1:
                    for move_row, move_col in path:
                        col_of_row[move_row] = move_col
                        row_of_col[move_col] = move_row
                    return True
                stack.append((row, pos + 1))
                stack.append((owner, 0))
                advanced = True
                break
            if not advanced and path:
                path.pop()
        return False

    for i in range(n):
        current = int(col_of_row[i])
        for j in zero_adj[i]:
            if j >= current:
                break
            if j in frozen_cols:
                continue
            owner = int(row_of_col[j])
            row_of_col[current] = -1  # tentatively free i's column
            if try_reroute(owner, j, {j}):
                col_of_row[i] = j
                row_of_col[j] = i
                current = j
                break
            row_of_col[current] = i
        frozen_cols.add(current)
    return col_of_row


def solve_assignment(w: np.ndarray) -> Matching:
    """Bijection maximizing the total weight, exactly.

    Among all optimal bijections, returns the one whose assignment vector
    ``(sigma(0), sigma(1), ...)`` is lexicographically smallest.  The set of
    optima is recovered from the solver's dual potentials: a pair is usable
    iff its reduced cost is zero.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise InputError(f"weight matrix must be square, got shape {w.shape}")
    if w.size and not np.all(np.isfinite(w)):
        raise InputError("weight matrix must be finite")
    n = w.shape[0]
    if n == 0:
        return EMPTY_MATCHING

    cost = -w
    col_of_row, u, v = _shortest_augmenting_paths(cost)
    reduced = cost - u[:, None] - v[None, :]
    eps = 1e-10 * max(1.0, float(np.abs(w).max()) if w.size else 1.0)
    zero_adj = [np.flatnonzero(reduced[i] <= eps).tolist() for i in range(n)]
    col_of_row = _lex_min_perfect_matching(zero_adj, col_of_row)
    return Matching(tuple((i, int(col_of_row[i])) for i in range(n)))


def assignment_value(w: np.ndarray, m: Matching) -> float:
    """Total weight of a matching under a weight matrix."""
    return float(sum(w[i, j] for i, j in m.pairs))


def kcore_estimator_bruteforce(
    a: np.ndarray,
    b: np.ndarray,
    k: int,
    limit: int = BRUTE_FORCE_DEFAULT_LIMIT,
) -> Matching:
    """Exhaustive maximum-cardinality matching whose intersection graph has
    min degree >= k.

    Enumerates domains in lexicographic order and assignments in
    lexicographic vector order, largest cardinality first, so the first hit
    is the canonical tie-break winner.  Guarded by ``limit`` because the
    search space grows factorially; larger instances should use the
    ground-truth-aided oracle estimator instead.
    """
    n = a.shape[0]
    if n > limit:
        raise CapacityError(
            f"exhaustive search is limited to n <= {limit} (got n={n}); "
            "use the oracle estimator for larger instances"
        )
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")

    a_bool = a.astype(bool)
    b_bool = b.astype(bool)
    deg_b = b_bool.sum(axis=1)
    image_candidates = [j for j in range(n) if deg_b[j] >= k]

    for m_size in range(n, 0, -1):
        if len(image_candidates) < m_size:
            continue
        for domain in itertools.combinations(range(n), m_size):
            sub_a = a_bool[np.ix_(domain, domain)]
            if m_size and sub_a.sum(axis=1).min() < k:
                continue
            assignment = _lex_min_assignment_dfs(sub_a, b_bool, image_candidates, k)
            if assignment is not None:
                return Matching(tuple(zip(domain, assignment)))
    return EMPTY_MATCHING


def _lex_min_assignment_dfs(
    sub_a: np.ndarray,
    b_bool: np.ndarray,
    image_candidates: list[int],
    k: int,
) -> list[int] | None:
    """First (lex-smallest) injective image vector making every domain
    position reach intersection degree >= k, or None.

    Branch-and-bound over positions in order.  ``matched[s]`` counts
    realized intersection edges of position s against the assigned prefix,
    ``pending[s]`` its neighbor positions not yet assigned; a position with
    ``matched + pending < k`` can never recover, pruning the subtree.
    """
    m = sub_a.shape[0]
    neighbors = [np.flatnonzero(sub_a[t]).tolist() for t in range(m)]
    matched = [0] * m
    pending = [len(neighbors[t]) for t in range(m)]
    chosen: list[int] = []
    used: set[int] = set()

    def dfs(t: int) -> bool:
        if t == m:
            return all(val >= k for val in matched)
        earlier = [s for s in neighbors[t] if s < t]
        later = len(neighbors[t]) - len(earlier)
        for image in image_candidates:
            if image in used:
                continue
            gained = [s for s in earlier if b_bool[chosen[s], image]]
            ok = len(gained) + later >= k
            if ok:
                for s in earlier:
                    realized = matched[s] + (1 if s in gained else 0)
                    if realized + pending[s] - 1 < k:
                        ok = False
                        break
            if not ok:
                continue
            chosen.append(image)
            used.add(image)
            matched[t] = len(gained)
            pending[t] = later
            for s in earlier:
                pending[s] -= 1
            for s in gained:
                matched[s] += 1
            if dfs(t + 1):
                return True
            chosen.pop()
            used.discard(image)
            matched[t] = 0
            pending[t] = len(neighbors[t])
            for s in earlier:
                pending[s] += 1
            for s in gained:
                matched[s] -= 1
        return False

    if dfs(0):
        return chosen
    return None


def kcore_oracle(sample: GraphPairSample, k: int) -> Matching:
    """Peel the intersection graph under the true permutation to its k-core
    and return the truth restricted to it.

    This is the simulation surrogate for the exhaustive estimator: on the
    regimes of interest the two coincide with high probability, and the
    surrogate runs in polynomial time.
    """
    pi_star = sample.require_pi_star()
    inter = intersection_under_permutation(sample.a, sample.b, pi_star)
    core = kcore_peel(whole_graph(inter), k)
    return Matching(tuple(sorted((i, int(pi_star[i])) for i in core)))


def _kcore_stage(sample: GraphPairSample, cfg: KCoreConfig) -> Matching:
    if cfg.mode == MODE_BRUTE:
        return kcore_estimator_bruteforce(sample.a, sample.b, cfg.k, cfg.brute_force_limit)
    return kcore_oracle(sample, cfg.k)


def complete_with_features(sample: GraphPairSample, partial: Matching) -> PermutationEstimate:
    """Extend a partial matching to a full bijection using feature weights.

    Leftover domain vertices are assigned to leftover image vertices by the
    exact maximum-weight assignment on feature inner products.
    """
    n = sample.n
    matched = partial.as_dict()
    leftover_rows = sorted(set(range(n)) - set(partial.domain()))
    leftover_cols = sorted(set(range(n)) - set(partial.image()))
    provenance = [PROV_KCORE] * n
    if leftover_rows:
        if sample.d < 1:
            raise InfeasibleCompletionError(
                f"{len(leftover_rows)} vertices remain unmatched and the sample has "
                "no features to match them with (d=0)"
            )
        w = map_weights(sample.x, sample.y, leftover_rows, leftover_cols)
        completion = solve_assignment(w)
        for local_i, local_j in completion.pairs:
            i = leftover_rows[local_i]
            matched[i] = leftover_cols[local_j]
            provenance[i] = PROV_FEATURE
    pi_hat = tuple(matched[i] for i in range(n))
    return PermutationEstimate(pi_hat=pi_hat, provenance=tuple(provenance))


def hybrid_match(sample: GraphPairSample, cfg: KCoreConfig) -> PermutationEstimate:
    """Two-step estimator: k-core matching on edges, feature assignment on
    the rest; always returns a full bijection."""
    partial = _kcore_stage(sample, cfg)
    return complete_with_features(sample, partial)
