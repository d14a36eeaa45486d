"""Sampling of correlated Gaussian-attributed random graph pairs.

A draw consists of two graphs on ``[n]`` whose edge indicators are coupled
per vertex pair through a probability vector ``(p11, p10, p01, p00)``, plus
per-vertex feature rows that are jointly Gaussian with per-coordinate
correlation ``rho``.  The second graph and its feature rows are relabeled by
a hidden uniform permutation ``pi_star``; recovering it is the whole game.

Determinism contract: a sample is a pure function of ``(params, seed)``.
The generator is NumPy's PCG64 (``numpy.random.default_rng``) and the stream
is consumed in a fixed order: feature matrix X (row-major), then the
independent noise matrix Z (row-major), then one uniform per unordered
vertex pair in lexicographic order, then the permutation draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, ParameterError

SIMPLEX_ATOL = 1e-12

#: Seeds are plain ints in [0, 2**64).
SEED_MAX = 2**64


def check_seed(seed: int) -> int:
    """Validate a 64-bit unsigned seed and return it as a plain int."""
    seed = int(seed)
    if not 0 <= seed < SEED_MAX:
        raise ParameterError(f"seed must be in [0, 2**64), got {seed}")
    return seed


@dataclass(frozen=True)
class EdgeProb:
    """Joint edge-indicator distribution for one unordered vertex pair.

    ``p11`` is the probability the pair is an edge in both graphs, ``p10``
    only in the first, ``p01`` only in the second, ``p00`` in neither.
    """

    p11: float
    p10: float
    p01: float
    p00: float

    def __post_init__(self) -> None:
        vec = (self.p11, self.p10, self.p01, self.p00)
        for name, value in zip(("p11", "p10", "p01", "p00"), vec):
            if not math.isfinite(value) or value < 0.0 or value > 1.0:
                raise ParameterError(f"{name} must be a probability in [0, 1], got {value}")
        total = sum(vec)
        if abs(total - 1.0) > SIMPLEX_ATOL:
            raise ParameterError(f"edge probabilities must sum to 1 (got {total!r})")

    @property
    def p1_any(self) -> float:
        """Marginal edge probability in the first graph (p11 + p10)."""
        return self.p11 + self.p10

    @property
    def any_1(self) -> float:
        """Marginal edge probability in the second graph (p11 + p01)."""
        return self.p11 + self.p01

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p11, self.p10, self.p01, self.p00)


#: Purely feature-based regime: no edges in either graph.
GAUSSIAN_ONLY = EdgeProb(0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class ModelParams:
    """Full specification of one instance family: (n, edge probs, d, rho)."""

    n: int
    p: EdgeProb
    d: int
    rho: float

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        if int(self.d) != self.d or self.d < 0:
            raise ParameterError(f"d must be a non-negative integer, got {self.d}")
        if not (0.0 <= self.rho <= 1.0):
            raise ParameterError(f"rho must be in [0, 1], got {self.rho}")


@dataclass(frozen=True)
class GraphPairSample:
    """One draw from the model.

    ``a`` and ``b`` are dense symmetric 0/1 adjacency matrices with zero
    diagonal; ``x`` and ``y`` are the n-by-d feature matrices of the two
    graphs.  ``pi_star`` is the hidden ground-truth permutation (0-based):
    vertex ``i`` of the first graph corresponds to vertex ``pi_star[i]`` of
    the second, so ``b[pi_star[i], pi_star[j]]`` is the partner of
    ``a[i, j]`` and ``y[pi_star[i]]`` is the feature row correlated with
    ``x[i]``.  Samples loaded from files may omit ``pi_star``.
    """

    a: np.ndarray
    b: np.ndarray
    x: np.ndarray
    y: np.ndarray
    pi_star: np.ndarray | None = None
    params: ModelParams | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        n = self.a.shape[0]
        for name, adj in (("a", self.a), ("b", self.b)):
            if adj.shape != (n, n):
                raise InputError(f"adjacency {name} must be {n}x{n}, got {adj.shape}")
            if adj.dtype != np.uint8:
                raise InputError(f"adjacency {name} must be uint8")
            if np.any(adj != adj.T):
                raise InputError(f"adjacency {name} must be symmetric")
            if np.any(np.diag(adj)):
                raise InputError(f"adjacency {name} must have zero diagonal")
            if np.any(adj > 1):
                raise InputError(f"adjacency {name} must be 0/1")
        if self.x.shape[0] != n or self.y.shape[0] != n or self.x.shape != self.y.shape:
            raise InputError(
                f"feature matrices must both be {n}xd, got {self.x.shape} and {self.y.shape}"
            )
        if self.pi_star is not None:
            perm = np.asarray(self.pi_star)
            if sorted(perm.tolist()) != list(range(n)):
                raise InputError("pi_star must be a permutation of 0..n-1")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    def require_pi_star(self) -> np.ndarray:
        from .errors import ModeError

        if self.pi_star is None:
            raise ModeError("this operation needs the ground-truth permutation, "
                            "which the sample does not carry")
        return self.pi_star


def _square_from_upper(n: int, upper: np.ndarray) -> np.ndarray:
    """Symmetric 0/1 matrix from a flat upper-triangle indicator vector."""
    out = np.zeros((n, n), dtype=np.uint8)
    iu, ju = np.triu_indices(n, k=1)
    out[iu, ju] = upper
    out[ju, iu] = upper
    return out


def sample_pair(params: ModelParams, seed: int) -> GraphPairSample:
    """Draw one correlated graph pair with Gaussian features.

    Per unordered pair, the joint edge indicator is drawn from ``params.p``.
    Features: ``x_i`` i.i.d. standard d-variate normal and the partner row
    ``rho * x_i + sqrt(1 - rho^2) * z_i`` with independent standard normal
    ``z_i``.  A uniform permutation relabels the second graph and its
    feature rows.
    """
    check_seed(seed)
    rng = np.random.default_rng(seed)
    n, d, rho = params.n, params.d, params.rho
    p11, p10, p01, _ = params.p.as_tuple()

    x = rng.standard_normal((n, d))
    z = rng.standard_normal((n, d))
    y_unpermuted = rho * x + math.sqrt(max(0.0, 1.0 - rho * rho)) * z

    m = n * (n - 1) // 2
    u = rng.random(m)
    edge_a = u < p11 + p10
    edge_b = (u < p11) | ((u >= p11 + p10) & (u < p11 + p10 + p01))

    pi_star = rng.permutation(n)

    a = _square_from_upper(n, edge_a)
    b_unpermuted = _square_from_upper(n, edge_b)
    b = np.zeros_like(b_unpermuted)
    b[np.ix_(pi_star, pi_star)] = b_unpermuted
    y = np.empty_like(y_unpermuted)
    y[pi_star] = y_unpermuted

    return GraphPairSample(a=a, b=b, x=x, y=y, pi_star=pi_star, params=params)


def sample_gaussian_only(n: int, d: int, rho: float, seed: int) -> GraphPairSample:
    """Draw a pair with no edges at all: the feature-only regime."""
    params = ModelParams(n=n, p=GAUSSIAN_ONLY, d=d, rho=rho)
    return sample_pair(params, seed)
