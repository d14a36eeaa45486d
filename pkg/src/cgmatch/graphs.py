"""Graph primitives: matchings, intersection graphs, peeling, degree sets.

Vertices are 0-based everywhere in this package; the CLI and JSON layers
translate to 1-based labels for users.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Matching:
    """A partial injective vertex map, stored as domain-sorted pairs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        domain = [i for i, _ in self.pairs]
        image = [j for _, j in self.pairs]
        if len(set(domain)) != len(domain):
            raise InputError("matching has a repeated domain vertex")
        if len(set(image)) != len(image):
            raise InputError("matching is not injective")
        if domain != sorted(domain):
            object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @classmethod
    def from_dict(cls, mapping: dict[int, int]) -> "Matching":
        return cls(tuple(sorted((int(i), int(j)) for i, j in mapping.items())))

    @classmethod
    def identity(cls, n: int) -> "Matching":
        return cls(tuple((i, i) for i in range(n)))

    @classmethod
    def from_permutation(cls, perm: np.ndarray) -> "Matching":
        return cls(tuple((i, int(perm[i])) for i in range(len(perm))))

    @property
    def size(self) -> int:
        return len(self.pairs)

    def domain(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.pairs)

    def image(self) -> tuple[int, ...]:
        return tuple(j for _, j in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


EMPTY_MATCHING = Matching(())


@dataclass(frozen=True)
class IntersectionGraph:
    """A graph on a subset of original vertex ids with a dense adjacency.

    For an intersection of two graphs under a matching, ``vertices`` is the
    matching's domain and ``adj[u, v]`` says the pair is an edge in the
    first graph and its mapped pair is an edge in the second.
    """

    vertices: tuple[int, ...]
    adj: np.ndarray

    def __post_init__(self) -> None:
        k = len(self.vertices)
        if self.adj.shape != (k, k):
            raise InputError(f"adjacency must be {k}x{k}, got {self.adj.shape}")

    @property
    def size(self) -> int:
        return len(self.vertices)

    def degrees(self) -> np.ndarray:
        if self.size == 0:
            return np.zeros(0, dtype=np.int64)
        return self.adj.sum(axis=1, dtype=np.int64)


def whole_graph(adj: np.ndarray) -> IntersectionGraph:
    """Wrap a plain n-by-n adjacency as a graph on vertex set 0..n-1."""
    adj = np.asarray(adj, dtype=np.uint8)
    return IntersectionGraph(vertices=tuple(range(adj.shape[0])), adj=adj)


def _check_indices(n: int, ids: tuple[int, ...], what: str) -> None:
    for v in ids:
        if not 0 <= v < n:
            raise InputError(f"{what} vertex {v} out of range for n={n}")


def intersection_graph(a: np.ndarray, b: np.ndarray, m: Matching) -> IntersectionGraph:
    """Intersection of two graphs under a matching.

    Edge rule on the matching's domain: ``(u, v)`` is an edge iff
    ``a[u, v] = 1`` and ``b[m(u), m(v)] = 1``.
    """
    domain = m.domain()
    image = m.image()
    _check_indices(a.shape[0], domain, "domain")
    _check_indices(b.shape[0], image, "image")
    if m.size == 0:
        return IntersectionGraph(vertices=(), adj=np.zeros((0, 0), dtype=np.uint8))
    rows = np.asarray(domain)
    cols = np.asarray(image)
    sub_a = a[np.ix_(rows, rows)]
    sub_b = b[np.ix_(cols, cols)]
    return IntersectionGraph(vertices=domain, adj=(sub_a & sub_b).astype(np.uint8))


def intersection_under_permutation(a: np.ndarray, b: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Dense n-by-n adjacency of the intersection under a full bijection."""
    pi = np.asarray(pi)
    return (a & b[np.ix_(pi, pi)]).astype(np.uint8)


def kcore_peel(g: IntersectionGraph, k: int) -> frozenset[int]:
    """Largest vertex set whose induced subgraph has min degree >= k.

    Computed by repeatedly discarding every vertex of current degree < k
    until none remains; the fixpoint does not depend on removal order.
    Returns original vertex ids; the empty set is a valid result.
    """
    if k < 0:
        raise InputError(f"k must be >= 0, got {k}")
    n = g.size
    if n == 0:
        return frozenset()
    if k == 0:
        return frozenset(g.vertices)
    adj = g.adj.astype(np.uint8, copy=False)
    alive = np.ones(n, dtype=bool)
    while True:
        deg = adj @ alive
        drop = alive & (deg < k)
        if not drop.any():
            break
        alive &= ~drop
    labels = np.asarray(g.vertices)
    return frozenset(int(v) for v in labels[alive])


def low_degree_set(g: IntersectionGraph, k: int) -> frozenset[int]:
    """Vertices of degree at most k, as original ids."""
    deg = g.degrees()
    labels = np.asarray(g.vertices)
    return frozenset(int(v) for v in labels[deg <= k])


def isolated_vertices(g: IntersectionGraph) -> frozenset[int]:
    """Vertices of degree zero; same as ``low_degree_set(g, 0)``."""
    return low_degree_set(g, 0)


def min_degree(g: IntersectionGraph) -> float:
    """Minimum vertex degree; +inf for the empty vertex set.

    The infinity sentinel makes "min degree >= k" vacuously true for the
    empty matching, which is the correct base case for core estimators.
    """
    if g.size == 0:
        return math.inf
    return float(g.degrees().min())
