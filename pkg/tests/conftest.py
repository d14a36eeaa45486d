from __future__ import annotations

import numpy as np
import pytest


def random_graph(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    """Plain density-p random graph as a dense symmetric 0/1 matrix."""
    adj = np.zeros((n, n), dtype=np.uint8)
    iu = np.triu_indices(n, 1)
    vals = (rng.random(len(iu[0])) < p).astype(np.uint8)
    adj[iu] = vals
    adj[(iu[1], iu[0])] = vals
    return adj


def complete_graph(n: int) -> np.ndarray:
    return np.ones((n, n), dtype=np.uint8) - np.eye(n, dtype=np.uint8)


def graph_from_edges(n: int, edges: list[tuple[int, int]]) -> np.ndarray:
    adj = np.zeros((n, n), dtype=np.uint8)
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1
    return adj


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
