"""Shared fixtures: bundled benchmark networks and random instance factories.

The random factories construct graphs that satisfy the decomposition
requirements by design: a definite spanning tree rooted at vertex 1 gives the
path cover, and geometric weight shrinkage down the tree keeps every non-root
vertex in-degree dominated.
"""

from __future__ import annotations

from typing import Dict, Tuple

import numpy as np
import pytest

from ntconsensus import (
    Decomposition,
    SignedGraph,
    bundled_decomposition,
    bundled_graph,
)


def random_spd(rng: np.random.Generator, d: int) -> np.ndarray:
    """Random positive definite matrix with eigenvalues in [1, 2]."""
    m = rng.normal(size=(d, d))
    s = m @ m.T
    top = float(np.max(np.linalg.eigvalsh(s)))
    return np.eye(d) + s / max(top, 1e-12)


def random_psd_singular(rng: np.random.Generator, d: int) -> np.ndarray:
    """Random rank-deficient positive semi-definite matrix."""
    rank = int(rng.integers(1, d)) if d > 1 else 1
    m = rng.normal(size=(d, rank))
    return m @ m.T


def random_directed_valid(
    rng: np.random.Generator, n: int, d: int
) -> Tuple[SignedGraph, Decomposition]:
    """Directed graph passing the decomposition check with V1 = {1}.

    Tree edges point away from the root; the weight scale drops by a factor
    8n per level so each vertex's in-weight dominates the sum of its
    out-weights.  Vertex 1 gets a small negative definite in-edge from vertex
    2 so the design has a positive definite coupling block on V1.
    """
    assert n >= 2
    edges: Dict[Tuple[int, int], np.ndarray] = {}
    scale = {1: 1.0}
    depth = {1: 0}
    for v in range(2, n + 1):
        # depth cap keeps the weight-scale spread well above rank tolerances
        shallow = [u for u in range(1, v) if depth[u] <= 1]
        parent = int(rng.choice(shallow))
        depth[v] = depth[parent] + 1
        scale[v] = scale[parent] / (8.0 * n)
        sign = -1.0 if rng.random() < 0.4 else 1.0
        edges[(v, parent)] = sign * scale[v] * random_spd(rng, d)
    # negative in-edge at the root; kept small so vertex 2 stays dominated
    edges[(1, 2)] = -(scale[2] / 8.0) * random_spd(rng, d)
    # optional extra out-edges from the root only add to in-sums elsewhere
    for _ in range(int(rng.integers(0, n))):
        v = int(rng.integers(2, n + 1))
        if (v, 1) in edges:
            continue
        w = random_psd_singular(rng, d)
        if rng.random() < 0.3:
            w = -w
        edges[(v, 1)] = 0.1 * scale[v] * w
    g = SignedGraph.from_edges(n, d, directed=True, edges=edges)
    return g, Decomposition.of(g, [1])


def random_undirected_valid(
    rng: np.random.Generator, n: int, d: int
) -> Tuple[SignedGraph, Decomposition]:
    """Undirected graph on a definite spanning tree, V1 = {1}; the edge
    between vertices 1 and 2 is negative definite so the informed set is
    nonempty."""
    assert n >= 2
    edges: Dict[Tuple[int, int], np.ndarray] = {}
    edges[(2, 1)] = -random_spd(rng, d)
    for v in range(3, n + 1):
        parent = int(rng.integers(1, v))
        sign = -1.0 if rng.random() < 0.4 else 1.0
        edges[(v, parent)] = sign * random_spd(rng, d)
    g = SignedGraph.from_edges(n, d, directed=False, edges=edges)
    return g, Decomposition.of(g, [1])


def random_all_psd_graph(rng: np.random.Generator, n: int, d: int) -> SignedGraph:
    """Directed graph whose every weight is positive (semi-)definite."""
    edges: Dict[Tuple[int, int], np.ndarray] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or rng.random() < 0.5:
                continue
            if rng.random() < 0.5:
                edges[(i, j)] = random_spd(rng, d)
            else:
                w = random_psd_singular(rng, d)
                if np.max(np.abs(w)) > 0:
                    edges[(i, j)] = w
    return SignedGraph.from_edges(n, d, directed=True, edges=edges)


@pytest.fixture(scope="session")
def net_a() -> SignedGraph:
    return bundled_graph("net_a")


@pytest.fixture(scope="session")
def net_a_dec() -> Decomposition:
    return bundled_decomposition("net_a")


@pytest.fixture(scope="session")
def net_a_weak() -> SignedGraph:
    return bundled_graph("net_a_weak")


@pytest.fixture(scope="session")
def net_b() -> SignedGraph:
    return bundled_graph("net_b")


@pytest.fixture(scope="session")
def net_c() -> SignedGraph:
    return bundled_graph("net_c")


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
