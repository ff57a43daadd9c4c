"""Shared generators for seeded random test corpora."""

import numpy as np
import pytest

from hyperwalk import Graph, Hypergraph, is_connected


def random_connected_graph(n: int, p: float, seed: int, max_tries: int = 200) -> Graph:
    """Erdos-Renyi G(n, p) resampled until connected."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < p]
        G = Graph(n, edges)
        import networkx as nx
        gx = nx.Graph()
        gx.add_nodes_from(range(n))
        gx.add_edges_from(edges)
        if nx.is_connected(gx):
            return G
    raise RuntimeError(f"no connected G({n},{p}) in {max_tries} tries")


def random_hypergraph(n: int, m: int, seed: int, kmax: int = 4) -> Hypergraph:
    """Random hyper-graph with edge sizes in 1..kmax; may be disconnected."""
    rng = np.random.default_rng(seed)
    edges = []
    for _ in range(m):
        k = int(rng.integers(1, min(kmax, n) + 1))
        edges.append(sorted(rng.choice(n, size=k, replace=False).tolist()))
    return Hypergraph(n, edges)


def random_connected_hypergraph(n: int, m: int, seed: int, kmax: int = 4) -> Hypergraph:
    for s in range(seed, seed + 500):
        H = random_hypergraph(n, m, s, kmax)
        if is_connected(H):
            return H
    raise RuntimeError("no connected hyper-graph found")


@pytest.fixture
def p3() -> Hypergraph:
    """The 3-vertex path as a 2-uniform hyper-graph."""
    return Hypergraph(3, [[0, 1], [1, 2]])
