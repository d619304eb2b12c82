"""Small named graphs used by the tests, the acceptance suite and the scripts."""

from __future__ import annotations

from .graph_io import Graph, Vertex
from .rng import SplitMix64


def _graph(n: int, edges) -> Graph:
    uniq = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
    return Graph([Vertex(str(i)) for i in range(n)], [(u, v, 1.0) for u, v in uniq])


def k2() -> Graph:
    return _graph(2, [(0, 1)])


def p3() -> Graph:
    return _graph(3, [(0, 1), (1, 2)])


def complete(k: int) -> Graph:
    return _graph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def two_cliques(k: int) -> Graph:
    """Two k-cliques joined by one bridge edge between vertex 0 and vertex k."""
    edges = [(o + i, o + j) for o in (0, k) for i in range(k) for j in range(i + 1, k)]
    return _graph(2 * k, edges + [(0, k)])


def two_triangles_bridge() -> Graph:
    return two_cliques(3)


def two_k4_bridge() -> Graph:
    return two_cliques(4)


def archipelago() -> Graph:
    """Three components: a triangle, a 4-cycle with a chord, and a path of 3."""
    edges = [(0, 1), (1, 2), (0, 2),
             (3, 4), (4, 5), (5, 6), (6, 3), (3, 5),
             (7, 8), (8, 9)]
    return _graph(10, edges)


def random_graph(n: int, m: int, seed: int) -> Graph:
    """Connected G(n, m): a random spanning tree plus uniform extra edges."""
    if m < n - 1 or m > n * (n - 1) // 2:
        raise ValueError(f"cannot build a connected simple graph with n={n}, m={m}")
    rng = SplitMix64(seed)
    edges = set()
    for v in range(1, n):
        u = rng.randbelow(v)
        edges.add((u, v))
    while len(edges) < m:
        u, v = rng.randbelow(n), rng.randbelow(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return _graph(n, edges)


MATRIX_GRAPHS = {
    "K2": k2,
    "P3": p3,
    "two-triangles-bridge": two_triangles_bridge,
    "two-K4-bridge": two_k4_bridge,
    "archipelago": archipelago,
    "random-200-600": lambda: random_graph(200, 600, 7),
}
MATRIX_SEEDS = (1, 42, 1337)
