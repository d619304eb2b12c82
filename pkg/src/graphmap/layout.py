"""Stress-majorization layout over unit-length graph distances.

Stress is ``sum_{i<j} d_ij**-2 * (|x_i - x_j| - d_ij)**2``. Each step is the
weighted Guttman transform: every vertex is moved, simultaneously, to the
exact minimiser of the SMACOF majorizer built at the current positions, so
stress never increases. Positions are re-centred on the previous centroid,
which makes a zero-stress layout an exact fixed point.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .graph_io import Graph
from .rng import SplitMix64

JITTER = 1e-9


class DisconnectedGraphError(ValueError):
    def __init__(self, u: int, v: int):
        self.pair = (u, v)
        super().__init__(f"graph is disconnected: vertices {u} and {v} are mutually unreachable")


@dataclass
class Layout:
    positions: np.ndarray  # (n, 2)
    final_stress: float = 0.0
    iterations_used: int = 0
    stress_history: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(self.positions)):
            raise ValueError("layout coordinates must be finite")

    @property
    def n(self) -> int:
        return len(self.positions)

    def to_tsv(self) -> str:
        return "".join(f"{i}\t{x:.6f}\t{y:.6f}\n" for i, (x, y) in enumerate(self.positions))


def shortest_path_distances(g: Graph) -> np.ndarray:
    """All-pairs hop counts by BFS from every vertex. Edge weights are ignored."""
    n = g.n
    nbrs = [[v for v, _ in a] for a in g.adjacency]
    d = np.zeros((n, n))
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in nbrs[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    q.append(v)
        for t in range(n):
            if dist[t] < 0:
                raise DisconnectedGraphError(s, t)
        d[s] = dist
    return d


def initial_layout(g: Graph, seed: int) -> Layout:
    return Layout(random_positions(g.n, SplitMix64(seed)))


def random_positions(n: int, rng: SplitMix64) -> np.ndarray:
    # draw order: x then y, vertex by vertex
    pts = np.empty((n, 2))
    for i in range(n):
        pts[i, 0] = rng.uniform()
        pts[i, 1] = rng.uniform()
    return pts


def _check(x: np.ndarray, d: np.ndarray) -> None:
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] != len(x):
        raise ValueError(
            f"layout has {len(x)} vertices but distance matrix is {d.shape[0]}x{d.shape[1]}"
        )


def _pairwise(x: np.ndarray) -> np.ndarray:
    """Euclidean distance matrix with the diagonal set to 1 (never read as a distance)."""
    dist = cdist(x, x)
    np.fill_diagonal(dist, 1.0)
    return dist


def _stress_from(dist: np.ndarray, inv_d: np.ndarray) -> float:
    # d^-2 (|x| - d)^2 == (|x|/d - 1)^2; inv_d has a zero diagonal
    r = dist * inv_d
    r -= 1.0
    np.fill_diagonal(r, 0.0)
    r *= r
    return 0.5 * float(r.sum())


def _inverse_distances(d: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        inv_d = np.where(d > 0, 1.0 / d, 0.0)
    np.fill_diagonal(inv_d, 0.0)
    return inv_d


def stress(layout: Layout | np.ndarray, d: np.ndarray) -> float:
    x = layout.positions if isinstance(layout, Layout) else np.asarray(layout, dtype=float)
    _check(x, d)
    n = len(x)
    if n < 2:
        return 0.0
    iu = np.triu_indices(n, 1)
    dist = cdist(x, x)[iu]
    r = dist / d[iu] - 1.0
    return math.fsum(r * r)


def _separate_coincident(x: np.ndarray, dist: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nudge the higher-indexed vertex of every coincident pair by +JITTER in x."""
    if dist.min() > 0.0:
        return x, dist
    x = x.copy()
    while True:
        hit = np.argwhere(np.triu(dist == 0.0, 1))
        if len(hit) == 0:
            return x, dist
        for j in sorted({int(j) for _, j in hit}):
            x[j, 0] += JITTER
        dist = _pairwise(x)


class _Majorizer:
    """Cached weight Laplacian inverse for repeated Guttman transforms."""

    def __init__(self, d: np.ndarray) -> None:
        n = len(d)
        self.inv_d = _inverse_distances(d)
        w = self.inv_d * self.inv_d
        lap = np.diag(w.sum(axis=1)) - w
        # (L + 11^T/n)^-1 agrees with the pseudo-inverse of L on centred vectors
        self.lap_inv = np.linalg.inv(lap + 1.0 / n)

    def step(self, x: np.ndarray, dist: np.ndarray) -> np.ndarray:
        m = self.inv_d / dist
        bz = m.sum(axis=1)[:, None] * x - m @ x
        return self.lap_inv @ bz + x.mean(axis=0)

    def stress(self, dist: np.ndarray) -> float:
        return _stress_from(dist, self.inv_d)


def majorization_step(layout: Layout, d: np.ndarray) -> Layout:
    x = layout.positions
    _check(x, d)
    if len(x) < 2:
        return Layout(x.copy())
    x, dist = _separate_coincident(x, _pairwise(x))
    new = _Majorizer(d).step(x, dist)
    return Layout(new, final_stress=stress(new, d), iterations_used=layout.iterations_used + 1)


def layout_graph(g: Graph, seed: int, max_iters: int = 300, tol: float = 1e-6,
                 rng: SplitMix64 | None = None) -> Layout:
    """Stress layout of a connected graph from a seeded random start.

    Guttman steps are taken from a momentum-extrapolated point; whenever
    that fails to lower stress the momentum is dropped and a plain step from
    the current layout is used instead, so the recorded stress sequence is
    non-increasing. Plain steps alone crawl along the flat bending modes of
    chains and trees.

    ``rng`` lets the caller share one stream across several components;
    otherwise a fresh generator is built from ``seed``.
    """
    if g.n == 0:
        return Layout(np.empty((0, 2)))
    d = shortest_path_distances(g)
    rng = rng if rng is not None else SplitMix64(seed)
    x = random_positions(g.n, rng)
    if g.n == 1:
        return Layout(x, 0.0, 0, [0.0])

    maj = _Majorizer(d)
    x, dist = _separate_coincident(x, _pairwise(x))
    cur = maj.stress(dist)
    history = [cur]
    prev_x = x
    t = 1.0
    it = 0
    while it < max_iters and cur > 0.0:
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        if t > 1.0:
            y = x + ((t - 1.0) / t_next) * (x - prev_x)
            y, ydist = _separate_coincident(y, _pairwise(y))
        else:
            y, ydist = x, dist
        cand = maj.step(y, ydist)
        cand, cand_dist = _separate_coincident(cand, _pairwise(cand))
        s = maj.stress(cand_dist)
        if s > cur and y is not x:
            t_next = 1.0
            cand = maj.step(x, dist)
            cand, cand_dist = _separate_coincident(cand, _pairwise(cand))
            s = maj.stress(cand_dist)
        if s > cur:
            break  # only rounding noise left
        prev_x, x, dist, t = x, cand, cand_dist, t_next
        prev, cur = cur, s
        history.append(cur)
        it += 1
        if (prev - cur) / max(prev, 1e-15) < tol:
            break
    return Layout(x, cur, it, history)


def compose_components(layouts: list[Layout], padding: float = 2.0) -> Layout:
    """Place component layouts left to right, bottoms on y = 0.

    The result concatenates positions in the order of ``layouts``.
    """
    if not layouts:
        return Layout(np.empty((0, 2)))
    parts = []
    cursor = 0.0
    for lay in layouts:
        p = lay.positions
        if len(p) == 0:
            continue
        lo, hi = p.min(axis=0), p.max(axis=0)
        parts.append(p - lo + np.array([cursor, 0.0]))
        cursor += (hi[0] - lo[0]) + padding
    return Layout(
        np.vstack(parts) if parts else np.empty((0, 2)),
        final_stress=sum(lay.final_stress for lay in layouts),
        iterations_used=max((lay.iterations_used for lay in layouts), default=0),
    )


def layout_components(g: Graph, components: list[list[int]], seed: int,
                      max_iters: int = 300, tol: float = 1e-6,
                      padding: float = 2.0) -> Layout:
    """Lay out each component from one shared stream and compose them.

    Returned positions are indexed by the original vertex ids.
    """
    rng = SplitMix64(seed)
    pieces = []
    for comp in components:
        sub, _ = g.subgraph(comp)
        pieces.append(layout_graph(sub, seed, max_iters, tol, rng=rng))
    composed = compose_components(pieces, padding)
    order = [v for comp in components for v in comp]
    positions = np.empty((g.n, 2))
    positions[order] = composed.positions
    return Layout(positions, composed.final_stress, composed.iterations_used)
