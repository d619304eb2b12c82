"""Modularity clustering: greedy agglomeration, an exhaustive oracle, and
user-supplied groupings."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph_io import Graph

ORACLE_MAX_N = 10


class UndefinedModularityError(ValueError):
    pass


class OracleSizeError(ValueError):
    pass


class ClusterFileError(ValueError):
    def __init__(self, message: str, offenders: Sequence[str] = ()):
        self.offenders = list(offenders)
        super().__init__(message)


@dataclass
class Clustering:
    assignment: list[int]
    k: int
    modularity: float
    names: list[str] | None = None
    warnings: list[str] = field(default_factory=list)

    def members(self, c: int) -> list[int]:
        return [v for v, a in enumerate(self.assignment) if a == c]


def modularity(g: Graph, assignment: Sequence[int]) -> float:
    """Q = sum_c [ w_c / W - (s_c / 2W)^2 ]."""
    if len(assignment) != g.n:
        raise ValueError(f"assignment covers {len(assignment)} vertices, graph has {g.n}")
    total = g.total_weight()
    if total <= 0:
        raise UndefinedModularityError("modularity is undefined on a graph without edges")
    inner: dict[int, float] = {}
    strength: dict[int, float] = {}
    for u, v, w in g.edges:
        cu = assignment[u]
        strength[cu] = strength.get(cu, 0.0) + w
        cv = assignment[v]
        strength[cv] = strength.get(cv, 0.0) + w
        if cu == cv:
            inner[cu] = inner.get(cu, 0.0) + w
    q = 0.0
    for c in sorted(strength):
        q += inner.get(c, 0.0) / total - (strength[c] / (2.0 * total)) ** 2
    return q


def canonical(assignment: Sequence[int]) -> list[int]:
    """Renumber clusters by first appearance, i.e. by smallest member id."""
    remap: dict[int, int] = {}
    return [remap.setdefault(a, len(remap)) for a in assignment]


def _singletons(g: Graph, warning: str) -> Clustering:
    return Clustering(list(range(g.n)), g.n, 0.0, warnings=[warning])


def greedy_modularity_cluster(g: Graph) -> Clustering:
    """Agglomerative greedy modularity maximisation.

    Start from singletons and repeatedly merge the adjacent pair with the
    largest positive gain. The gain of merging a and b is proportional to
    ``2W * w_ab - s_a * s_b``; ties go to the smallest (min id, max id) pair
    and the merged cluster keeps the smaller id.
    """
    total = g.total_weight()
    if total <= 0:
        return _singletons(g, "graph has no edges; modularity reported as 0")

    strength = {v: g.weighted_degree(v) for v in range(g.n)}
    links: dict[int, dict[int, float]] = {v: {} for v in range(g.n)}
    for u, v, w in g.edges:
        links[u][v] = links[u].get(v, 0.0) + w
        links[v][u] = links[v].get(u, 0.0) + w
    two_w = 2.0 * total

    heap: list[tuple[float, int, int, int]] = []
    version: dict[tuple[int, int], int] = {}

    def push(a: int, b: int) -> None:
        if a > b:
            a, b = b, a
        key = two_w * links[a][b] - strength[a] * strength[b]
        ver = version.get((a, b), 0) + 1
        version[(a, b)] = ver
        if key > 0:
            heapq.heappush(heap, (-key, a, b, ver))

    for u, v, _ in g.edges:
        push(u, v)

    parent = list(range(g.n))
    while heap:
        _, a, b, ver = heapq.heappop(heap)
        if version.get((a, b)) != ver:
            continue
        # merge b into a
        parent[b] = a
        strength[a] += strength.pop(b)
        for c, w in links.pop(b).items():
            del links[c][b]
            version.pop((min(b, c), max(b, c)), None)
            if c == a:
                continue
            links[a][c] = links[a].get(c, 0.0) + w
            links[c][a] = links[a][c]
        version.pop((a, b), None)
        for c in links[a]:
            push(a, c)

    def root(v: int) -> int:
        while parent[v] != v:
            v = parent[v]
        return v

    assignment = canonical([root(v) for v in range(g.n)])
    return Clustering(assignment, max(assignment) + 1, modularity(g, assignment))


def _restricted_growth_strings(n: int) -> np.ndarray:
    """All set partitions of n elements as canonical labelings, in lexicographic order."""
    out: list[list[int]] = []
    cur = [0] * n

    def rec(i: int, top: int) -> None:
        if i == n:
            out.append(cur.copy())
            return
        for c in range(top + 2):
            cur[i] = c
            rec(i + 1, max(top, c))

    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    rec(1, 0)
    return np.array(out, dtype=np.int8)


def brute_force_modularity_oracle(g: Graph) -> Clustering:
    """Globally optimal partition by enumerating all set partitions (n <= 10).

    Ties within 1e-12 go to the lexicographically smallest canonical labeling.
    """
    if g.n > ORACLE_MAX_N:
        raise OracleSizeError(f"oracle enumerates at most {ORACLE_MAX_N} vertices, got {g.n}")
    total = g.total_weight()
    if total <= 0:
        raise UndefinedModularityError("modularity is undefined on a graph without edges")
    parts = _restricted_growth_strings(g.n)
    strength = np.array([g.weighted_degree(v) for v in range(g.n)])
    q = np.zeros(len(parts))
    for u, v, w in g.edges:
        q += np.where(parts[:, u] == parts[:, v], w / total, 0.0)
    for c in range(g.n):
        s_c = (parts == c).astype(float) @ strength
        q -= (s_c / (2.0 * total)) ** 2
    best = int(np.flatnonzero(q >= q.max() - 1e-12)[0])
    assignment = [int(a) for a in parts[best]]
    return Clustering(assignment, max(assignment) + 1, modularity(g, assignment))


def parse_cluster_file(text: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise ClusterFileError(f"line {lineno}: expected 'vertex-label<TAB>cluster-name'")
        mapping[fields[0]] = fields[1]
    return mapping


def cluster_override(g: Graph, mapping: dict[str, str] | str) -> Clustering:
    """Clustering from a label -> cluster-name map (or the TSV text of one)."""
    if isinstance(mapping, str):
        mapping = parse_cluster_file(mapping)
    labels = g.labels
    missing = [lab for lab in labels if lab not in mapping]
    known = set(labels)
    unknown = sorted(lab for lab in mapping if lab not in known)
    if missing or unknown:
        parts = []
        if missing:
            parts.append("unassigned vertices: " + ", ".join(missing))
        if unknown:
            parts.append("unknown labels: " + ", ".join(unknown))
        raise ClusterFileError("; ".join(parts), missing + unknown)

    names: list[str] = []
    index: dict[str, int] = {}
    assignment = []
    for lab in labels:
        name = mapping[lab]
        if name not in index:
            index[name] = len(names)
            names.append(name)
        assignment.append(index[name])
    if g.total_weight() > 0:
        q, warnings = modularity(g, assignment), []
    else:
        q, warnings = 0.0, ["graph has no edges; modularity reported as 0"]
    return Clustering(assignment, len(names), q, names=names, warnings=warnings)
