from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st
from networkx.algorithms.community import modularity as nx_modularity

from graphmap import testgraphs as T
from graphmap.clustering import (ClusterFileError, OracleSizeError, UndefinedModularityError,
                                 brute_force_modularity_oracle, canonical, cluster_override,
                                 greedy_modularity_cluster, modularity)
from graphmap.graph_io import Graph, Vertex, parse_edge_list

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]


def nx_q(g: Graph, assignment) -> float:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_weighted_edges_from(g.edges)
    groups = {}
    for v, c in enumerate(assignment):
        groups.setdefault(c, set()).add(v)
    return nx_modularity(h, groups.values(), weight="weight")


def partitions(n):
    """Independent enumeration of set partitions (recursive insertion)."""
    if n == 0:
        yield []
        return
    for p in partitions(n - 1):
        k = max(p, default=-1) + 1
        for c in range(k + 1):
            yield p + [c]


def graphs():
    return st.integers(2, 8).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(n - 1, n * (n - 1) // 2), st.integers(0, 2**32)))


class TestModularity:
    def test_one_cluster_is_zero(self):
        assert modularity(T.two_triangles_bridge(), [0] * 6) == 0.0

    def test_planted_two_triangles(self):
        assert modularity(T.two_triangles_bridge(), [0, 0, 0, 1, 1, 1]) == pytest.approx(5 / 14, abs=1e-15)

    def test_k2_singletons(self):
        assert modularity(T.k2(), [0, 1]) == -0.5

    def test_edgeless(self):
        with pytest.raises(UndefinedModularityError):
            modularity(Graph([Vertex("a")], []), [0])

    @given(graphs(), st.data())
    def test_matches_networkx(self, params, data):
        g = T.random_graph(*params)
        a = data.draw(st.lists(st.integers(0, 3), min_size=g.n, max_size=g.n))
        q = modularity(g, a)
        assert q == pytest.approx(nx_q(g, a), abs=1e-12)
        assert -0.5 - 1e-12 <= q <= 1.0


class TestGreedy:
    def test_two_triangles(self):
        c = greedy_modularity_cluster(T.two_triangles_bridge())
        assert c.assignment == [0, 0, 0, 1, 1, 1]
        assert c.modularity == pytest.approx(5 / 14, abs=1e-12)

    def test_k4_single_cluster(self):
        assert greedy_modularity_cluster(T.complete(4)).assignment == [0, 0, 0, 0]

    def test_two_k4(self):
        assert greedy_modularity_cluster(T.two_k4_bridge()).assignment == [0] * 4 + [1] * 4

    def test_edgeless_singletons(self):
        c = greedy_modularity_cluster(Graph([Vertex("a"), Vertex("b")], []))
        assert c.assignment == [0, 1] and c.modularity == 0.0 and c.warnings

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_equals_oracle(self, k):
        g = T.two_cliques(k)
        assert greedy_modularity_cluster(g).assignment == brute_force_modularity_oracle(g).assignment

    @given(graphs())
    def test_invariants(self, params):
        g = T.random_graph(*params)
        c = greedy_modularity_cluster(g)
        assert c.assignment == canonical(c.assignment)
        assert sorted(set(c.assignment)) == list(range(c.k))
        assert c.modularity == pytest.approx(modularity(g, c.assignment), abs=1e-12)
        assert c.modularity >= -1e-12

    @given(graphs())
    def test_deterministic(self, params):
        g = T.random_graph(*params)
        assert greedy_modularity_cluster(g) == greedy_modularity_cluster(g)

    def test_tie_break_smallest_pair(self):
        # a 4-cycle: every first merge has the same gain; (0, 1) must go first
        c = greedy_modularity_cluster(parse_edge_list("a b\nb c\nc d\nd a"))
        assert c.assignment == [0, 0, 1, 1]


class TestOracle:
    def test_triangle(self):
        c = brute_force_modularity_oracle(T.complete(3))
        assert c.assignment == [0, 0, 0] and c.modularity == 0.0

    def test_two_triangles(self):
        c = brute_force_modularity_oracle(T.two_triangles_bridge())
        assert c.assignment == [0, 0, 0, 1, 1, 1]
        assert c.modularity == pytest.approx(5 / 14, abs=1e-12)

    def test_k2(self):
        assert brute_force_modularity_oracle(T.k2()).assignment == [0, 0]

    def test_refuses_large(self):
        with pytest.raises(OracleSizeError):
            brute_force_modularity_oracle(T.random_graph(11, 12, 0))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_partition_count(self, n):
        from graphmap.clustering import _restricted_growth_strings
        parts = _restricted_growth_strings(n)
        assert len(parts) == BELL[n]
        assert sorted(map(tuple, parts.tolist())) == sorted(map(tuple, partitions(n)))

    @given(st.integers(2, 7).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(n - 1, n * (n - 1) // 2), st.integers(0, 2**32))))
    def test_optimal_against_independent_enumeration(self, params):
        g = T.random_graph(*params)
        best = max(nx_q(g, p) for p in partitions(g.n))
        assert brute_force_modularity_oracle(g).modularity == pytest.approx(best, abs=1e-12)
        assert greedy_modularity_cluster(g).modularity <= best + 1e-12


class TestOverride:
    def test_one_name(self):
        c = cluster_override(T.two_triangles_bridge(), {str(i): "all" for i in range(6)})
        assert c.k == 1 and c.modularity == 0.0

    def test_missing_vertex(self):
        with pytest.raises(ClusterFileError) as exc:
            cluster_override(T.two_triangles_bridge(), {str(i): "x" for i in range(5)})
        assert exc.value.offenders == ["5"]

    def test_planted_names(self):
        text = "# genres\n" + "".join(f"{i}\t{'Jazz' if i < 3 else 'Rock'}\n" for i in range(6))
        c = cluster_override(T.two_triangles_bridge(), text)
        assert c.names == ["Jazz", "Rock"]
        assert c.modularity == pytest.approx(5 / 14, abs=1e-12)

    def test_first_appearance_order(self):
        c = cluster_override(T.p3(), {"0": "B", "1": "A", "2": "B"})
        assert c.assignment == [0, 1, 0] and c.names == ["B", "A"]

    def test_malformed_line(self):
        with pytest.raises(ClusterFileError):
            cluster_override(T.k2(), "0 x\n1\ty\n")
