from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphmap import testgraphs as T
from graphmap.clustering import Clustering, greedy_modularity_cluster
from graphmap.geometry import BOUNDARY, INSIDE, OUTSIDE, BBox, Polygon, point_in_polygon, polygon_area
from graphmap.geometry.polygon import centroid
from graphmap.graph_io import connected_components
from graphmap.layout import Layout, layout_components
from graphmap.mapgen import (CORNER, RANDOM, SEA, VERTEX, CountryMap, SiteSet, augment_sites,
                             border_vertex_counts, check_partition, compute_bbox, corner_sites,
                             labeling_radius, mean_border_vertices, naive_map, natural_map,
                             place_label_anchor, polygon_sets_equal, smooth_boundaries,
                             synthesize_map, vertices_contained)
from graphmap.mapgen import _chaikin_closed


def pipeline(g, seed):
    return layout_components(g, connected_components(g), seed), greedy_modularity_cluster(g)


def one_cluster(n):
    return Clustering([0] * n, 1, 0.0)


def check_map(cmap: CountryMap, tol=1e-9):
    assert check_partition(cmap) <= tol
    assert vertices_contained(cmap) == []
    assert polygon_area(cmap.sea) > 0
    for a, b in cmap.adjacency:
        assert a < b
    for c, p in cmap.label_anchor.items():
        assert point_in_polygon(p, cmap.countries[c]) == INSIDE


class TestBBox:
    def test_unit_square_margin(self):
        b = compute_bbox(Layout([[0, 0], [1, 0], [0, 1], [1, 1]]), 0.15)
        assert (b.xmin, b.ymin, b.xmax, b.ymax) == pytest.approx((-0.15, -0.15, 1.15, 1.15), abs=1e-15)

    def test_single_vertex(self):
        b = compute_bbox(Layout([[5, 5]]))
        assert (b.xmin, b.ymin, b.xmax, b.ymax) == (4.5, 4.5, 5.5, 5.5)

    def test_zero_margin(self):
        b = compute_bbox(Layout([[0, 1], [2, 3]]), 0.0)
        assert (b.xmin, b.ymin, b.xmax, b.ymax) == (0, 1, 2, 3)

    def test_corner_inset(self):
        b = BBox(0, 0, 3, 4)
        eps = 1e-6 * 5
        assert corner_sites(b)[0] == pytest.approx((eps, eps))
        assert all(b.strictly_contains(p) for p in corner_sites(b))


class TestNaive:
    def test_single_vertex(self):
        lay = Layout([[0.0, 0.0]])
        m = naive_map(lay, one_cluster(1))
        bbox_area = m.bbox.area
        assert polygon_area(m.countries[0]) + polygon_area(m.sea) == pytest.approx(bbox_area, rel=1e-12)
        # each corner cell reaches the side midpoints, so the country is a diamond
        assert polygon_area(m.countries[0]) == pytest.approx(0.5 * bbox_area, rel=1e-5)
        assert point_in_polygon((0.45, 0.45), m.sea) == INSIDE
        check_map(m)

    def test_symmetric_pair(self):
        m = naive_map(Layout([[-1.0, 0.0], [1.0, 0.0]]), Clustering([0, 1], 2, -0.5))
        assert polygon_area(m.countries[0]) == pytest.approx(polygon_area(m.countries[1]), rel=1e-12)
        assert (0, 1) in m.adjacency

    def test_straight_borders(self):
        counts = []
        for g in (T.two_triangles_bridge(), T.two_k4_bridge()):
            for seed in (1, 42, 1337):
                counts.append(mean_border_vertices(naive_map(*pipeline(g, seed))))
        assert sum(counts) / len(counts) <= 4


class TestAugment:
    def test_count(self):
        g = T.random_graph(10, 15, 0)
        lay, cl = pipeline(g, 3)
        s = augment_sites(lay, cl, compute_bbox(lay), density=0.0001, seed=1)
        assert len(s) == 15
        assert (s.count(VERTEX), s.count(CORNER), s.count(RANDOM)) == (10, 4, 1)

    def test_deterministic(self):
        lay, cl = pipeline(T.two_k4_bridge(), 3)
        a = augment_sites(lay, cl, compute_bbox(lay), seed=9)
        b = augment_sites(lay, cl, compute_bbox(lay), seed=9)
        assert a == b

    def test_draw_order_x_then_y(self):
        from graphmap.rng import SplitMix64
        lay, cl = pipeline(T.k2(), 3)
        box = compute_bbox(lay)
        s = augment_sites(lay, cl, box, density=1.0, seed=5)
        r = SplitMix64(5)
        x = box.xmin + r.uniform() * box.width
        y = box.ymin + r.uniform() * box.height
        assert s.points[len(s) - 2] == (x, y)

    def test_labeling_rule(self):
        lay, cl = pipeline(T.two_k4_bridge(), 11)
        box = compute_bbox(lay)
        s = augment_sites(lay, cl, box, seed=2)
        pos = lay.positions
        radius = labeling_radius(pos, box)
        assert radius == pytest.approx(1.2 * np.median(
            [min(np.hypot(*(pos[j] - pos[i])) for j in range(len(pos)) if j != i) for i in range(len(pos))]))
        for p, lab, kind in zip(s.points, s.labels, s.provenance):
            if kind != RANDOM:
                continue
            d = np.hypot(*(pos - p).T)
            if d.min() > radius:
                assert lab == SEA
            else:
                assert lab == cl.assignment[int(np.argmin(d))]
        assert SEA in [lab for lab, kind in zip(s.labels, s.provenance) if kind == RANDOM]

    def test_single_vertex_radius(self):
        box = BBox(0, 0, 3, 4)
        assert labeling_radius(np.array([[1.0, 1.0]]), box, 1.0) == 5 / 4

    def test_sites_strictly_inside_and_distinct(self):
        lay, cl = pipeline(T.random_graph(50, 100, 2), 4)
        box = compute_bbox(lay)
        s = augment_sites(lay, cl, box, seed=3)
        assert all(box.strictly_contains(p) for p in s.points)
        pts = np.array(s.points)
        d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
        np.fill_diagonal(d, np.inf)
        assert d.min() > 1e-12

    def test_negative_density(self):
        lay, cl = pipeline(T.k2(), 1)
        with pytest.raises(ValueError):
            augment_sites(lay, cl, compute_bbox(lay), density=-1.0)


def grid_sites(labels_by_cell, size):
    """One site per unit cell of a size x size grid, plus the four corners."""
    box = BBox(0, 0, size, size)
    pts, labels, prov, vsite = [], [], [], []
    for (i, j), lab in sorted(labels_by_cell.items()):
        if lab != SEA:
            vsite.append(len(pts))
        pts.append((i + 0.5, j + 0.5))
        labels.append(lab)
        prov.append(VERTEX if lab != SEA else RANDOM)
    for c in corner_sites(box):
        pts.append(c)
        labels.append(SEA)
        prov.append(CORNER)
    return SiteSet(pts, labels, prov, box, vsite)


class TestSynthesize:
    def test_density_zero_equals_naive(self):
        for g in (T.two_triangles_bridge(), T.archipelago()):
            lay, cl = pipeline(g, 42)
            assert polygon_sets_equal(naive_map(lay, cl), natural_map(lay, cl, seed=7, density=0.0))

    def test_lake_fixture(self):
        cells = {(i, j): (SEA if (i, j) == (1, 1) else 0) for i in range(3) for j in range(3)}
        m = synthesize_map(grid_sites(cells, 3))
        assert m.lakes() == 1 and m.islands() == 0
        assert len(m.countries[0]) == 1
        assert polygon_area(Polygon(m.countries[0][0].holes[0])) == pytest.approx(1.0, rel=1e-12)
        assert point_in_polygon((1.5, 1.5), m.countries[0]) == OUTSIDE
        check_map(m)

    def test_island_fixture(self):
        cells = {(i, j): (SEA if i == 1 else 0) for i in range(3) for j in range(3)}
        m = synthesize_map(grid_sites(cells, 3))
        assert m.islands() == 1 and len(m.countries[0]) == 2
        check_map(m)

    def test_adjacency(self):
        cells = {(i, 0): i for i in range(3)}
        m = synthesize_map(grid_sites(cells, 3))
        assert m.country_adjacency() == {(0, 1), (1, 2)}
        assert (SEA, 0) in m.adjacency

    @settings(max_examples=25)
    @given(st.integers(2, 30).flatmap(lambda n: st.tuples(
        st.just(n), st.integers(n - 1, min(3 * n, n * (n - 1) // 2)), st.integers(0, 2**32))),
        st.integers(0, 2**64 - 1), st.sampled_from(["naive", "natural"]))
    def test_map_invariants(self, params, seed, mode):
        lay, cl = pipeline(T.random_graph(*params), seed)
        m = naive_map(lay, cl) if mode == "naive" else natural_map(lay, cl, seed)
        check_map(m)
        assert sorted(m.countries) == list(range(cl.k))

    def test_deterministic(self):
        lay, cl = pipeline(T.random_graph(40, 90, 1), 42)
        assert natural_map(lay, cl, 5) == natural_map(lay, cl, 5)


class TestAnchor:
    def test_convex(self):
        sq = Polygon([(0, 0), (2, 0), (2, 2), (0, 2)])
        assert place_label_anchor([sq]) == (1.0, 1.0)

    def test_u_shape(self):
        u = Polygon([(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)])
        assert point_in_polygon(centroid(u), u) == OUTSIDE
        p = place_label_anchor([u])
        assert point_in_polygon(p, u) == INSIDE

    def test_ring_uses_pole(self):
        ring = Polygon([(0, 0), (3, 0), (3, 3), (0, 3)], [[(1, 1), (1, 2), (2, 2), (2, 1)]])
        p = place_label_anchor([ring])
        assert point_in_polygon(p, ring) == INSIDE

    def test_largest_part(self):
        big = Polygon([(0, 0), (3, 0), (3, 1), (0, 1)])
        small = Polygon([(5, 0), (6, 0), (6, 1), (5, 1)])
        p = place_label_anchor([small, big])
        assert point_in_polygon(p, big) == INSIDE

    def test_empty(self):
        with pytest.raises(ValueError):
            place_label_anchor([])


def island_map(vertex):
    """Square country [1,3]^2 in a sea box [0,4]^2."""
    sq = [(1.0, 1.0), (3.0, 1.0), (3.0, 3.0), (1.0, 3.0)]
    box = BBox(0, 0, 4, 4)
    return CountryMap(box, {0: [Polygon(sq)]}, [Polygon(box.corners(), [sq[::-1]])],
                      {(SEA, 0)}, {0: (2.0, 2.0)}, [vertex], [0])


class TestSmooth:
    def test_identity(self):
        lay, cl = pipeline(T.two_k4_bridge(), 1)
        m = natural_map(lay, cl, 1)
        assert smooth_boundaries(m, 0) is m

    def test_square_to_octagon(self):
        oct_ = _chaikin_closed([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert oct_ == [(0.25, 0), (0.75, 0), (1, 0.25), (1, 0.75),
                        (0.75, 1), (0.25, 1), (0, 0.75), (0, 0.25)]
        m = smooth_boundaries(island_map((2.0, 2.0)), 1)
        assert len(m.countries[0][0].outer) == 8
        # four corner triangles with legs 0.5 are cut off
        assert polygon_area(m.countries[0]) == pytest.approx(3.5, rel=1e-12)
        assert set(m.sea[0].holes[0]) == set(m.countries[0][0].outer)
        assert check_partition(m) <= 1e-12

    def test_rollback(self):
        m = island_map((1.0 + 1e-9, 1.0 + 1e-9))
        assert smooth_boundaries(m, 1) is m

    @pytest.mark.parametrize("seed", [1, 42, 1337])
    def test_partition_after_smoothing(self, seed):
        lay, cl = pipeline(T.random_graph(60, 150, seed), seed)
        m = smooth_boundaries(natural_map(lay, cl, seed), 2)
        assert check_partition(m) <= 1e-6
        assert vertices_contained(m) == []


def test_border_vertex_counts():
    cells = {(i, 0): i for i in range(3)}
    m = synthesize_map(grid_sites(cells, 3))
    counts = border_vertex_counts(m)
    assert set(counts) == {(0, 1), (1, 2)}
    assert all(v >= 2 for v in counts.values())


def test_natural_borders_wind_more_on_two_triangles():
    # the two-triangles graph alone, matrix seeds, default density and alpha
    from graphmap.experiments import Cell, boundary_ratio, run_cell
    name = "two-triangles-bridge"
    results = {Cell(name, seed, mode): run_cell(name, seed, mode)
               for seed in T.MATRIX_SEEDS for mode in ("naive", "natural")}
    nat, naive = boundary_ratio(results, graphs=(name,))
    assert nat >= 3.0 * naive
