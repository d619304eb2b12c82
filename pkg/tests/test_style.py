from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from graphmap import testgraphs as T
from graphmap.clustering import Clustering, cluster_override, greedy_modularity_cluster
from graphmap.geometry import INSIDE, point_in_polygon
from graphmap.graph_io import connected_components
from graphmap.layout import Layout, layout_components
from graphmap.mapgen import SEA, natural_map
from graphmap.style import (DEFAULT_PALETTE, FONT_MAX, FONT_MIN, ColoringError, Palette,
                            PaletteError, build_overlay, build_render_spec, color_countries,
                            font_size, label_countries, parse_palette)


def chromatic_number(k, edges):
    for c in range(1, k + 1):
        for colors in itertools.product(range(c), repeat=k):
            if all(colors[a] != colors[b] for a, b in edges):
                return c
    return 0


class TestColoring:
    def test_single(self):
        assert color_countries(set(), 1) == [0]

    def test_pair(self):
        assert color_countries({(0, 1)}, 2) == [0, 1]

    def test_k4(self):
        edges = {(a, b) for a in range(4) for b in range(a + 1, 4)}
        colors = color_countries(edges, 4)
        assert colors == [0, 1, 2, 3]
        assert chromatic_number(4, edges) == 4

    def test_sea_ignored(self):
        assert color_countries({(SEA, 0), (SEA, 1)}, 2) == [0, 0]

    def test_exhausted(self):
        edges = {(a, b) for a in range(7) for b in range(a + 1, 7)}
        with pytest.raises(ColoringError) as exc:
            color_countries(edges, 7, p=6)
        assert exc.value.country == 6

    @given(st.integers(1, 9).flatmap(lambda k: st.tuples(
        st.just(k), st.sets(st.tuples(st.integers(0, k - 1), st.integers(0, k - 1))))))
    def test_proper(self, case):
        k, pairs = case
        edges = {(min(a, b), max(a, b)) for a, b in pairs if a != b}
        colors = color_countries(edges, k)
        assert all(colors[a] != colors[b] for a, b in edges)


class TestPalette:
    def test_parse(self):
        text = "sea #112233\n" + "\n".join(f"#0000{i:02X}" for i in range(6)) + "\n"
        p = parse_palette(text)
        assert p.sea == "#112233" and len(p) == 6

    def test_too_short(self):
        with pytest.raises(PaletteError):
            parse_palette("#000000\n#111111\n")

    def test_bad_line(self):
        with pytest.raises(PaletteError):
            parse_palette("\n".join(["#000000"] * 6 + ["red"]))

    def test_default(self):
        assert len(Palette()) == 12 == len(set(DEFAULT_PALETTE))
        assert Palette().sea not in DEFAULT_PALETTE


def build(g, seed=42, clustering=None):
    lay = layout_components(g, connected_components(g), seed)
    cl = clustering or greedy_modularity_cluster(g)
    return lay, cl, natural_map(lay, cl, seed)


class TestLabels:
    def test_single_country(self):
        g = T.complete(4)
        lay, cl, m = build(g)
        labels = label_countries(cl, g, m)
        assert list(labels) == [0]
        assert labels[0].anchor == m.label_anchor[0]

    def test_default_text(self):
        g = T.two_triangles_bridge()
        lay, cl, m = build(g)
        labels = label_countries(cl, g, m)
        # vertex 0 has the highest degree in the first triangle (it carries the bridge)
        assert labels[0].text == "Region 1 (0)"
        assert labels[1].text == "Region 2 (3)"

    def test_override_names(self):
        g = T.two_triangles_bridge()
        cl = cluster_override(g, {str(i): ("Jazz" if i < 3 else "Rock") for i in range(6)})
        lay, cl, m = build(g, clustering=cl)
        assert [lab.text for lab in label_countries(cl, g, m).values()] == ["Jazz", "Rock"]

    def test_font_sqrt_rule(self):
        a = 10000.0  # 15 units, inside the clamp range
        assert font_size(4 * a) / font_size(a) == pytest.approx(2.0)
        assert font_size(0.0) == FONT_MIN and font_size(1e12) == FONT_MAX

    def test_anchors_inside(self):
        g = T.random_graph(80, 200, 3)
        lay, cl, m = build(g)
        for c, lab in label_countries(cl, g, m).items():
            assert point_in_polygon(lab.anchor, m.countries[c]) == INSIDE


class TestOverlay:
    def test_none(self):
        assert not build_overlay(T.k2(), Layout([[0, 0], [1, 0]]), "none")

    def test_edges(self):
        ov = build_overlay(T.k2(), Layout([[0, 0], [1, 0]]), "edges")
        assert ov.segments == [((0.0, 0.0), (1.0, 0.0))] and ov.dots == []

    def test_full(self):
        lay = Layout([[0, 0], [1, 0], [0, 1]])
        ov = build_overlay(T.complete(3), lay, "full")
        assert len(ov.segments) == 3 and len(ov.dots) == 3

    def test_frame(self):
        g = T.random_graph(30, 60, 1)
        lay = layout_components(g, connected_components(g), 1)
        ov = build_overlay(g, lay, "full")
        for (u, v, _), (a, b) in zip(g.edges, ov.segments):
            assert a == tuple(lay.positions[u]) and b == tuple(lay.positions[v])

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            build_overlay(T.k2(), Layout([[0, 0], [1, 0]]), "dots")


def test_render_spec_proper_and_deterministic():
    g = T.random_graph(120, 300, 5)
    lay, cl, m = build(g)
    a = build_render_spec(m, cl, g, lay, "full")
    b = build_render_spec(m, cl, g, lay, "full")
    assert a == b
    for x, y in m.country_adjacency():
        assert a.country_color[x] != a.country_color[y]
    assert set(a.country_color) == set(m.countries)
