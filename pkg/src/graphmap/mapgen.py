"""Turn a layout and a clustering into countries, sea, lakes and islands.

Naive mode is the plain Voronoi diagram of the vertices plus the four box
corners. Natural mode adds seeded random filler sites: a filler within
``alpha * L`` of some vertex (``L`` = median nearest-neighbour distance)
takes that vertex's cluster, anything farther out becomes sea. Borders
then follow many small cells instead of a few long bisectors, and sea
pockets inside the drawing become lakes and straits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .clustering import Clustering
from .geometry.polygon import (BOUNDARY, INSIDE, MultiPolygon, Point, Polygon,
                               centroid, dissolve, point_in_polygon, polygon_area)
from .geometry.voronoi import MERGE_TOL, BBox, voronoi_clipped
from .layout import Layout
from .rng import SplitMix64

SEA = -1
VERTEX, CORNER, RANDOM = "vertex", "corner", "random"
CORNER_INSET = 1e-6
ANCHOR_GRID = 64
ANCHOR_ROUNDS = 3


class SiteGenerationError(RuntimeError):
    pass


@dataclass
class SiteSet:
    points: list[Point]
    labels: list[int]
    provenance: list[str]
    bbox: BBox
    vertex_site: list[int] = field(default_factory=list)  # vertex id -> site index

    def __len__(self) -> int:
        return len(self.points)

    def count(self, kind: str) -> int:
        return sum(1 for p in self.provenance if p == kind)


@dataclass
class CountryMap:
    bbox: BBox
    countries: dict[int, MultiPolygon]
    sea: MultiPolygon
    adjacency: set[tuple[int, int]]
    label_anchor: dict[int, Point]
    vertex_points: list[Point] = field(default_factory=list)
    vertex_clusters: list[int] = field(default_factory=list)

    def regions(self) -> Iterator[tuple[int, MultiPolygon]]:
        for c in sorted(self.countries):
            yield c, self.countries[c]
        yield SEA, self.sea

    def area(self, label: int) -> float:
        return polygon_area(self.sea if label == SEA else self.countries[label])

    def total_area(self) -> float:
        return sum(polygon_area(mp) for _, mp in self.regions())

    def sea_fraction(self) -> float:
        return polygon_area(self.sea) / self.bbox.area

    def lakes(self) -> int:
        return sum(len(p.holes) for mp in self.countries.values() for p in mp)

    def islands(self) -> int:
        """Countries split into two or more parts."""
        return sum(1 for mp in self.countries.values() if len(mp) >= 2)

    def country_adjacency(self) -> set[tuple[int, int]]:
        return {(a, b) for a, b in self.adjacency if a != SEA and b != SEA}


def compute_bbox(layout: Layout | np.ndarray, margin_fraction: float = 0.15) -> BBox:
    pos = layout.positions if isinstance(layout, Layout) else np.asarray(layout, dtype=float)
    if len(pos) == 0:
        return BBox(0.0, 0.0, 1.0, 1.0)
    (x0, y0), (x1, y1) = pos.min(axis=0).tolist(), pos.max(axis=0).tolist()
    w, h = x1 - x0, y1 - y0
    if w == 0 and h == 0:
        return BBox(x0 - 0.5, y0 - 0.5, x0 + 0.5, y0 + 0.5)
    m = margin_fraction * max(w, h)
    return BBox(x0 - m, y0 - m, x1 + m, y1 + m)


def corner_sites(bbox: BBox) -> list[Point]:
    eps = CORNER_INSET * bbox.diagonal
    return [(bbox.xmin + eps, bbox.ymin + eps), (bbox.xmax - eps, bbox.ymin + eps),
            (bbox.xmax - eps, bbox.ymax - eps), (bbox.xmin + eps, bbox.ymax - eps)]


def _base_sites(layout: Layout, clustering: Clustering, bbox: BBox) -> SiteSet:
    pts = [(float(x), float(y)) for x, y in layout.positions]
    labels = list(clustering.assignment)
    prov = [VERTEX] * len(pts)
    for c in corner_sites(bbox):
        pts.append(c)
        labels.append(SEA)
        prov.append(CORNER)
    return SiteSet(pts, labels, prov, bbox, list(range(len(layout.positions))))


def naive_sites(layout: Layout, clustering: Clustering, bbox: BBox) -> SiteSet:
    return _base_sites(layout, clustering, bbox)


def labeling_radius(positions: np.ndarray, bbox: BBox, alpha: float = 1.2) -> float:
    """``alpha`` times the median distance from a vertex to its nearest other vertex."""
    if len(positions) < 2:
        return alpha * bbox.diagonal / 4.0
    dist, _ = cKDTree(positions).query(positions, k=2)
    return alpha * float(np.median(dist[:, 1]))


class _SpatialHash:
    """Near-duplicate detection for incrementally added sites."""

    def __init__(self, cell: float) -> None:
        self.cell = cell
        self.grid: dict[tuple[int, int], list[Point]] = {}

    def _key(self, p: Point) -> tuple[int, int]:
        return math.floor(p[0] / self.cell), math.floor(p[1] / self.cell)

    def add(self, p: Point) -> None:
        self.grid.setdefault(self._key(p), []).append(p)

    def near(self, p: Point, tol: float) -> bool:
        kx, ky = self._key(p)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for q in self.grid.get((kx + dx, ky + dy), ()):
                    if (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 <= tol * tol:
                        return True
        return False


def augment_sites(layout: Layout, clustering: Clustering, bbox: BBox,
                  density: float = 4.0, seed: int = 0, alpha: float = 1.2) -> SiteSet:
    """Vertex and corner sites plus ``ceil(density * n)`` labelled random fillers.

    Fillers are drawn x then y from SplitMix64(seed); a draw that is not
    strictly inside the box or lands within 1e-12 of an existing site is
    discarded and redrawn.
    """
    if density < 0:
        raise ValueError("density must be nonnegative")
    sites = _base_sites(layout, clustering, bbox)
    n = len(layout.positions)
    want = math.ceil(density * n)
    if want == 0 or n == 0:
        return sites
    pos = np.asarray(layout.positions, dtype=float)
    radius = labeling_radius(pos, bbox, alpha)
    tree = cKDTree(pos)

    index = _SpatialHash(bbox.diagonal / 1000.0)
    for p in sites.points:
        index.add(p)
    rng = SplitMix64(seed)
    drawn: list[Point] = []
    attempts = 0
    while len(drawn) < want:
        if attempts >= 10 * want:
            raise SiteGenerationError(f"could not place {want} distinct random sites")
        attempts += 1
        p = (bbox.xmin + rng.uniform() * bbox.width, bbox.ymin + rng.uniform() * bbox.height)
        if not bbox.strictly_contains(p) or index.near(p, MERGE_TOL):
            continue
        index.add(p)
        drawn.append(p)

    dist, nearest = tree.query(np.array(drawn), k=1)
    for p, dd, v in zip(drawn, dist, nearest):
        sites.points.append(p)
        sites.labels.append(clustering.assignment[int(v)] if dd <= radius else SEA)
        sites.provenance.append(RANDOM)
    return sites


def synthesize_map(sites: SiteSet) -> CountryMap:
    vor = voronoi_clipped(sites.points, sites.bbox)
    cell_label = [None] * len(vor.sites)
    for k, u in enumerate(vor.site_index):
        if cell_label[u] is None:
            cell_label[u] = sites.labels[k]

    groups: dict[int, list[list[int]]] = {}
    for u, ring in enumerate(vor.cell_rings):
        groups.setdefault(cell_label[u], []).append(ring)
    regions = {lab: dissolve(rings, vor.vertices) for lab, rings in sorted(groups.items())}

    adjacency = set()
    for (i, j) in vor.edges:
        a, b = cell_label[i], cell_label[j]
        if a != b:
            adjacency.add((min(a, b), max(a, b)))

    vertex_points = [sites.points[s] for s in sites.vertex_site]
    vertex_clusters = [sites.labels[s] for s in sites.vertex_site]
    countries = {c: mp for c, mp in regions.items() if c != SEA}
    for c in set(vertex_clusters) - set(countries):
        countries[c] = []  # every site of this cluster was merged away as a duplicate
    countries = dict(sorted(countries.items()))
    return CountryMap(
        bbox=sites.bbox,
        countries=countries,
        sea=regions.get(SEA, []),
        adjacency=adjacency,
        label_anchor={c: place_label_anchor(mp) for c, mp in countries.items() if mp},
        vertex_points=vertex_points,
        vertex_clusters=vertex_clusters,
    )


def naive_map(layout: Layout, clustering: Clustering, margin_fraction: float = 0.15) -> CountryMap:
    bbox = compute_bbox(layout, margin_fraction)
    return synthesize_map(naive_sites(layout, clustering, bbox))


def natural_map(layout: Layout, clustering: Clustering, seed: int, density: float = 4.0,
                alpha: float = 1.2, margin_fraction: float = 0.15) -> CountryMap:
    bbox = compute_bbox(layout, margin_fraction)
    return synthesize_map(augment_sites(layout, clustering, bbox, density, seed, alpha))


# ---------------------------------------------------------------------------
# label anchors


def _segments(poly: Polygon) -> np.ndarray:
    segs = []
    for ring in poly.rings():
        r = np.asarray(ring, dtype=float)
        segs.append(np.stack([r, np.roll(r, -1, axis=0)], axis=1))
    return np.concatenate(segs)


def _grid_scores(poly: Polygon, segs: np.ndarray, xs: np.ndarray, ys: np.ndarray
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Signed distance to the boundary (positive inside) at each grid point."""
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    px, py = gx.ravel()[:, None], gy.ravel()[:, None]
    ax, ay = segs[:, 0, 0][None, :], segs[:, 0, 1][None, :]
    bx, by = segs[:, 1, 0][None, :], segs[:, 1, 1][None, :]
    dx, dy = bx - ax, by - ay
    ll = dx * dx + dy * dy
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.clip(np.where(ll > 0, ((px - ax) * dx + (py - ay) * dy) / ll, 0.0), 0.0, 1.0)
    ex, ey = px - ax - t * dx, py - ay - t * dy
    dist = np.sqrt((ex * ex + ey * ey).min(axis=1))
    # even-odd crossing count over every ring
    straddle = (ay > py) != (by > py)
    with np.errstate(invalid="ignore", divide="ignore"):
        xcross = ax + (py - ay) * dx / np.where(dy == 0, 1.0, dy)
    inside = (np.count_nonzero(straddle & (px < xcross), axis=1) % 2) == 1
    pts = np.column_stack([px.ravel(), py.ravel()])
    return np.where(inside, dist, -dist), pts


def pole_of_inaccessibility(poly: Polygon, grid: int = ANCHOR_GRID,
                            rounds: int = ANCHOR_ROUNDS) -> Point:
    """Interior point farthest from the boundary, by a refined grid search."""
    x0, y0, x1, y1 = poly.bounds()
    segs = _segments(poly)
    best, best_score = None, -math.inf
    for _ in range(rounds + 1):
        hx, hy = (x1 - x0) / grid, (y1 - y0) / grid
        xs = x0 + hx * (np.arange(grid) + 0.5)
        ys = y0 + hy * (np.arange(grid) + 0.5)
        scores, pts = _grid_scores(poly, segs, xs, ys)
        k = int(np.argmax(scores))
        if scores[k] > best_score:
            best_score, best = float(scores[k]), (float(pts[k, 0]), float(pts[k, 1]))
        cx, cy = best
        x0, x1 = cx - 2 * hx, cx + 2 * hx
        y0, y1 = cy - 2 * hy, cy + 2 * hy
    return best


def place_label_anchor(country: MultiPolygon | Polygon) -> Point:
    parts = [country] if isinstance(country, Polygon) else list(country)
    if not parts:
        raise ValueError("cannot anchor an empty region")
    largest = max(parts, key=lambda p: (polygon_area(p), p.outer[0]))
    c = centroid(largest)
    if point_in_polygon(c, largest) == INSIDE:
        return c
    return pole_of_inaccessibility(largest)


# ---------------------------------------------------------------------------
# smoothing


def _chaikin_open(chain: list[Point]) -> list[Point]:
    k = len(chain) - 1
    out = [chain[0]]
    for i in range(k):
        (ax, ay), (bx, by) = chain[i], chain[i + 1]
        if i > 0:
            out.append((0.75 * ax + 0.25 * bx, 0.75 * ay + 0.25 * by))
        if i < k - 1:
            out.append((0.25 * ax + 0.75 * bx, 0.25 * ay + 0.75 * by))
    out.append(chain[-1])
    return out


def _chaikin_closed(ring: list[Point]) -> list[Point]:
    out = []
    n = len(ring)
    for i in range(n):
        (ax, ay), (bx, by) = ring[i], ring[(i + 1) % n]
        out.append((0.75 * ax + 0.25 * bx, 0.75 * ay + 0.25 * by))
        out.append((0.25 * ax + 0.75 * bx, 0.25 * ay + 0.75 * by))
    return out


def _smooth_once(regions: list[tuple[int, MultiPolygon]], bbox: BBox) -> list[tuple[int, MultiPolygon]]:
    degree: dict[Point, set[Point]] = {}
    for _, mp in regions:
        for poly in mp:
            for ring in poly.rings():
                n = len(ring)
                for i in range(n):
                    a, b = ring[i], ring[(i + 1) % n]
                    degree.setdefault(a, set()).add(b)
                    degree.setdefault(b, set()).add(a)

    def fixed(p: Point) -> bool:
        return len(degree[p]) != 2 or bbox.on_border(p)

    def smooth_ring(ring: list[Point]) -> list[Point]:
        starts = [i for i, p in enumerate(ring) if fixed(p)]
        if not starts:
            return _chaikin_closed(ring)
        s = starts[0]
        rot = ring[s:] + ring[:s]
        out: list[Point] = []
        chain = [rot[0]]
        for p in rot[1:] + [rot[0]]:
            chain.append(p)
            if fixed(p):
                out.extend(_chaikin_open(chain)[:-1])
                chain = [p]
        return out

    return [(lab, [Polygon(smooth_ring(p.outer), [smooth_ring(h) for h in p.holes]) for p in mp])
            for lab, mp in regions]


def smooth_boundaries(cmap: CountryMap, iterations: int = 0) -> CountryMap:
    """Chaikin corner cutting on every boundary chain between junctions.

    Junction vertices (where three or more regions meet, pinch points, and
    anything on the box border) stay put, and each chain is cut identically
    from both sides, so the regions still tile the box. If any vertex ends up
    outside its own country the input map is returned unchanged.
    """
    if iterations <= 0:
        return cmap
    regions = list(cmap.regions())
    for _ in range(iterations):
        regions = _smooth_once(regions, cmap.bbox)
    countries = {lab: mp for lab, mp in regions if lab != SEA}
    sea = next(mp for lab, mp in regions if lab == SEA)
    for p, c in zip(cmap.vertex_points, cmap.vertex_clusters):
        if point_in_polygon(p, countries[c]) not in (INSIDE, BOUNDARY):
            return cmap
    return CountryMap(
        bbox=cmap.bbox,
        countries=countries,
        sea=sea,
        adjacency=set(cmap.adjacency),
        label_anchor={c: place_label_anchor(mp) for c, mp in countries.items() if mp},
        vertex_points=list(cmap.vertex_points),
        vertex_clusters=list(cmap.vertex_clusters),
    )


# ---------------------------------------------------------------------------
# diagnostics


def _edge_set(mp: MultiPolygon) -> set[tuple[Point, Point]]:
    edges = set()
    for poly in mp:
        for ring in poly.rings():
            n = len(ring)
            for i in range(n):
                a, b = ring[i], ring[(i + 1) % n]
                edges.add((a, b) if a <= b else (b, a))
    return edges


def border_vertex_counts(cmap: CountryMap) -> dict[tuple[int, int], int]:
    """Distinct vertices on the shared boundary of each adjacent country pair."""
    edge_sets = {c: _edge_set(mp) for c, mp in cmap.countries.items()}
    out = {}
    for a, b in sorted(cmap.country_adjacency()):
        shared = edge_sets[a] & edge_sets[b]
        if shared:
            out[(a, b)] = len({p for e in shared for p in e})
    return out


def mean_border_vertices(cmap: CountryMap) -> float:
    counts = border_vertex_counts(cmap)
    return sum(counts.values()) / len(counts) if counts else 0.0


def check_partition(cmap: CountryMap) -> float:
    """Relative mismatch between the summed region areas and the box area."""
    return abs(cmap.total_area() - cmap.bbox.area) / cmap.bbox.area


def vertices_contained(cmap: CountryMap) -> list[int]:
    """Ids of vertices that are not inside-or-on their own country (ideally empty)."""
    bad = []
    for v, (p, c) in enumerate(zip(cmap.vertex_points, cmap.vertex_clusters)):
        if point_in_polygon(p, cmap.countries.get(c, [])) not in (INSIDE, BOUNDARY):
            bad.append(v)
    return bad


def polygon_sets_equal(a: CountryMap, b: CountryMap) -> bool:
    def canon(mp: Sequence[Polygon]):
        return sorted((tuple(p.outer), tuple(tuple(h) for h in p.holes)) for p in mp)
    return (sorted(a.countries) == sorted(b.countries)
            and all(canon(a.countries[c]) == canon(b.countries[c]) for c in a.countries)
            and canon(a.sea) == canon(b.sea))
