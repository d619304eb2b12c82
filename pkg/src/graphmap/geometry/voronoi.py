"""Voronoi diagrams clipped to an axis-aligned box.

Cells are built as a planar subdivision with shared vertex ids: every
Voronoi vertex (a circumcentre, merged across cocircular triangles) and
every point where a Voronoi edge meets the box border is computed exactly
once, so neighbouring cells agree bit-for-bit on their common boundary.
That is what lets same-label cells be dissolved by edge cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .delaunay import Triangulation
from .polygon import Point, Polygon
from .predicates import circumcenter, incircle, orient2d

MERGE_TOL = 1e-12


class BBoxContractError(ValueError):
    pass


@dataclass(frozen=True)
class BBox:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def corners(self) -> list[Point]:
        return [(self.xmin, self.ymin), (self.xmax, self.ymin),
                (self.xmax, self.ymax), (self.xmin, self.ymax)]

    def strictly_contains(self, p: Point) -> bool:
        return self.xmin < p[0] < self.xmax and self.ymin < p[1] < self.ymax

    def on_border(self, p: Point) -> bool:
        return p[0] in (self.xmin, self.xmax) or p[1] in (self.ymin, self.ymax)

    def as_polygon(self) -> Polygon:
        return Polygon(self.corners())


@dataclass
class VoronoiDiagram:
    sites: list[Point]
    cells: list[Polygon]
    bbox: BBox
    site_index: list[int]  # input index -> index into `sites`
    vertices: list[Point] = field(repr=False)
    cell_rings: list[list[int]] = field(repr=False)  # vertex ids, CCW
    # (i, j) with i < j -> (vertex id, vertex id) of the shared edge, positive length
    edges: dict[tuple[int, int], tuple[int, int]] = field(repr=False)


def merge_duplicates(points: Sequence[Point], tol: float = MERGE_TOL) -> tuple[list[Point], list[int]]:
    """Collapse points closer than ``tol``; the first occurrence survives."""
    unique: list[Point] = []
    index: list[int] = []
    grid: dict[tuple[int, int], list[int]] = {}
    cell = max(tol, 1e-300)
    for p in points:
        gx, gy = math.floor(p[0] / cell), math.floor(p[1] / cell)
        found = None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for k in grid.get((gx + dx, gy + dy), ()):
                    q = unique[k]
                    if (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 <= tol * tol:
                        found = k
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            found = len(unique)
            unique.append((float(p[0]), float(p[1])))
            grid.setdefault((gx, gy), []).append(found)
        index.append(found)
    return unique, index


class _Builder:
    def __init__(self, sites: list[Point], bbox: BBox) -> None:
        self.sites = sites
        self.bbox = bbox
        self.vertices: list[Point] = list(bbox.corners())  # ids 0..3 are the corners
        self.cell_vertices: list[set[int]] = [set() for _ in sites]
        self.edges: dict[tuple[int, int], tuple[int, int]] = {}
        span = max(bbox.width, bbox.height)
        self.snap = MERGE_TOL * max(span, 1.0)

    def new_vertex(self, p: Point) -> int:
        for c, q in enumerate(self.vertices[:4]):
            if abs(p[0] - q[0]) <= self.snap and abs(p[1] - q[1]) <= self.snap:
                return c
        self.vertices.append(p)
        return len(self.vertices) - 1

    def clip(self, origin: Point, direction: Point, t_lo: float, t_hi: float
             ) -> tuple[float, float, int, int] | None:
        """Liang-Barsky clip of origin + t * direction, t in [t_lo, t_hi].
        Returns the clipped parameter range and the box side (0-3, or -1 for
        none) that cut each end."""
        b = self.bbox
        ox, oy = origin
        dx, dy = direction
        side_lo = side_hi = -1
        for side, p, q in ((0, -dx, ox - b.xmin), (1, dx, b.xmax - ox),
                           (2, -dy, oy - b.ymin), (3, dy, b.ymax - oy)):
            if p == 0.0:
                if q < 0:
                    return None
                continue
            r = q / p
            if p < 0:
                if r > t_lo:
                    t_lo, side_lo = r, side
            else:
                if r < t_hi:
                    t_hi, side_hi = r, side
        if t_lo >= t_hi:
            return None
        return t_lo, t_hi, side_lo, side_hi

    def border_point(self, origin: Point, direction: Point, t: float, side: int) -> Point:
        b = self.bbox
        x = origin[0] + t * direction[0]
        y = origin[1] + t * direction[1]
        # pin the coordinate that lies on the border exactly
        if side == 0:
            x = b.xmin
        elif side == 1:
            x = b.xmax
        elif side == 2:
            y = b.ymin
        elif side == 3:
            y = b.ymax
        return (min(max(x, b.xmin), b.xmax), min(max(y, b.ymin), b.ymax))

    def add_edge(self, i: int, j: int, origin: Point, direction: Point,
                 t_lo: float, t_hi: float, start_id: int | None, end_id: int | None) -> None:
        """Voronoi edge between sites i and j along origin + t * direction."""
        clipped = self.clip(origin, direction, t_lo, t_hi)
        if clipped is None:
            return
        c_lo, c_hi, s_lo, s_hi = clipped
        if c_lo == t_lo and start_id is not None:
            a = start_id
        else:
            a = self.new_vertex(self.border_point(origin, direction, c_lo, s_lo))
        if c_hi == t_hi and end_id is not None:
            b = end_id
        else:
            b = self.new_vertex(self.border_point(origin, direction, c_hi, s_hi))
        if a == b:
            return
        self.cell_vertices[i].update((a, b))
        self.cell_vertices[j].update((a, b))
        self.edges[(min(i, j), max(i, j))] = (a, b)

    def assign_corners(self) -> None:
        for c, (cx, cy) in enumerate(self.bbox.corners()):
            best = min(range(len(self.sites)),
                       key=lambda k: ((self.sites[k][0] - cx) ** 2 + (self.sites[k][1] - cy) ** 2, k))
            self.cell_vertices[best].add(c)

    def rings(self) -> list[list[int]]:
        out = []
        for k, (sx, sy) in enumerate(self.sites):
            ids = sorted(self.cell_vertices[k],
                         key=lambda v: (math.atan2(self.vertices[v][1] - sy, self.vertices[v][0] - sx), v))
            out.append(ids)
        return out


def _general(b: _Builder, tri: Triangulation) -> None:
    pts = b.sites
    triangles = tri.triangles()
    index = {t: k for k, t in enumerate(triangles)}
    left_of: dict[tuple[int, int], int] = {}  # directed edge -> triangle on its left
    for k, (p, q, r) in enumerate(triangles):
        left_of[(p, q)] = left_of[(q, r)] = left_of[(r, p)] = k

    # exactly cocircular neighbours share one Voronoi vertex
    parent = list(range(len(triangles)))

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for (u, v), k in left_of.items():
        other = left_of.get((v, u))
        if u < v and other is not None:
            t = triangles[k]
            apex = tri.adj[(v, u)]
            if incircle(*pts[t[0]], *pts[t[1]], *pts[t[2]], *pts[apex]) == 0:
                ra, rb = find(k), find(other)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    centers: dict[int, tuple[Point, int | None]] = {}

    def center_of(k: int) -> tuple[Point, int | None]:
        r = find(k)
        if r not in centers:
            t = triangles[r]
            c = circumcenter(*pts[t[0]], *pts[t[1]], *pts[t[2]])
            centers[r] = (c, b.new_vertex(c) if _inside_closed(b.bbox, c) else None)
        return centers[r]

    for u, v in tri.edges():
        k1 = left_of.get((u, v))
        k2 = left_of.get((v, u))
        if k1 is not None and k2 is not None:
            if find(k1) == find(k2):
                continue  # zero-length edge between cocircular triangles
            (c1, id1), (c2, id2) = center_of(k1), center_of(k2)
            b.add_edge(u, v, c2, (c1[0] - c2[0], c1[1] - c2[1]), 0.0, 1.0, id2, id1)
        else:
            # hull edge: ray from the circumcentre along the outward normal
            ex, ey = pts[v][0] - pts[u][0], pts[v][1] - pts[u][1]
            if k1 is not None:
                c, cid = center_of(k1)
                normal = (ey, -ex)
            else:
                c, cid = center_of(k2)
                normal = (-ey, ex)
            b.add_edge(u, v, c, normal, 0.0, math.inf, cid, None)


def _inside_closed(bbox: BBox, p: Point) -> bool:
    return bbox.xmin <= p[0] <= bbox.xmax and bbox.ymin <= p[1] <= bbox.ymax


def _collinear(b: _Builder) -> None:
    pts = b.sites
    order = sorted(range(len(pts)), key=lambda k: (pts[k][0], pts[k][1]))
    for i, j in zip(order, order[1:]):
        (ax, ay), (bx, by) = pts[i], pts[j]
        mid = (0.5 * (ax + bx), 0.5 * (ay + by))
        direction = (-(by - ay), bx - ax)
        b.add_edge(i, j, mid, direction, -math.inf, math.inf, None, None)


def _all_collinear(pts: Sequence[Point]) -> bool:
    if len(pts) < 3:
        return True
    a = pts[0]
    b = next(p for p in pts[1:] if p != a)
    return all(orient2d(*a, *b, *p) == 0 for p in pts)


def voronoi_clipped(points: Sequence[Point], bbox: BBox) -> VoronoiDiagram:
    if not points:
        raise BBoxContractError("need at least one site")
    for p in points:
        if not bbox.strictly_contains(p):
            raise BBoxContractError(f"site {p} is not strictly inside {bbox}")
    sites, site_index = merge_duplicates(points)
    b = _Builder(sites, bbox)
    if len(sites) > 1:
        if _all_collinear(sites):
            _collinear(b)
        else:
            _general(b, Triangulation(sites))
    b.assign_corners()
    rings = b.rings()
    cells = [Polygon([b.vertices[v] for v in r]) for r in rings]
    return VoronoiDiagram(sites, cells, bbox, site_index, b.vertices, rings, b.edges)
