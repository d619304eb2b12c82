"""Polygons with holes, point location, and union by shared-edge dissolution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .predicates import orient2d

Point = tuple[float, float]
Ring = list[Point]

BOUNDARY_TOL = 1e-12
SNAP = 1e-12

INSIDE, BOUNDARY, OUTSIDE = "inside", "boundary", "outside"


class InvalidPolygonError(ValueError):
    pass


def signed_area(ring: Sequence[Point]) -> float:
    n = len(ring)
    if n < 3:
        return 0.0
    x0, y0 = ring[0]
    s = 0.0
    for i in range(1, n - 1):
        x1, y1 = ring[i]
        x2, y2 = ring[i + 1]
        s += (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    return 0.5 * s


def _ring_moments(ring: Sequence[Point]) -> tuple[float, float, float]:
    """Signed area and first moments (sum of x dA, y dA)."""
    n = len(ring)
    a = mx = my = 0.0
    x0, y0 = ring[0]
    for i in range(1, n - 1):
        x1, y1 = ring[i][0] - x0, ring[i][1] - y0
        x2, y2 = ring[i + 1][0] - x0, ring[i + 1][1] - y0
        cross = x1 * y2 - x2 * y1
        a += cross
        mx += cross * (x1 + x2)
        my += cross * (y1 + y2)
    a *= 0.5
    # moments relative to the first vertex, shifted back
    return a, mx / 6.0 + a * x0, my / 6.0 + a * y0


@dataclass
class Polygon:
    """Outer ring counterclockwise, holes clockwise; rings are not closed
    (the first point is not repeated)."""

    outer: Ring
    holes: list[Ring] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.outer = [(float(x), float(y)) for x, y in self.outer]
        self.holes = [[(float(x), float(y)) for x, y in h] for h in self.holes]

    def rings(self) -> list[Ring]:
        return [self.outer, *self.holes]

    def normalized(self) -> "Polygon":
        outer = self.outer if signed_area(self.outer) >= 0 else self.outer[::-1]
        holes = [h if signed_area(h) <= 0 else h[::-1] for h in self.holes]
        return Polygon(outer, holes)

    def validate(self) -> None:
        for ring in self.rings():
            if len(ring) < 3:
                raise InvalidPolygonError("ring with fewer than 3 points")
            for i, p in enumerate(ring):
                if not (math.isfinite(p[0]) and math.isfinite(p[1])):
                    raise InvalidPolygonError(f"non-finite coordinate {p}")
                if p == ring[(i + 1) % len(ring)]:
                    raise InvalidPolygonError(f"consecutive duplicate point {p}")
            if signed_area(ring) == 0.0:
                raise InvalidPolygonError("ring has zero area")

    @property
    def area(self) -> float:
        return polygon_area(self)

    @property
    def centroid(self) -> Point:
        return centroid(self)

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.outer]
        ys = [p[1] for p in self.outer]
        return min(xs), min(ys), max(xs), max(ys)


MultiPolygon = list[Polygon]


def polygon_area(poly: Polygon | Iterable[Polygon]) -> float:
    if isinstance(poly, Polygon):
        return abs(signed_area(poly.outer)) - sum(abs(signed_area(h)) for h in poly.holes)
    return sum(polygon_area(p) for p in poly)


def centroid(poly: Polygon | Iterable[Polygon]) -> Point:
    """Area-weighted centroid; holes subtract."""
    parts = [poly] if isinstance(poly, Polygon) else list(poly)
    a = mx = my = 0.0
    for p in parts:
        for k, ring in enumerate(p.rings()):
            ra, rx, ry = _ring_moments(ring)
            if ra < 0:
                ra, rx, ry = -ra, -rx, -ry
            s = 1.0 if k == 0 else -1.0
            a += s * ra
            mx += s * rx
            my += s * ry
    if a == 0:
        raise InvalidPolygonError("centroid of a zero-area polygon")
    return mx / a, my / a


def _on_segment(p: Point, a: Point, b: Point, tol: float) -> bool:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    px, py = p[0] - ax, p[1] - ay
    ll = dx * dx + dy * dy
    if ll == 0.0:
        return px * px + py * py <= tol * tol
    t = max(0.0, min(1.0, (px * dx + py * dy) / ll))
    ex, ey = px - t * dx, py - t * dy
    return ex * ex + ey * ey <= tol * tol


def _crossings(p: Point, ring: Sequence[Point]) -> int:
    x, y = p
    inside = 0
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            # orientation decides the side exactly
            o = orient2d(x1, y1, x2, y2, x, y)
            if (o > 0) == (y2 > y1):
                inside ^= 1
    return inside


def point_in_polygon(p: Point, poly: Polygon | Iterable[Polygon], tol: float = BOUNDARY_TOL) -> str:
    """Classify p as ``"inside"``, ``"boundary"`` or ``"outside"`` (even-odd rule)."""
    parts = [poly] if isinstance(poly, Polygon) else list(poly)
    for part in parts:
        for ring in part.rings():
            n = len(ring)
            for i in range(n):
                if _on_segment(p, ring[i], ring[(i + 1) % n], tol):
                    return BOUNDARY
    for part in parts:
        inside = _crossings(p, part.outer)
        for h in part.holes:
            inside ^= _crossings(p, h)
        if inside:
            return INSIDE
    return OUTSIDE


def distance_to_boundary(p: Point, poly: Polygon) -> float:
    best = math.inf
    px, py = p
    for ring in poly.rings():
        n = len(ring)
        for i in range(n):
            ax, ay = ring[i]
            bx, by = ring[(i + 1) % n]
            dx, dy = bx - ax, by - ay
            ll = dx * dx + dy * dy
            t = 0.0 if ll == 0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / ll))
            ex, ey = px - ax - t * dx, py - ay - t * dy
            best = min(best, ex * ex + ey * ey)
    return math.sqrt(best)


# ---------------------------------------------------------------------------
# dissolution of edge-sharing polygons


def trace_rings(edges: Iterable[tuple[int, int]], coords: Sequence[Point]) -> list[list[int]]:
    """Link directed edges into closed rings of vertex ids.

    At a vertex with several outgoing edges the walk takes the first one met
    turning clockwise from the reversed incoming edge, which keeps the region
    on the left as tight as possible and splits pinch points into separate
    simple rings.
    """
    out: dict[int, list[int]] = {}
    for a, b in edges:
        out.setdefault(a, []).append(b)
    remaining = sum(len(v) for v in out.values())
    rings = []

    def pick(prev: int, v: int) -> int:
        cand = out[v]
        if len(cand) == 1:
            return cand.pop()
        px, py = coords[prev]
        vx, vy = coords[v]
        back = math.atan2(py - vy, px - vx)
        best, best_turn = None, None
        for i, w in enumerate(cand):
            ang = math.atan2(coords[w][1] - vy, coords[w][0] - vx)
            turn = (back - ang) % (2 * math.pi)  # clockwise sweep from `back`
            if turn == 0.0:
                turn = 2 * math.pi
            if best_turn is None or turn < best_turn:
                best, best_turn = i, turn
        return cand.pop(best)

    for start in sorted(out):
        while out.get(start):
            ring = [start]
            prev, v = start, out[start].pop()
            remaining -= 1
            while v != start:
                ring.append(v)
                nxt = pick(prev, v)
                remaining -= 1
                prev, v = v, nxt
            rings.append(ring)
    if remaining:
        raise InvalidPolygonError("unbalanced edge set: boundary does not close")
    return rings


def assemble(rings: list[list[int]], coords: Sequence[Point]) -> MultiPolygon:
    """Group traced rings into polygons: CCW rings are shells, CW rings holes,
    each hole going to the smallest shell that contains it."""
    shells, holes = [], []
    for r in rings:
        pts = [coords[i] for i in r]
        a = signed_area(pts)
        if a > 0:
            shells.append((a, pts))
        elif a < 0:
            holes.append((-a, pts))
    shells.sort(key=lambda s: s[0])
    polys = [Polygon(pts) for _, pts in shells]
    for ha, hpts in holes:
        target = None
        for k, (sa, spts) in enumerate(shells):
            if sa < ha:
                continue
            if _ring_inside(hpts, polys[k]):
                target = k
                break
        if target is None:
            raise InvalidPolygonError("hole is not contained in any shell")
        polys[target].holes.append(hpts)
    order = sorted(range(len(polys)), key=lambda k: (-shells[k][0], polys[k].outer[0]))
    return [polys[k] for k in order]


def _ring_inside(hole: Ring, shell: Polygon) -> bool:
    shell_only = Polygon(shell.outer)
    for p in hole:
        c = point_in_polygon(p, shell_only, 0.0)
        if c != BOUNDARY:
            return c == INSIDE
    n = len(hole)
    for i in range(n):
        mid = (0.5 * (hole[i][0] + hole[(i + 1) % n][0]), 0.5 * (hole[i][1] + hole[(i + 1) % n][1]))
        c = point_in_polygon(mid, shell_only, 0.0)
        if c != BOUNDARY:
            return c == INSIDE
    return True


def dissolve(rings_by_id: Iterable[Sequence[int]], coords: Sequence[Point]) -> MultiPolygon:
    """Union of interior-disjoint polygons whose shared edges use identical
    vertex ids. Every input ring must already be oriented (shells CCW, holes
    CW); edges traversed in both directions cancel."""
    count: dict[tuple[int, int], int] = {}
    for ring in rings_by_id:
        n = len(ring)
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            if a == b:
                continue
            if count.get((b, a), 0) > 0:
                count[(b, a)] -= 1
            else:
                count[(a, b)] = count.get((a, b), 0) + 1
    edges = [e for e, c in count.items() for _ in range(c)]
    return assemble(trace_rings(edges, coords), coords)


def _snap_key(p: Point) -> tuple[int, int]:
    return (round(p[0] / SNAP), round(p[1] / SNAP))


def _drop_collinear(poly: Polygon) -> Polygon:
    def clean(ring: Ring) -> Ring:
        pts = list(ring)
        changed = True
        while changed and len(pts) > 3:
            changed = False
            for i in range(len(pts)):
                a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
                if orient2d(*a, *b, *c) == 0:
                    del pts[i]
                    changed = True
                    break
        return pts
    return Polygon(clean(poly.outer), [clean(h) for h in poly.holes])


def _split_t_junctions(rings: list[list[int]], coords: list[Point]) -> list[list[int]]:
    """Insert vertices that lie on another ring's edge into that edge."""
    out = []
    for ring in rings:
        new = []
        n = len(ring)
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            new.append(a)
            pa, pb = coords[a], coords[b]
            lo_x, hi_x = min(pa[0], pb[0]), max(pa[0], pb[0])
            lo_y, hi_y = min(pa[1], pb[1]), max(pa[1], pb[1])
            on = []
            for v, pv in enumerate(coords):
                if v in (a, b):
                    continue
                if not (lo_x - SNAP <= pv[0] <= hi_x + SNAP and lo_y - SNAP <= pv[1] <= hi_y + SNAP):
                    continue
                if _on_segment(pv, pa, pb, SNAP):
                    dx, dy = pb[0] - pa[0], pb[1] - pa[1]
                    on.append(((pv[0] - pa[0]) * dx + (pv[1] - pa[1]) * dy, v))
            new.extend(v for _, v in sorted(on))
        out.append(new)
    return out


def _interiors_overlap(polys: Sequence[Polygon]) -> bool:
    import shapely
    from shapely import STRtree

    geoms = [shapely.Polygon(p.outer, p.holes) for p in polys]
    tree = STRtree(geoms)
    left, right = tree.query(geoms, predicate="intersects")
    for i, j in zip(left, right):
        if i < j:
            inter = geoms[i].intersection(geoms[j]).area
            if inter > 1e-9 * min(geoms[i].area, geoms[j].area):
                return True
    return False


def _union_overlapping(polys: Sequence[Polygon]) -> MultiPolygon:
    import shapely

    merged = shapely.union_all([shapely.Polygon(p.outer, p.holes) for p in polys])
    parts = getattr(merged, "geoms", [merged])
    out = []
    for g in parts:
        if g.is_empty or g.geom_type != "Polygon":
            continue
        g = shapely.geometry.polygon.orient(g, 1.0)
        out.append(Polygon(list(g.exterior.coords)[:-1],
                           [list(r.coords)[:-1] for r in g.interiors]))
    out.sort(key=lambda p: (-p.area, p.outer[0]))
    return out


def polygon_union(polys: Sequence[Polygon]) -> MultiPolygon:
    """Union of polygons as a list of holed polygons.

    Interior-disjoint inputs (the common case: cells of a subdivision) are
    dissolved exactly by cancelling shared edges after snapping coordinates
    to a 1e-12 grid; overlapping inputs go through a general overlay.
    """
    polys = [p.normalized() for p in polys]
    for p in polys:
        p.validate()
    if not polys:
        return []
    if _interiors_overlap(polys):
        return _union_overlapping(polys)
    ids: dict[tuple[int, int], int] = {}
    coords: list[Point] = []
    rings = []
    for p in polys:
        for ring in p.rings():
            r = []
            for pt in ring:
                key = _snap_key(pt)
                if key not in ids:
                    ids[key] = len(coords)
                    coords.append(pt)
                if not r or r[-1] != ids[key]:
                    r.append(ids[key])
            if len(r) > 1 and r[0] == r[-1]:
                r.pop()
            rings.append(r)
    rings = _split_t_junctions(rings, coords)
    return [_drop_collinear(p) for p in dissolve(rings, coords)]
