"""Incremental Delaunay triangulation (Bowyer-Watson with ghost triangles).

Triangles are kept in a dictionary mapping each directed edge ``(a, b)`` of a
counterclockwise triangle ``(a, b, c)`` to its apex ``c``. The hull is closed
off by ghost triangles ``(a, b, GHOST)`` whose "circumcircle" is the open
half-plane left of ``a -> b`` plus the open segment ``ab``. All geometric
decisions go through the exact predicates, so the result is Delaunay even
for cocircular or nearly collinear input. Cocircular ties are broken by
insertion order: a point exactly on a circumcircle does not conflict.
"""

from __future__ import annotations

from typing import Sequence

from .predicates import incircle, orient2d

GHOST = -1


class DegenerateInputError(ValueError):
    pass


def _hilbert_key(x: int, y: int, order: int) -> int:
    d = 0
    s = 1 << (order - 1)
    while s > 0:
        rx = 1 if x & s else 0
        ry = 1 if y & s else 0
        d += s * s * ((3 * rx) ^ ry)
        if ry == 0:
            if rx == 1:
                x = s - 1 - x
                y = s - 1 - y
            x, y = y, x
        s >>= 1
    return d


def _spatial_order(pts: Sequence[tuple[float, float]], idx: list[int]) -> list[int]:
    if not idx:
        return idx
    xs = [pts[i][0] for i in idx]
    ys = [pts[i][1] for i in idx]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0) or 1.0
    scale = 1023.0 / span
    keyed = [(_hilbert_key(int((pts[i][0] - x0) * scale), int((pts[i][1] - y0) * scale), 10), i)
             for i in idx]
    keyed.sort()
    return [i for _, i in keyed]


class Triangulation:
    def __init__(self, points: Sequence[tuple[float, float]]):
        self.points = [(float(x), float(y)) for x, y in points]
        self.adj: dict[tuple[int, int], int] = {}
        self._last: tuple[int, int] | None = None
        self._build()

    # -- primitive updates -------------------------------------------------
    def _add(self, a: int, b: int, c: int) -> None:
        adj = self.adj
        adj[(a, b)] = c
        adj[(b, c)] = a
        adj[(c, a)] = b
        if a != GHOST and b != GHOST and c != GHOST:
            self._last = (a, b)

    def _delete(self, a: int, b: int, c: int) -> None:
        adj = self.adj
        del adj[(a, b)]
        del adj[(b, c)]
        del adj[(c, a)]

    # -- predicates with ghost handling ------------------------------------
    def _conflict(self, a: int, b: int, c: int, u: int) -> bool:
        """Is u strictly inside the circumcircle of triangle (a, b, c)?"""
        if c == GHOST:
            pass
        elif a == GHOST:
            a, b = b, c
        elif b == GHOST:
            a, b = c, a
        else:
            p = self.points
            return incircle(*p[a], *p[b], *p[c], *p[u]) > 0
        p = self.points
        o = orient2d(*p[a], *p[b], *p[u])
        if o != 0:
            return o > 0
        (ax, ay), (bx, by), (ux, uy) = p[a], p[b], p[u]
        return (min(ax, bx) <= ux <= max(ax, bx) and min(ay, by) <= uy <= max(ay, by)
                and (ux, uy) != (ax, ay) and (ux, uy) != (bx, by))

    # -- construction --------------------------------------------------------
    def _build(self) -> None:
        pts = self.points
        n = len(pts)
        if n < 3:
            raise DegenerateInputError(f"need at least 3 points, got {n}")
        i0 = 0
        i1 = next((i for i in range(1, n) if pts[i] != pts[i0]), None)
        if i1 is None:
            raise DegenerateInputError("all points coincide")
        i2 = next((i for i in range(n) if orient2d(*pts[i0], *pts[i1], *pts[i]) != 0), None)
        if i2 is None:
            raise DegenerateInputError("all points are collinear")
        if orient2d(*pts[i0], *pts[i1], *pts[i2]) < 0:
            i1, i2 = i2, i1
        self._add(i0, i1, i2)
        self._add(i1, i0, GHOST)
        self._add(i2, i1, GHOST)
        self._add(i0, i2, GHOST)
        rest = [i for i in range(n) if i not in (i0, i1, i2)]
        for u in _spatial_order(pts, rest):
            self.insert(u)

    def _locate(self, u: int) -> tuple[int, int, int]:
        p = self.points
        a, b = self._last
        c = self.adj[(a, b)]
        came = None
        rot = 0
        for _ in range(4 * len(p) + 16):
            tri = (a, b, c)
            moved = False
            rot = (rot + 1) % 3
            for k in range(3):
                e0 = tri[(k + rot) % 3]
                e1 = tri[(k + rot + 1) % 3]
                if (e1, e0) == came:
                    continue
                if orient2d(*p[e0], *p[e1], *p[u]) < 0:
                    d = self.adj[(e1, e0)]
                    if d == GHOST:
                        return e1, e0, GHOST
                    a, b, c = e1, e0, d
                    came = (e1, e0)
                    moved = True
                    break
            if not moved:
                return tri
        raise RuntimeError("point location did not terminate")

    def insert(self, u: int) -> None:
        a, b, c = self._locate(u)
        pu = self.points[u]
        for v in (a, b, c):
            if v != GHOST and self.points[v] == pu:
                raise DegenerateInputError(f"duplicate point {pu} (indices {v} and {u})")
        self._delete(a, b, c)
        adj = self.adj
        stack = [(c, a), (b, c), (a, b)]
        while stack:
            v, w = stack.pop()
            # triangle across edge v->w is (w, v, x)
            x = adj.get((w, v))
            if x is None:
                continue
            if self._conflict(w, v, x, u):
                self._delete(w, v, x)
                stack.append((x, w))
                stack.append((v, x))
            else:
                self._add(u, v, w)

    # -- queries -------------------------------------------------------------
    def triangles(self) -> list[tuple[int, int, int]]:
        """Real triangles, counterclockwise, each listed once starting at its smallest index."""
        out = []
        for (a, b), c in self.adj.items():
            if a < b and a < c and c != GHOST and a != GHOST:
                out.append((a, b, c))
        out.sort()
        return out

    def edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for (a, b) in self.adj if GHOST < a < b)

    def hull(self) -> list[int]:
        """Hull vertices counterclockwise (collinear hull points included)."""
        nxt = {}
        for (a, b), c in self.adj.items():
            if c == GHOST:
                nxt[b] = a
        if not nxt:
            return []
        start = min(nxt)
        ring = [start]
        v = nxt[start]
        while v != start:
            ring.append(v)
            v = nxt[v]
        return ring


def delaunay(points: Sequence[tuple[float, float]]) -> list[tuple[int, int, int]]:
    """Delaunay triangles over point indices (counterclockwise)."""
    return Triangulation(points).triangles()
