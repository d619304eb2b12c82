"""Orientation and in-circle tests with a floating-point filter and an exact
rational fallback.

The filters use Shewchuk's first-stage error bounds. When the float
determinant is too close to zero to trust, the determinant is recomputed
exactly with :class:`fractions.Fraction` (every double is a dyadic rational,
so the result is the true sign).
"""

from __future__ import annotations

from fractions import Fraction

_EPS = 2.0 ** -53
CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def orient2d(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> int:
    """+1 if a, b, c turn counterclockwise, -1 clockwise, 0 collinear."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    bound = CCW_BOUND * (abs(detleft) + abs(detright))
    if det > bound or -det > bound:
        return 1 if det > 0 else -1
    return _orient_exact(ax, ay, bx, by, cx, cy)


def _orient_exact(ax, ay, bx, by, cx, cy) -> int:
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle(ax: float, ay: float, bx: float, by: float, cx: float, cy: float,
             dx: float, dy: float) -> int:
    """+1 if d lies inside the circle through a, b, c (a, b, c counterclockwise),
    -1 outside, 0 on the circle."""
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    bound = ICC_BOUND * permanent
    if det > bound or -det > bound:
        return 1 if det > 0 else -1
    return _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    ax, ay, bx, by, cx, cy, dx, dy = map(Fraction, (ax, ay, bx, by, cx, cy, dx, dy))
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return _sign(det)


def circumcenter(ax: float, ay: float, bx: float, by: float,
                 cx: float, cy: float) -> tuple[float, float]:
    # relative to a for accuracy
    bx, by = bx - ax, by - ay
    cx, cy = cx - ax, cy - ay
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return ax + ux, ay + uy
