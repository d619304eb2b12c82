"""Planar geometry kernel: exact predicates, Delaunay, clipped Voronoi, polygons."""

from .delaunay import DegenerateInputError, Triangulation, delaunay
from .polygon import (BOUNDARY, INSIDE, OUTSIDE, InvalidPolygonError, MultiPolygon,
                      Polygon, centroid, dissolve, point_in_polygon, polygon_area,
                      polygon_union, signed_area)
from .predicates import circumcenter, incircle, orient2d
from .voronoi import BBox, BBoxContractError, VoronoiDiagram, voronoi_clipped

__all__ = [
    "BBox", "BBoxContractError", "BOUNDARY", "DegenerateInputError", "INSIDE",
    "InvalidPolygonError", "MultiPolygon", "OUTSIDE", "Polygon", "Triangulation",
    "VoronoiDiagram", "centroid", "circumcenter", "delaunay", "dissolve", "incircle",
    "orient2d", "point_in_polygon", "polygon_area", "polygon_union", "signed_area",
    "voronoi_clipped",
]
