"""SVG, GeoJSON and debug TSV writers with byte-stable number formatting."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, TextIO
from xml.sax.saxutils import escape

import numpy as np

from .clustering import Clustering
from .geometry.polygon import MultiPolygon, Point, signed_area
from .layout import Layout
from .mapgen import SEA, CountryMap
from .style import RenderSpec

CANVAS = 1000.0
BORDER_COLOR = "#555555"
OVERLAY_COLOR = "#333333"


class ExportError(OSError):
    pass


def _write(out: TextIO, text: str, what: str) -> None:
    try:
        out.write(text)
    except (OSError, ValueError) as exc:
        raise ExportError(f"failed writing {what}: {exc}") from exc


def _f4(x: float) -> str:
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


@dataclass(frozen=True)
class CanvasTransform:
    """Map units to SVG units: larger side 1000, y axis flipped."""

    xmin: float
    ymax: float
    scale: float
    width: float
    height: float

    @classmethod
    def for_map(cls, cmap: CountryMap) -> "CanvasTransform":
        b = cmap.bbox
        span = max(b.width, b.height)
        scale = CANVAS / span if span > 0 else 1.0
        return cls(b.xmin, b.ymax, scale, b.width * scale, b.height * scale)

    def __call__(self, p: Point) -> tuple[float, float]:
        return (p[0] - self.xmin) * self.scale, (self.ymax - p[1]) * self.scale

    def fmt(self, p: Point) -> str:
        x, y = self(p)
        return f"{_f4(x)},{_f4(y)}"


def path_data(mp: MultiPolygon, tf: Callable[[Point], str]) -> str:
    subpaths = []
    for poly in mp:
        for ring in poly.rings():
            subpaths.append("M" + " L".join(tf(p) for p in ring) + " Z")
    return " ".join(subpaths)


def svg_string(cmap: CountryMap, spec: RenderSpec) -> str:
    tf = CanvasTransform.for_map(cmap)
    w, h = _f4(tf.width), _f4(tf.height)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0.0000 0.0000 {w} {h}">',
        f'<rect id="sea" x="0.0000" y="0.0000" width="{w}" height="{h}" fill="{spec.palette.sea}"/>',
    ]
    for c in sorted(cmap.countries):
        if not cmap.countries[c]:
            continue
        lines.append(f'<path id="country-{c}" class="country" fill="{spec.color_of(c)}" '
                     f'fill-rule="evenodd" d="{path_data(cmap.countries[c], tf.fmt)}"/>')
    for c in sorted(cmap.countries):
        if not cmap.countries[c]:
            continue
        lines.append(f'<path class="border" fill="none" stroke="{BORDER_COLOR}" '
                     f'stroke-width="1.0000" d="{path_data(cmap.countries[c], tf.fmt)}"/>')
    for a, b in spec.overlay.segments:
        (x1, y1), (x2, y2) = tf(a), tf(b)
        lines.append(f'<line class="edge" x1="{_f4(x1)}" y1="{_f4(y1)}" x2="{_f4(x2)}" y2="{_f4(y2)}" '
                     f'stroke="{OVERLAY_COLOR}" stroke-width="0.8000"/>')
    for p in spec.overlay.dots:
        x, y = tf(p)
        lines.append(f'<circle class="vertex" cx="{_f4(x)}" cy="{_f4(y)}" r="2.5000" fill="{OVERLAY_COLOR}"/>')
    for c in sorted(spec.labels):
        lab = spec.labels[c]
        x, y = tf(lab.anchor)
        lines.append(f'<text class="label" x="{_f4(x)}" y="{_f4(y)}" font-size="{_f4(lab.font_size)}" '
                     f'text-anchor="middle" dominant-baseline="middle">{escape(lab.text)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(cmap: CountryMap, spec: RenderSpec, out: TextIO) -> None:
    _write(out, svg_string(cmap, spec), "SVG")


def _closed(ring: list[Point], ccw: bool) -> list[list[float]]:
    if (signed_area(ring) > 0) != ccw:
        ring = ring[::-1]
    pts = [[round(x, 6) + 0.0, round(y, 6) + 0.0] for x, y in ring]
    return pts + [pts[0]]


def _geometry(mp: MultiPolygon) -> dict:
    return {"type": "MultiPolygon",
            "coordinates": [[_closed(p.outer, True)] + [_closed(h, False) for h in p.holes] for p in mp]}


def geojson_dict(cmap: CountryMap, spec: RenderSpec) -> dict:
    features = []
    for c in sorted(cmap.countries):
        label = spec.labels.get(c)
        features.append({
            "type": "Feature",
            "properties": {"cluster_id": c, "name": label.text if label else "",
                           "color": spec.color_of(c)},
            "geometry": _geometry(cmap.countries[c]),
        })
    features.append({
        "type": "Feature",
        "properties": {"cluster_id": SEA, "name": "sea", "color": spec.palette.sea},
        "geometry": _geometry(cmap.sea),
    })
    return {"type": "FeatureCollection", "features": features}


def geojson_string(cmap: CountryMap, spec: RenderSpec) -> str:
    # floats are pre-rounded to 6 decimals, so repr-based JSON output is stable
    return json.dumps(geojson_dict(cmap, spec), separators=(",", ":")) + "\n"


def write_geojson(cmap: CountryMap, spec: RenderSpec, out: TextIO) -> None:
    _write(out, geojson_string(cmap, spec), "GeoJSON")


def debug_tsv_string(layout: Layout, clustering: Clustering, labels: list[str]) -> str:
    rows = ["id\tlabel\tx\ty\tcluster\n"]
    for v, (x, y) in enumerate(np.asarray(layout.positions).reshape(-1, 2)):
        rows.append(f"{v}\t{labels[v]}\t{x:.6f}\t{y:.6f}\t{clustering.assignment[v]}\n")
    return "".join(rows)


def write_debug_tsv(layout: Layout, clustering: Clustering, out: TextIO,
                    labels: list[str] | None = None) -> None:
    labels = labels if labels is not None else [str(v) for v in range(len(layout.positions))]
    _write(out, debug_tsv_string(layout, clustering, labels), "debug TSV")


def read_debug_tsv(text: str) -> tuple[np.ndarray, list[int], list[str]]:
    """Positions, cluster ids and labels from a debug TSV."""
    lines = text.splitlines()
    if not lines or lines[0] != "id\tlabel\tx\ty\tcluster":
        raise ValueError("not a debug TSV: bad header")
    pos, clusters, labels = [], [], []
    for line in lines[1:]:
        _, label, x, y, c = line.split("\t")
        pos.append((float(x), float(y)))
        clusters.append(int(c))
        labels.append(label)
    return np.array(pos, dtype=float).reshape(-1, 2), clusters, labels
