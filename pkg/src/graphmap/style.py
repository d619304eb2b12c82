"""Country colours, labels and the optional graph overlay."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable

from .clustering import Clustering
from .geometry.polygon import Point, polygon_area
from .graph_io import Graph
from .layout import Layout
from .mapgen import SEA, CountryMap

DEFAULT_PALETTE = [
    "#8DD3C7", "#FFFFB3", "#BEBADA", "#FB8072", "#80B1D3", "#FDB462",
    "#B3DE69", "#FCCDE5", "#D9D9D9", "#BC80BD", "#CCEBC5", "#FFED6F",
]
SEA_COLOR = "#DCEBF7"
MIN_PALETTE = 6
FONT_MIN, FONT_MAX = 8.0, 48.0
FONT_SCALE = 0.15
OVERLAY_MODES = ("none", "edges", "full")

_HEX = re.compile(r"#[0-9A-Fa-f]{6}")


class ColoringError(RuntimeError):
    def __init__(self, country: int, palette_size: int):
        self.country = country
        super().__init__(f"palette of {palette_size} colours exhausted at country {country}")


class PaletteError(ValueError):
    pass


@dataclass
class Palette:
    colors: list[str] = field(default_factory=lambda: list(DEFAULT_PALETTE))
    sea: str = SEA_COLOR

    def __len__(self) -> int:
        return len(self.colors)


def parse_palette(text: str) -> Palette:
    """One ``#RRGGBB`` per line (at least six); the first line may be ``sea #RRGGBB``."""
    colors: list[str] = []
    sea = SEA_COLOR
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    for k, line in enumerate(lines):
        parts = line.split()
        if k == 0 and len(parts) == 2 and parts[0] == "sea":
            if not _HEX.fullmatch(parts[1]):
                raise PaletteError(f"line 1: bad sea colour {parts[1]!r}")
            sea = parts[1].upper()
            continue
        if len(parts) != 1 or not _HEX.fullmatch(parts[0]):
            raise PaletteError(f"line {k + 1}: expected #RRGGBB, got {line!r}")
        colors.append(parts[0].upper())
    if len(colors) < MIN_PALETTE:
        raise PaletteError(f"palette needs at least {MIN_PALETTE} colours, got {len(colors)}")
    return Palette(colors, sea)


def color_countries(adjacency: Iterable[tuple[int, int]], k: int, p: int = len(DEFAULT_PALETTE)) -> list[int]:
    """Greedy colouring in id order: each country takes the smallest index its
    already coloured neighbours do not use."""
    nbrs: list[set[int]] = [set() for _ in range(k)]
    for a, b in adjacency:
        if a == SEA or b == SEA or a == b:
            continue
        nbrs[a].add(b)
        nbrs[b].add(a)
    colors = [-1] * k
    for c in range(k):
        used = {colors[o] for o in nbrs[c] if colors[o] >= 0}
        idx = next((i for i in range(p) if i not in used), None)
        if idx is None:
            raise ColoringError(c, p)
        colors[c] = idx
    return colors


@dataclass(frozen=True)
class Label:
    text: str
    anchor: Point
    font_size: float


def font_size(area: float, canvas_scale: float = 1.0) -> float:
    """Proportional to sqrt(area) in canvas units, clamped to [8, 48]."""
    raw = FONT_SCALE * math.sqrt(max(area, 0.0)) * canvas_scale
    return min(max(raw, FONT_MIN), FONT_MAX)


def canvas_scale(cmap: CountryMap, size: float = 1000.0) -> float:
    span = max(cmap.bbox.width, cmap.bbox.height)
    return size / span if span > 0 else 1.0


def label_countries(clustering: Clustering, graph: Graph, cmap: CountryMap) -> dict[int, Label]:
    scale = canvas_scale(cmap)
    out = {}
    for c, mp in cmap.countries.items():
        if not mp:
            continue
        if clustering.names is not None:
            text = clustering.names[c]
        else:
            members = clustering.members(c)
            top = max(members, key=lambda v: (graph.weighted_degree(v), -v))
            text = f"Region {c + 1} ({graph.vertices[top].label})"
        out[c] = Label(text, cmap.label_anchor[c], font_size(polygon_area(mp), scale))
    return out


@dataclass
class Overlay:
    segments: list[tuple[Point, Point]] = field(default_factory=list)
    dots: list[Point] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.segments or self.dots)


def build_overlay(graph: Graph, layout: Layout, mode: str = "none") -> Overlay:
    if mode not in OVERLAY_MODES:
        raise ValueError(f"overlay mode must be one of {OVERLAY_MODES}, got {mode!r}")
    if mode == "none":
        return Overlay()
    pos = [(float(x), float(y)) for x, y in layout.positions]
    segments = [(pos[u], pos[v]) for u, v, _ in graph.edges]
    return Overlay(segments, pos if mode == "full" else [])


@dataclass
class RenderSpec:
    country_color: dict[int, int]
    palette: Palette
    labels: dict[int, Label]
    overlay: Overlay = field(default_factory=Overlay)

    def color_of(self, c: int) -> str:
        return self.palette.sea if c == SEA else self.palette.colors[self.country_color[c]]


def build_render_spec(cmap: CountryMap, clustering: Clustering, graph: Graph, layout: Layout,
                      overlay: str = "none", palette: Palette | None = None) -> RenderSpec:
    palette = palette or Palette()
    k = max(cmap.countries, default=-1) + 1
    colors = color_countries(cmap.adjacency, k, len(palette))
    return RenderSpec(
        country_color={c: colors[c] for c in cmap.countries},
        palette=palette,
        labels=label_countries(clustering, graph, cmap),
        overlay=build_overlay(graph, layout, overlay),
    )
