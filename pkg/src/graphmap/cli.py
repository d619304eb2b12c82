"""Command-line pipeline: graph file in, map files and a JSON run report out.

Exit codes: 0 success, 2 usage error, 3 input parse error, 4 pipeline error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .clustering import ClusterFileError, Clustering, cluster_override, greedy_modularity_cluster
from .export import geojson_string, debug_tsv_string, svg_string
from .graph_io import FORMATS, Graph, GraphParseError, connected_components, detect_format, parse_graph
from .layout import Layout, layout_components
from .mapgen import (CountryMap, augment_sites, compute_bbox, naive_sites, smooth_boundaries,
                     synthesize_map)
from .rng import LAYOUT_STAGE, SITES_STAGE
from .style import Palette, PaletteError, build_render_spec, parse_palette

log = logging.getLogger("graphmap")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_PIPELINE = 0, 2, 3, 4
MODES = ("naive", "natural")
OVERLAYS = ("none", "edges", "full")
U64 = (1 << 64) - 1


class UsageError(ValueError):
    pass


class InputError(ValueError):
    pass


class PipelineError(RuntimeError):
    def __init__(self, stage: str, exc: BaseException):
        self.stage = stage
        super().__init__(f"{stage}: {exc}")


@dataclass(frozen=True)
class RunConfig:
    input: str
    format: str = "auto"
    svg: str | None = None
    geojson: str | None = None
    tsv: str | None = None
    mode: str = "natural"
    seed: int = 42
    density: float = 4.0
    alpha: float = 1.2
    margin: float = 0.15
    smooth_iters: int = 0
    layout_iters: int = 300
    layout_tol: float = 1e-6
    overlay: str = "none"
    clusters: str | None = None
    palette: str | None = None

    def __post_init__(self) -> None:
        checks = [
            (self.svg or self.geojson or self.tsv, "--svg/--geojson/--tsv", "at least one output is required"),
            (self.format in ("auto", *FORMATS), "--format", f"unknown format {self.format!r}"),
            (self.mode in MODES, "--mode", f"unknown mode {self.mode!r}"),
            (self.overlay in OVERLAYS, "--overlay", f"unknown overlay {self.overlay!r}"),
            (0 <= self.seed <= U64, "--seed", "seed must be an unsigned 64-bit integer"),
            (self.density >= 0, "--density", "density must be >= 0"),
            (self.alpha > 0, "--alpha", "alpha must be > 0"),
            (0 <= self.margin <= 1, "--margin", "margin must be in [0, 1]"),
            (self.smooth_iters >= 0, "--smooth-iters", "smooth-iters must be >= 0"),
            (self.layout_iters >= 0, "--layout-iters", "layout-iters must be >= 0"),
            (self.layout_tol >= 0, "--layout-tol", "layout-tol must be >= 0"),
        ]
        for ok, flag, msg in checks:
            if not ok:
                raise UsageError(f"{flag}: {msg}")


@dataclass
class RunReport:
    vertices: int
    edges: int
    clusters: int
    modularity: float
    final_stress: float
    iterations: int
    countries: int
    sea_fraction: float
    wall_time: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphmap", allow_abbrev=False, description="Render a graph as a map of countries.")
    p.add_argument("--input", required=True, help="graph file (edge list, DOT subset or JSON)")
    p.add_argument("--format", default="auto", choices=("auto", *FORMATS))
    p.add_argument("--svg", help="write the map as SVG")
    p.add_argument("--geojson", help="write the map as GeoJSON")
    p.add_argument("--tsv", help="write vertex positions and clusters as TSV")
    p.add_argument("--mode", default="natural", choices=MODES)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--density", type=float, default=4.0, help="random sites per vertex")
    p.add_argument("--alpha", type=float, default=1.2, help="land radius in median neighbour spacings")
    p.add_argument("--margin", type=float, default=0.15, help="bbox margin as a fraction of the larger side")
    p.add_argument("--smooth-iters", type=int, default=0)
    p.add_argument("--layout-iters", type=int, default=300)
    p.add_argument("--layout-tol", type=float, default=1e-6)
    p.add_argument("--overlay", default="none", choices=OVERLAYS)
    p.add_argument("--clusters", help="TSV of vertex label -> cluster name")
    p.add_argument("--palette", help="palette file, one #RRGGBB per line")
    return p


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    return RunConfig(**{k: v for k, v in vars(ns).items()})


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {what} {path!r}: {exc}") from exc


def load_graph(cfg: RunConfig) -> Graph:
    text = _read(cfg.input, "input")
    fmt = detect_format(cfg.input, text) if cfg.format == "auto" else cfg.format
    return parse_graph(text, fmt)


def _stage(name: str, fn, *args, **kwargs):
    log.info("stage %s", name)
    try:
        return fn(*args, **kwargs)
    except (InputError, UsageError):
        raise
    except Exception as exc:  # noqa: BLE001 - every failure is reported with its stage
        raise PipelineError(name, exc) from exc


def quantize(positions: np.ndarray) -> np.ndarray:
    """Snap coordinates to the 6-decimal values the debug TSV records, so a
    map rebuilt from the TSV is identical to the original."""
    return np.array([[float(f"{x:.6f}"), float(f"{y:.6f}")] for x, y in positions]).reshape(-1, 2)


def compute_layout(g: Graph, cfg: RunConfig) -> Layout:
    lay = layout_components(g, connected_components(g), cfg.seed ^ LAYOUT_STAGE,
                            cfg.layout_iters, cfg.layout_tol)
    return Layout(quantize(lay.positions), lay.final_stress, lay.iterations_used, lay.stress_history)


def compute_clustering(g: Graph, cfg: RunConfig) -> Clustering:
    if cfg.clusters:
        text = _read(cfg.clusters, "cluster file")
        try:
            return cluster_override(g, text)
        except ClusterFileError as exc:
            raise InputError(f"{cfg.clusters}: {exc}") from exc
    return greedy_modularity_cluster(g)


def build_map(layout: Layout, clustering: Clustering, cfg: RunConfig) -> CountryMap:
    bbox = compute_bbox(layout, cfg.margin)
    if cfg.mode == "naive":
        sites = naive_sites(layout, clustering, bbox)
    else:
        sites = augment_sites(layout, clustering, bbox, cfg.density, cfg.seed ^ SITES_STAGE, cfg.alpha)
    return smooth_boundaries(synthesize_map(sites), cfg.smooth_iters)


@dataclass
class PipelineResult:
    graph: Graph
    layout: Layout
    clustering: Clustering
    map: CountryMap
    outputs: dict[str, str]
    report: RunReport


def run_pipeline(cfg: RunConfig, layout_override: np.ndarray | None = None,
                 write: bool = True) -> PipelineResult:
    """Run every stage; ``layout_override`` replaces the computed positions
    (used to check that the debug TSV captures the full layout state)."""
    start = time.perf_counter()
    g = load_graph(cfg)
    return render_graph(g, cfg, layout_override, write, start)


def render_graph(g: Graph, cfg: RunConfig, layout_override: np.ndarray | None = None,
                 write: bool = False, start: float | None = None) -> PipelineResult:
    """Everything after parsing, for a graph already in memory."""
    start = time.perf_counter() if start is None else start
    log.info("graph: %d vertices, %d edges", g.n, g.m)
    if layout_override is not None:
        layout = Layout(np.asarray(layout_override, dtype=float).reshape(-1, 2))
    else:
        layout = _stage("layout", compute_layout, g, cfg)
    clustering = _stage("clustering", compute_clustering, g, cfg)
    for w in clustering.warnings:
        log.warning("%s", w)
    palette = Palette()
    if cfg.palette:
        try:
            palette = parse_palette(_read(cfg.palette, "palette"))
        except PaletteError as exc:
            raise InputError(f"{cfg.palette}: {exc}") from exc
    cmap = _stage("map synthesis", build_map, layout, clustering, cfg)
    spec = _stage("style", build_render_spec, cmap, clustering, g, layout, cfg.overlay, palette)

    outputs = {}
    if cfg.svg:
        outputs["svg"] = _stage("svg export", svg_string, cmap, spec)
    if cfg.geojson:
        outputs["geojson"] = _stage("geojson export", geojson_string, cmap, spec)
    if cfg.tsv:
        outputs["tsv"] = debug_tsv_string(layout, clustering, g.labels)
    if write:
        for kind, text in outputs.items():
            path = getattr(cfg, kind)
            try:
                Path(path).write_text(text, encoding="utf-8")
            except OSError as exc:
                raise PipelineError(f"{kind} export", OSError(f"cannot write {path!r}: {exc}")) from exc

    report = RunReport(
        vertices=g.n,
        edges=g.m,
        clusters=clustering.k,
        modularity=clustering.modularity,
        final_stress=layout.final_stress,
        iterations=layout.iterations_used,
        countries=sum(1 for mp in cmap.countries.values() if mp),
        sea_fraction=cmap.sea_fraction(),
        wall_time=time.perf_counter() - start,
    )
    return PipelineResult(g, layout, clustering, cmap, outputs, report)


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = run_pipeline(cfg)
    except (InputError, GraphParseError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PipelineError as exc:
        print(f"pipeline error in {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    print(result.report.to_json())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
