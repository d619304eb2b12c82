"""Shared runners for the acceptance suite and the scripts in ``scripts/``."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass

from .cli import PipelineResult, RunConfig, render_graph
from .geometry.voronoi import BBox
from .mapgen import CORNER, RANDOM, SEA, VERTEX, SiteSet, corner_sites, mean_border_vertices
from .testgraphs import MATRIX_GRAPHS, MATRIX_SEEDS

MODES = ("naive", "natural")


def matrix_config(seed: int, mode: str, smooth_iters: int = 0, **kw) -> RunConfig:
    return RunConfig(input="<memory>", svg="map.svg", geojson="map.geojson", seed=seed,
                     mode=mode, smooth_iters=smooth_iters, overlay="full", **kw)


def run_cell(graph: str, seed: int, mode: str, smooth_iters: int = 0, **kw) -> PipelineResult:
    logging.getLogger("graphmap").setLevel(logging.WARNING)
    return render_graph(MATRIX_GRAPHS[graph](), matrix_config(seed, mode, smooth_iters, **kw))


@dataclass(frozen=True)
class Cell:
    graph: str
    seed: int
    mode: str

    @property
    def key(self) -> str:
        return f"{self.graph}/{self.seed}/{self.mode}"


def matrix_cells() -> list[Cell]:
    return [Cell(g, s, m) for g in MATRIX_GRAPHS for s in MATRIX_SEEDS for m in MODES]


def run_matrix(smooth_iters: int = 0) -> dict[Cell, PipelineResult]:
    return {c: run_cell(c.graph, c.seed, c.mode, smooth_iters) for c in matrix_cells()}


def digests(result: PipelineResult) -> dict[str, str]:
    return {kind: hashlib.sha256(text.encode("utf-8")).hexdigest()
            for kind, text in sorted(result.outputs.items())}


def boundary_ratio(results: dict[Cell, PipelineResult],
                   graphs=("two-triangles-bridge", "two-K4-bridge")) -> tuple[float, float]:
    """Mean border-vertex count for natural and naive mode, pooled over the
    seed set on the given graphs."""
    nat, naive = [], []
    for c, r in results.items():
        if c.graph in graphs:
            (nat if c.mode == "natural" else naive).append(mean_border_vertices(r.map))
    return sum(nat) / len(nat), sum(naive) / len(naive)


def _grid_sites(labels: dict[tuple[int, int], int], size: int) -> SiteSet:
    box = BBox(0.0, 0.0, float(size), float(size))
    pts, labs, prov, vsite = [], [], [], []
    for (i, j), lab in sorted(labels.items()):
        if lab != SEA:
            vsite.append(len(pts))
        pts.append((i + 0.5, j + 0.5))
        labs.append(lab)
        prov.append(VERTEX if lab != SEA else RANDOM)
    for c in corner_sites(box):
        pts.append(c)
        labs.append(SEA)
        prov.append(CORNER)
    return SiteSet(pts, labs, prov, box, vsite)


def lake_sites() -> SiteSet:
    """A 3x3 block of land sites around one sea site: one country with one lake."""
    return _grid_sites({(i, j): SEA if (i, j) == (1, 1) else 0 for i in range(3) for j in range(3)}, 3)


def island_sites() -> SiteSet:
    """Two land columns split by a sea column: one country in two parts."""
    return _grid_sites({(i, j): SEA if i == 1 else 0 for i in range(3) for j in range(3)}, 3)
