"""Write SVG and GeoJSON maps of the matrix graphs into a directory."""

from __future__ import annotations

import argparse
from pathlib import Path

from graphmap.experiments import run_cell
from graphmap.testgraphs import MATRIX_GRAPHS


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="maps")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--smooth-iters", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for graph in MATRIX_GRAPHS:
        for mode in ("naive", "natural"):
            res = run_cell(graph, args.seed, mode, args.smooth_iters)
            stem = out / f"{graph}-{mode}"
            stem.with_suffix(".svg").write_text(res.outputs["svg"])
            stem.with_suffix(".geojson").write_text(res.outputs["geojson"])
            print(f"{stem}: {res.report.countries} countries, sea {res.report.sea_fraction:.2f}")


if __name__ == "__main__":
    main()
